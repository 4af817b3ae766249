#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "roadsearch/bench.hpp"
#include "roadsearch/error.hpp"
#include "roadsearch/oracle.hpp"
#include "support.hpp"

using namespace roadsearch;
using namespace roadsearch::bench;
using T1 = oracle::FixtureT1;

namespace {

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

ExperimentReport t1_report(int runs) {
  ExperimentConfig cfg;
  cfg.fixed_pair = std::make_pair(T1::a, T1::t);
  cfg.runs_per_pair = runs;
  return run_experiment(cfg, T1::graph());
}

}  // namespace

TEST_CASE("sample_pairs") {
  const RoadGraph g = netgen::gen_grid({.width = 5, .height = 5});
  const auto first = sample_pairs(g, 40, 11);
  CHECK(first == sample_pairs(g, 40, 11));
  CHECK(first != sample_pairs(g, 40, 12));
  std::set<std::pair<std::uint32_t, std::uint32_t>> distinct;
  for (const auto& [s, t] : first) {
    CHECK(s != t);
    distinct.emplace(s.value, t.value);
  }
  CHECK(distinct.size() == 40);

  GraphBuilder two(Metric::planar);
  two.add_node(1, {0, 0});
  two.add_node(2, {0, 1});
  two.add_edge(1, 2, 1, false);
  const RoadGraph tiny = std::move(two).build();
  const auto one = sample_pairs(tiny, 1, 5);
  REQUIRE(one.size() == 1);
  CHECK(one[0].first != one[0].second);
  CHECK(sample_pairs(tiny, 2, 5).size() == 2);
  CHECK_THROWS_AS(sample_pairs(tiny, 3, 5), Error);

  GraphBuilder single(Metric::planar);
  single.add_node(1, {0, 0});
  try {
    sample_pairs(std::move(single).build(), 1, 1);
    FAIL("expected TooFewNodes");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::TooFewNodes);
  }
}

TEST_CASE("sampled pairs on a 149-node network are all solvable") {
  const RoadGraph g = prepare_network(ExperimentConfig{
      .network = netgen::GenSpec{.kind = netgen::GenSpec::Kind::random_geometric, .n = 190,
                                 .connect_radius = 0.12, .seed = 5, .oneway_fraction = 0.1}});
  REQUIRE(g.node_count() >= 100);
  for (const auto& [s, t] : sample_pairs(g, 200, 1)) CHECK_NOTHROW(dijkstra(g, s, t));
}

TEST_CASE("experiment on T1 reproduces the hand-derived figures") {
  const ExperimentReport r = t1_report(3);
  CHECK_FALSE(r.failed);
  REQUIRE(r.rows.size() == 12);
  CHECK(r.rows[0].algorithm == Algorithm::dijkstra());
  CHECK(r.rows[1].algorithm.label() == "Standard A*");
  CHECK(r.rows[0].mean_nodes_expanded == 4.0);
  CHECK(r.rows[1].mean_nodes_expanded == 3.0);
  REQUIRE(r.pairs.size() == 1);
  for (const CellRecord& cell : r.pairs[0].cells) {
    CHECK(cell.cost == 2.0);
    CHECK(cell.runtimes_s.size() == 3);
    CHECK(cell.path == std::vector<ExternalId>{T1::a, T1::b, T1::t});
  }
  for (const AlgorithmRow& row : r.rows) {
    CHECK(row.timing_samples == 3);
    CHECK(row.pair_samples == 1);
  }

  const std::string table = emit_report(r, Format::table);
  CHECK(table.find("status: OK") != std::string::npos);
  CHECK(table.find("Standard A*") != std::string::npos);
  // Every row shows the same cost.
  std::istringstream lines(table);
  std::string line;
  int with_cost = 0;
  while (std::getline(lines, line)) with_cost += line.ends_with("  2") || line.ends_with(" 2");
  CHECK(with_cost == 12);
}

TEST_CASE("report formats") {
  const ExperimentReport r = t1_report(1);
  const std::string csv = emit_report(r, Format::csv);
  CHECK(csv.starts_with("algorithm,k,mean_runtime_s,mean_nodes_expanded\n"));
  CHECK(count_lines(csv) == 13);
  CHECK(csv.find("\nDijkstra,,") != std::string::npos);
  CHECK(csv.find("\nStandard A*,0,") != std::string::npos);
  CHECK(csv.find("\nA* k=10,10,") != std::string::npos);

  const std::string plot = emit_report(r, Format::plot);
  CHECK(plot.starts_with("k,mean_runtime_s,mean_nodes_expanded\n0,"));
  CHECK(plot.find("# dijkstra,") != std::string::npos);
  CHECK(count_lines(plot) == 13);

  const auto j = nlohmann::json::parse(emit_report(r, Format::json));
  CHECK(j["status"] == "OK");
  CHECK(j["rows"].size() == 12);
  CHECK(j["pairs"][0]["cells"][0]["nodes_expanded"] == 4);

  ExperimentReport empty = r;
  empty.rows.clear();
  CHECK(emit_report(empty, Format::csv) == "algorithm,k,mean_runtime_s,mean_nodes_expanded\n");
  CHECK_THROWS_AS(parse_format("xml"), Error);
}

TEST_CASE("cost disagreement marks the report FAILED") {
  // An arc far cheaper than its metric distance makes euclidean A* settle
  // the target through the wrong route.
  GraphBuilder trap(Metric::planar);
  trap.add_node(1, {0, 0});
  trap.add_node(2, {0, 4});
  trap.add_node(3, {3, 0});
  trap.add_node(4, {3, 4});
  trap.add_edge(1, 3, 3.0, false);
  trap.add_edge(3, 4, 0.1, false);  // 4 units apart, costs 0.1
  trap.add_edge(4, 2, 3.0, false);
  trap.add_edge(1, 2, 6.5, false);
  const RoadGraph g = std::move(trap).build();
  ExperimentConfig cfg;
  cfg.fixed_pair = std::make_pair(ExternalId{1}, ExternalId{2});
  cfg.algorithms = {Algorithm::dijkstra(), Algorithm::astar(0)};
  const ExperimentReport r = run_experiment(cfg, g);
  CHECK(r.pairs[0].cells[0].cost == doctest::Approx(6.1));
  CHECK(r.pairs[0].cells[1].cost == 6.5);
  CHECK(r.failed);
  CHECK(emit_report(r, Format::json).find("FAILED") != std::string::npos);
}

TEST_CASE("reports are deterministic apart from timing") {
  ExperimentConfig cfg{.network = netgen::GenSpec{.kind = netgen::GenSpec::Kind::grid, .width = 12,
                                                  .height = 12, .jitter = 0.2, .seed = 3},
                       .algorithms = standard_algorithms(4),
                       .num_pairs = 10,
                       .runs_per_pair = 2,
                       .seed = 9};
  auto stripped = [](const ExperimentReport& r) {
    nlohmann::json j = report_to_json(r);
    j.erase("metadata");
    for (auto& row : j["rows"]) {
      row.erase("mean_runtime_s");
      row.erase("median_runtime_s");
    }
    for (auto& p : j["pairs"]) {
      for (auto& c : p["cells"]) c.erase("runtimes_s");
    }
    return j.dump();
  };
  const std::string first = stripped(run_experiment(cfg));
  CHECK(first == stripped(run_experiment(cfg)));
  cfg.threads = 3;
  CHECK(first == stripped(run_experiment(cfg)));
}

TEST_CASE("look-ahead work grows with k") {
  ExperimentConfig cfg{.network = netgen::GenSpec{.kind = netgen::GenSpec::Kind::grid, .width = 15,
                                                  .height = 15, .jitter = 0.25, .seed = 4},
                       .algorithms = standard_algorithms(6),
                       .num_pairs = 15};
  const ExperimentReport r = run_experiment(cfg);
  for (std::size_t i = 3; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].mean_lookahead_steps >= r.rows[i - 1].mean_lookahead_steps);
  }
}

TEST_CASE("20x20 grid: every A* variant expands no more than Dijkstra") {
  ExperimentConfig cfg{.network = netgen::GenSpec{.kind = netgen::GenSpec::Kind::grid, .width = 20,
                                                  .height = 20, .jitter = 0.2, .seed = 1},
                       .num_pairs = 50};
  const ExperimentReport r = run_experiment(cfg);
  CHECK_FALSE(r.failed);
  REQUIRE(r.rows.size() == 12);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].mean_nodes_expanded <= r.rows[0].mean_nodes_expanded);
  }
}

TEST_CASE("config validation and JSON") {
  ExperimentConfig cfg;
  cfg.runs_per_pair = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.runs_per_pair = 1;
  cfg.num_pairs = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.num_pairs = 1;
  cfg.algorithms = {Algorithm::astar(11)};
  CHECK_THROWS_AS(cfg.validate(), Error);

  const auto parsed = config_from_json(nlohmann::json::parse(R"({
    "network": {"kind": "grid", "width": 6, "height": 7, "seed": 3},
    "k_max": 3, "num_pairs": 4, "runs_per_pair": 2, "seed": 8
  })"));
  CHECK(parsed.algorithms.size() == 5);
  CHECK(parsed.num_pairs == 4);
  CHECK(std::get<netgen::GenSpec>(parsed.network).height == 7);

  const auto files = config_from_json(nlohmann::json::parse(R"({"network": "data/net", "pair": [3, 9]})"));
  CHECK(std::get<NetworkFiles>(files.network).nodes == std::filesystem::path("data/net/nodes.csv"));
  CHECK(files.fixed_pair == std::make_pair(ExternalId{3}, ExternalId{9}));

  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"network": "x", "bogus": 1})")), Error);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"num_pairs": 1})")), Error);
}
