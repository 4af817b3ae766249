#include "roadsearch/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "roadsearch/error.hpp"
#include "roadsearch/random.hpp"

namespace roadsearch::bench {

using nlohmann::json;

std::string Algorithm::label() const {
  if (kind == Kind::dijkstra) return "Dijkstra";
  return k == 0 ? "Standard A*" : "A* k=" + std::to_string(k);
}

std::vector<Algorithm> standard_algorithms(int k_max) {
  std::vector<Algorithm> out{Algorithm::dijkstra()};
  for (int k = 0; k <= k_max; ++k) out.push_back(Algorithm::astar(k));
  return out;
}

NetworkFiles NetworkFiles::in_directory(const std::filesystem::path& dir) {
  return {dir / "nodes.csv", dir / "edges.csv"};
}

void ExperimentConfig::validate() const {
  if (num_pairs < 1) throw Error(Errc::InvalidConfig, "num_pairs must be >= 1");
  if (runs_per_pair < 1) throw Error(Errc::InvalidConfig, "runs_per_pair must be >= 1");
  if (threads < 1) throw Error(Errc::InvalidConfig, "threads must be >= 1");
  for (const Algorithm& a : algorithms) {
    if (a.kind == Algorithm::Kind::astar && (a.k < 0 || a.k > max_k)) {
      throw Error(Errc::InvalidConfig,
                  "look-ahead k=" + std::to_string(a.k) + " outside [0, " + std::to_string(max_k) + "]");
    }
  }
  if (fixed_pair && num_pairs != 1) {
    throw Error(Errc::InvalidConfig, "a fixed source-target pair requires num_pairs = 1");
  }
}

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> known,
                         std::string_view where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(Errc::InvalidConfig, "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

netgen::GenSpec gen_spec_from_json(const json& j) {
  reject_unknown_keys(j, {"kind", "width", "height", "n", "connect_radius", "cost_factor", "jitter",
                          "seed", "oneway_fraction"},
                      "network");
  netgen::GenSpec spec;
  spec.kind = netgen::parse_kind(j.at("kind").get<std::string>());
  spec.width = j.value("width", spec.width);
  spec.height = j.value("height", spec.height);
  spec.n = j.value("n", spec.n);
  spec.connect_radius = j.value("connect_radius", spec.connect_radius);
  spec.cost_factor = j.value("cost_factor", spec.cost_factor);
  spec.jitter = j.value("jitter", spec.jitter);
  spec.seed = j.value("seed", spec.seed);
  spec.oneway_fraction = j.value("oneway_fraction", spec.oneway_fraction);
  return spec;
}

json gen_spec_to_json(const netgen::GenSpec& spec) {
  return {{"kind", netgen::to_string(spec.kind)}, {"width", spec.width},
          {"height", spec.height},               {"n", spec.n},
          {"connect_radius", spec.connect_radius}, {"cost_factor", spec.cost_factor},
          {"jitter", spec.jitter},               {"seed", spec.seed},
          {"oneway_fraction", spec.oneway_fraction}};
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  try {
    reject_unknown_keys(j, {"network", "k_max", "k_values", "include_dijkstra", "num_pairs",
                            "runs_per_pair", "seed", "pair", "max_k", "strict", "reopen", "threads"},
                        "config");
    ExperimentConfig cfg;
    const json& net = j.at("network");
    if (net.is_string()) {
      cfg.network = NetworkFiles::in_directory(net.get<std::string>());
    } else if (net.contains("kind")) {
      cfg.network = gen_spec_from_json(net);
    } else {
      reject_unknown_keys(net, {"nodes", "edges"}, "network");
      cfg.network = NetworkFiles{net.at("nodes").get<std::string>(), net.at("edges").get<std::string>()};
    }
    cfg.max_k = j.value("max_k", cfg.max_k);
    cfg.algorithms.clear();
    if (j.value("include_dijkstra", true)) cfg.algorithms.push_back(Algorithm::dijkstra());
    if (j.contains("k_values")) {
      for (int k : j.at("k_values").get<std::vector<int>>()) cfg.algorithms.push_back(Algorithm::astar(k));
    } else {
      const int k_max = j.value("k_max", 10);
      for (int k = 0; k <= k_max; ++k) cfg.algorithms.push_back(Algorithm::astar(k));
    }
    cfg.num_pairs = j.value("num_pairs", cfg.num_pairs);
    cfg.runs_per_pair = j.value("runs_per_pair", cfg.runs_per_pair);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("pair")) {
      const auto pair = j.at("pair").get<std::vector<ExternalId>>();
      if (pair.size() != 2) throw Error(Errc::InvalidConfig, "pair must be [source, target]");
      cfg.fixed_pair = std::make_pair(pair[0], pair[1]);
    }
    cfg.strict = j.value("strict", cfg.strict);
    cfg.reopen = j.value("reopen", cfg.reopen);
    cfg.threads = j.value("threads", cfg.threads);
    return cfg;
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, e.what());
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  if (const auto* files = std::get_if<NetworkFiles>(&cfg.network)) {
    j["network"] = {{"nodes", files->nodes.string()}, {"edges", files->edges.string()}};
  } else {
    j["network"] = gen_spec_to_json(std::get<netgen::GenSpec>(cfg.network));
  }
  json algorithms = json::array();
  for (const Algorithm& a : cfg.algorithms) algorithms.push_back(a.label());
  j["algorithms"] = algorithms;
  j["num_pairs"] = cfg.num_pairs;
  j["runs_per_pair"] = cfg.runs_per_pair;
  j["seed"] = cfg.seed;
  j["pair"] = cfg.fixed_pair ? json::array({cfg.fixed_pair->first, cfg.fixed_pair->second}) : json(nullptr);
  j["max_k"] = cfg.max_k;
  j["strict"] = cfg.strict;
  j["reopen"] = cfg.reopen;
  j["threads"] = cfg.threads;
  return j;
}

std::vector<std::pair<NodeId, NodeId>> sample_pairs(const RoadGraph& g, std::size_t n,
                                                    std::uint64_t seed) {
  const std::uint64_t nodes = g.node_count();
  if (nodes < 2) throw Error(Errc::TooFewNodes, "need at least 2 nodes to sample pairs");
  if (n > nodes * (nodes - 1)) {
    throw Error(Errc::InvalidConfig, "cannot draw " + std::to_string(n) + " distinct pairs from " +
                                         std::to_string(nodes) + " nodes");
  }
  Rng rng(seed);
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(n);
  while (out.size() < n) {
    const auto s = static_cast<std::uint32_t>(rng.below(nodes));
    auto t = static_cast<std::uint32_t>(rng.below(nodes - 1));
    if (t >= s) ++t;
    if (seen.emplace(s, t).second) out.emplace_back(NodeId{s}, NodeId{t});
  }
  return out;
}

RoadGraph prepare_network(const ExperimentConfig& cfg) {
  if (const auto* files = std::get_if<NetworkFiles>(&cfg.network)) {
    LoadOptions options;
    options.strict = cfg.strict;
    return largest_navigable_component(load_network(files->nodes, files->edges, options));
  }
  return largest_navigable_component(netgen::generate(std::get<netgen::GenSpec>(cfg.network)));
}

namespace {

CellRecord run_cell(const RoadGraph& g, NodeId s, NodeId t, const Algorithm& algorithm,
                    const ExperimentConfig& cfg) {
  CellRecord cell;
  SearchOptions options;
  options.reopen = cfg.reopen;
  try {
    for (int run = 0; run < cfg.runs_per_pair; ++run) {
      const SearchResult r = algorithm.kind == Algorithm::Kind::dijkstra
                                 ? dijkstra(g, s, t, options)
                                 : astar(g, s, t, algorithm.heuristic(), options);
      cell.runtimes_s.push_back(r.wall_time_s);
      if (run == 0) {
        cell.cost = r.cost;
        cell.nodes_expanded = r.nodes_expanded;
        cell.heuristic_evals = r.heuristic_evals;
        cell.lookahead_steps = r.lookahead_steps;
        for (NodeId n : r.path.nodes()) cell.path.push_back(g.external_id(n));
      }
    }
  } catch (const Error& e) {
    cell.error = e.what();
  }
  return cell;
}

double mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string host_note() {
  std::ostringstream note;
  note << "hardware_concurrency=" << std::thread::hardware_concurrency();
#ifdef __VERSION__
  note << "; compiler=" << __VERSION__;
#endif
#ifdef NDEBUG
  note << "; build=release";
#else
  note << "; build=debug";
#endif
  return note.str();
}

bool costs_agree(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const RoadGraph g = prepare_network(cfg);
  return run_experiment(cfg, g);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, const RoadGraph& g) {
  cfg.validate();
  ExperimentReport report;
  report.config = cfg;
  report.network_nodes = g.node_count();
  report.network_arcs = g.arc_count();
  report.timestamp = utc_timestamp();
  report.host_note = host_note();

  std::vector<std::pair<NodeId, NodeId>> pairs;
  if (cfg.fixed_pair) {
    const auto s = g.find(cfg.fixed_pair->first);
    const auto t = g.find(cfg.fixed_pair->second);
    if (!s || !t) throw Error(Errc::InvalidConfig, "fixed pair is not in the preprocessed network");
    pairs.emplace_back(*s, *t);
  } else {
    pairs = sample_pairs(g, static_cast<std::size_t>(cfg.num_pairs), cfg.seed);
  }

  report.pairs.resize(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      PairRecord& record = report.pairs[i];
      record.source = g.external_id(pairs[i].first);
      record.target = g.external_id(pairs[i].second);
      for (const Algorithm& algorithm : cfg.algorithms) {
        record.cells.push_back(run_cell(g, pairs[i].first, pairs[i].second, algorithm, cfg));
      }
    }
  };
  if (cfg.threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < cfg.threads; ++i) pool.emplace_back(worker);
  }

  for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
    AlgorithmRow row;
    row.algorithm = cfg.algorithms[a];
    std::vector<double> per_pair_runtime, all_runtimes, expanded, evals, steps;
    for (const PairRecord& p : report.pairs) {
      const CellRecord& cell = p.cells[a];
      per_pair_runtime.push_back(mean(cell.runtimes_s));
      all_runtimes.insert(all_runtimes.end(), cell.runtimes_s.begin(), cell.runtimes_s.end());
      expanded.push_back(static_cast<double>(cell.nodes_expanded));
      evals.push_back(static_cast<double>(cell.heuristic_evals));
      steps.push_back(static_cast<double>(cell.lookahead_steps));
    }
    row.mean_runtime_s = mean(per_pair_runtime);
    row.median_runtime_s = median(all_runtimes);
    row.mean_nodes_expanded = mean(expanded);
    row.mean_heuristic_evals = mean(evals);
    row.mean_lookahead_steps = mean(steps);
    row.timing_samples = all_runtimes.size();
    row.pair_samples = expanded.size();
    report.rows.push_back(row);
  }

  for (const PairRecord& p : report.pairs) {
    const std::string where = "pair " + std::to_string(p.source) + "->" + std::to_string(p.target);
    for (std::size_t a = 0; a < p.cells.size(); ++a) {
      if (!p.cells[a].error.empty()) {
        report.failures.push_back(where + " " + cfg.algorithms[a].label() + ": " + p.cells[a].error);
      } else if (!p.cells[0].error.empty() || !costs_agree(p.cells[a].cost, p.cells[0].cost)) {
        std::ostringstream msg;
        msg << std::setprecision(17) << where << " " << cfg.algorithms[a].label() << " cost "
            << p.cells[a].cost << " differs from " << cfg.algorithms[0].label() << " cost "
            << p.cells[0].cost;
        report.failures.push_back(msg.str());
      }
    }
  }
  report.failed = !report.failures.empty();
  return report;
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  if (name == "table") return Format::table;
  if (name == "plot") return Format::plot;
  throw Error(Errc::InvalidConfig, "unknown format '" + name + "'");
}

json report_to_json(const ExperimentReport& r) {
  json rows = json::array();
  for (const AlgorithmRow& row : r.rows) {
    rows.push_back({{"algorithm", row.algorithm.label()},
                    {"k", row.algorithm.kind == Algorithm::Kind::dijkstra ? json(nullptr) : json(row.algorithm.k)},
                    {"mean_runtime_s", row.mean_runtime_s},
                    {"median_runtime_s", row.median_runtime_s},
                    {"mean_nodes_expanded", row.mean_nodes_expanded},
                    {"mean_heuristic_evals", row.mean_heuristic_evals},
                    {"mean_lookahead_steps", row.mean_lookahead_steps},
                    {"timing_samples", row.timing_samples},
                    {"pair_samples", row.pair_samples}});
  }
  json pairs = json::array();
  for (const PairRecord& p : r.pairs) {
    json cells = json::array();
    for (std::size_t a = 0; a < p.cells.size(); ++a) {
      const CellRecord& c = p.cells[a];
      json cell = {{"algorithm", r.rows[a].algorithm.label()},
                   {"cost", c.cost},
                   {"nodes_expanded", c.nodes_expanded},
                   {"heuristic_evals", c.heuristic_evals},
                   {"lookahead_steps", c.lookahead_steps},
                   {"path", c.path},
                   {"runtimes_s", c.runtimes_s}};
      if (!c.error.empty()) cell["error"] = c.error;
      cells.push_back(std::move(cell));
    }
    pairs.push_back({{"source", p.source}, {"target", p.target}, {"cells", cells}});
  }
  return {{"status", r.failed ? "FAILED" : "OK"},
          {"failures", r.failures},
          {"network", {{"nodes", r.network_nodes}, {"arcs", r.network_arcs}}},
          {"rows", rows},
          {"pairs", pairs},
          {"metadata",
           {{"config", config_to_json(r.config)}, {"timestamp", r.timestamp}, {"host", r.host_note}}}};
}

namespace {

std::string format_number(double value, int precision = 10) {
  std::ostringstream out;
  out << std::setprecision(precision) << value;
  return out.str();
}

std::string emit_csv(const ExperimentReport& r) {
  std::ostringstream out;
  out << "algorithm,k,mean_runtime_s,mean_nodes_expanded\n";
  for (const AlgorithmRow& row : r.rows) {
    out << row.algorithm.label() << ',';
    if (row.algorithm.kind == Algorithm::Kind::astar) out << row.algorithm.k;
    out << ',' << format_number(row.mean_runtime_s) << ',' << format_number(row.mean_nodes_expanded)
        << '\n';
  }
  return out.str();
}

std::string emit_plot(const ExperimentReport& r) {
  std::ostringstream out;
  out << "k,mean_runtime_s,mean_nodes_expanded\n";
  for (const AlgorithmRow& row : r.rows) {
    if (row.algorithm.kind != Algorithm::Kind::astar) continue;
    out << row.algorithm.k << ',' << format_number(row.mean_runtime_s) << ','
        << format_number(row.mean_nodes_expanded) << '\n';
  }
  for (const AlgorithmRow& row : r.rows) {
    if (row.algorithm.kind != Algorithm::Kind::dijkstra) continue;
    out << "# dijkstra," << format_number(row.mean_runtime_s) << ','
        << format_number(row.mean_nodes_expanded) << '\n';
  }
  return out.str();
}

std::string emit_table(const ExperimentReport& r) {
  const std::vector<std::string> header{"Algorithm", "Avg Runtime (s)", "Median Runtime (s)",
                                        "Avg # of Nodes Expanded", "Avg Cost"};
  std::vector<std::vector<std::string>> cells;
  for (std::size_t a = 0; a < r.rows.size(); ++a) {
    const AlgorithmRow& row = r.rows[a];
    std::vector<double> costs;
    for (const PairRecord& p : r.pairs) costs.push_back(p.cells[a].cost);
    cells.push_back({row.algorithm.label(), format_number(row.mean_runtime_s, 4),
                     format_number(row.median_runtime_s, 4), format_number(row.mean_nodes_expanded, 6),
                     format_number(mean(costs), 10)});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& line : cells) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream out;
  auto put = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c + 1 == line.size()) {
        out << line[c] << '\n';
      } else {
        out << std::left << std::setw(static_cast<int>(width[c])) << line[c] << "  ";
      }
    }
  };
  put(header);
  std::size_t total = 0;
  for (std::size_t w : width) total += w;
  out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& line : cells) put(line);
  out << "pairs: " << r.pairs.size() << ", runs per pair: " << r.config.runs_per_pair
      << ", nodes: " << r.network_nodes << ", arcs: " << r.network_arcs << '\n';
  out << "status: " << (r.failed ? "FAILED" : "OK") << '\n';
  for (const std::string& f : r.failures) out << "  " << f << '\n';
  return out.str();
}

}  // namespace

std::string emit_report(const ExperimentReport& r, Format format) {
  switch (format) {
    case Format::csv: return emit_csv(r);
    case Format::json: return report_to_json(r).dump(2) + "\n";
    case Format::table: return emit_table(r);
    case Format::plot: return emit_plot(r);
  }
  return {};
}

}  // namespace roadsearch::bench
