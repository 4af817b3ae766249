#include "roadsearch/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "roadsearch/bench.hpp"
#include "roadsearch/error.hpp"
#include "roadsearch/graph.hpp"
#include "roadsearch/heuristic_checks.hpp"
#include "roadsearch/netgen.hpp"
#include "roadsearch/oracle.hpp"
#include "roadsearch/random.hpp"
#include "roadsearch/search.hpp"

namespace roadsearch::cli {
namespace {

namespace fs = std::filesystem;

struct NetworkFlags {
  std::string dir;
  std::string nodes;
  std::string edges;
  bool strict = false;

  void attach(CLI::App& cmd) {
    cmd.add_option("--network", dir, "Directory holding nodes.csv and edges.csv");
    cmd.add_option("--nodes", nodes, "Node CSV (id,lat,lon)");
    cmd.add_option("--edges", edges, "Edge CSV (u,v,length,oneway)");
    cmd.add_flag("--strict", strict, "Reject arcs cheaper than their metric distance");
  }

  bench::NetworkFiles files() const {
    if (!dir.empty()) return bench::NetworkFiles::in_directory(dir);
    if (nodes.empty() || edges.empty()) {
      throw Error(Errc::InvalidConfig, "give --network DIR or both --nodes and --edges");
    }
    return {nodes, edges};
  }

  bool given() const { return !dir.empty() || !nodes.empty() || !edges.empty(); }

  RoadGraph load(std::ostream& err) const {
    const auto f = files();
    LoadOptions options;
    options.strict = strict;
    options.on_warning = [&err](const std::string& msg) { err << "warning: " << msg << '\n'; };
    return load_network(f.nodes, f.edges, options);
  }
};

NodeId resolve(const RoadGraph& g, ExternalId id) {
  if (auto n = g.find(id)) return *n;
  throw Error(Errc::InvalidNode, "node id " + std::to_string(id) + " is not in the network");
}

// gen ----------------------------------------------------------------------

struct GenFlags {
  std::string kind;
  netgen::GenSpec spec;
  std::string out_dir;
};

int cmd_gen(const GenFlags& flags, std::ostream& out) {
  netgen::GenSpec spec = flags.spec;
  spec.kind = netgen::parse_kind(flags.kind);
  const RoadGraph g = netgen::generate(spec);
  fs::create_directories(flags.out_dir);
  const auto files = bench::NetworkFiles::in_directory(flags.out_dir);
  export_network(g, files.nodes, files.edges);
  out << nlohmann::json{{"nodes", g.node_count()},
                        {"arcs", g.arc_count()},
                        {"node_file", files.nodes.string()},
                        {"edge_file", files.edges.string()}}
             .dump()
      << '\n';
  return kOk;
}

// route --------------------------------------------------------------------

struct RouteFlags {
  NetworkFlags network;
  ExternalId source = 0;
  ExternalId target = 0;
  std::string algo = "astar";
  int k = 0;
  bool reopen = false;
  std::string format = "table";
};

int cmd_route(const RouteFlags& flags, std::ostream& out, std::ostream& err) {
  const RoadGraph g = flags.network.load(err);
  const NodeId s = resolve(g, flags.source);
  const NodeId t = resolve(g, flags.target);
  SearchOptions options;
  options.reopen = flags.reopen;
  const SearchResult r = flags.algo == "dijkstra"
                             ? dijkstra(g, s, t, options)
                             : astar(g, s, t, HeuristicSpec::from_k(flags.k), options);
  std::vector<ExternalId> nodes;
  for (NodeId n : r.path.nodes()) nodes.push_back(g.external_id(n));
  if (nodes.empty()) nodes.push_back(flags.source);

  if (flags.format == "json") {
    out << nlohmann::json{{"path", nodes},
                          {"cost", r.cost},
                          {"nodes_expanded", r.nodes_expanded},
                          {"heuristic_evals", r.heuristic_evals},
                          {"wall_time_s", r.wall_time_s}}
               .dump()
        << '\n';
    return kOk;
  }
  out << "path:";
  for (ExternalId id : nodes) out << ' ' << id;
  out << '\n' << std::setprecision(17) << "cost: " << r.cost << '\n';
  out << "nodes_expanded: " << r.nodes_expanded << '\n';
  out << "heuristic_evals: " << r.heuristic_evals << '\n';
  out << std::setprecision(6) << "wall_time_s: " << r.wall_time_s << '\n';
  return kOk;
}

// bench --------------------------------------------------------------------

struct BenchFlags {
  std::string config;
  NetworkFlags network;
  int pairs = 1;
  int runs = 1;
  int k_max = 10;
  std::uint64_t seed = 1;
  std::optional<ExternalId> source;
  std::optional<ExternalId> target;
  int threads = 1;
  bool reopen = false;
  std::string format = "table";
  std::string out_path;
};

int cmd_bench(const BenchFlags& flags, const CLI::App& cmd, std::ostream& out, std::ostream& err) {
  bench::ExperimentConfig cfg;
  if (!flags.config.empty()) {
    std::ifstream in(flags.config);
    if (!in) throw Error(Errc::InvalidConfig, "cannot open config " + flags.config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::InvalidConfig, e.what());
    }
    cfg = bench::config_from_json(j);
  } else if (!flags.network.given()) {
    throw Error(Errc::InvalidConfig, "give --config FILE or a network");
  }
  const auto set = [&cmd](const char* name) { return cmd.count(name) > 0; };
  if (flags.network.given()) cfg.network = flags.network.files();
  if (flags.config.empty() || set("--k-max")) cfg.algorithms = bench::standard_algorithms(flags.k_max);
  if (flags.config.empty() || set("--pairs")) cfg.num_pairs = flags.pairs;
  if (flags.config.empty() || set("--runs")) cfg.runs_per_pair = flags.runs;
  if (flags.config.empty() || set("--seed")) cfg.seed = flags.seed;
  if (flags.config.empty() || set("--threads")) cfg.threads = flags.threads;
  if (set("--strict")) cfg.strict = true;
  if (set("--reopen")) cfg.reopen = true;
  if (flags.source || flags.target) {
    if (!flags.source || !flags.target) throw Error(Errc::InvalidConfig, "--source and --target go together");
    cfg.fixed_pair = std::make_pair(*flags.source, *flags.target);
  }
  cfg.validate();
  const auto format = bench::parse_format(flags.format);

  const bench::ExperimentReport report = bench::run_experiment(cfg);
  const std::string text = bench::emit_report(report, format);
  if (flags.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(flags.out_path, std::ios::binary);
    if (!(file << text)) throw Error(Errc::Io, "cannot write " + flags.out_path);
  }
  if (report.failed) {
    for (const auto& f : report.failures) err << "FAILED: " << f << '\n';
    return kFailed;
  }
  return kOk;
}

// validate -----------------------------------------------------------------

struct ValidateFlags {
  NetworkFlags network;
  int pairs = 20;
  int targets = 5;
  int sample_nodes = 200;
  int k_max = 10;
  std::uint64_t seed = 1;
};

bool same_cost(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

int cmd_validate(const ValidateFlags& flags, std::ostream& out, std::ostream& err) {
  const RoadGraph g = flags.network.load(err);
  out << std::setprecision(17);
  bool ok = true;

  std::vector<HeuristicSpec> heuristics{HeuristicSpec::euclidean()};
  for (int k = 1; k <= flags.k_max; ++k) heuristics.push_back(HeuristicSpec::lookahead(k));

  // Targets and sampled nodes are drawn from the whole graph.
  std::vector<NodeId> targets;
  std::vector<NodeId> sample;
  {
    Rng rng(flags.seed);
    const auto n = g.node_count();
    if (n <= static_cast<std::size_t>(flags.targets)) {
      for (std::uint32_t i = 0; i < n; ++i) targets.push_back(NodeId{i});
    } else {
      for (int i = 0; i < flags.targets; ++i) targets.push_back(NodeId{static_cast<std::uint32_t>(rng.below(n))});
    }
    if (n <= static_cast<std::size_t>(flags.sample_nodes)) {
      for (std::uint32_t i = 0; i < n; ++i) sample.push_back(NodeId{i});
    } else {
      for (int i = 0; i < flags.sample_nodes; ++i) sample.push_back(NodeId{static_cast<std::uint32_t>(rng.below(n))});
    }
  }

  for (const HeuristicSpec& h : heuristics) {
    std::size_t violations = 0;
    for (NodeId t : targets) {
      for (const auto& v : check_admissibility(g, h, t, sample)) {
        ++violations;
        out << "  admissibility violation " << h.label() << ": node " << g.external_id(v.node)
            << " target " << g.external_id(t) << " estimate " << v.estimate << " exact " << v.exact << '\n';
      }
    }
    ok = ok && violations == 0;
    out << (violations == 0 ? "PASS" : "FAIL") << " admissibility " << h.label() << " ("
        << violations << " violations)\n";
  }

  {
    std::size_t violations = 0;
    for (NodeId t : targets) {
      for (const auto& v : check_consistency(g, HeuristicSpec::euclidean(), t)) {
        ++violations;
        out << "  consistency violation Standard A*: arc " << g.external_id(v.arc.from) << "->"
            << g.external_id(v.arc.to) << " h(from) " << v.estimate_from << " cost " << v.arc.cost
            << " h(to) " << v.estimate_to << '\n';
      }
    }
    ok = ok && violations == 0;
    out << (violations == 0 ? "PASS" : "FAIL") << " consistency Standard A* (" << violations
        << " violations)\n";
  }

  const RoadGraph core = largest_navigable_component(g);
  std::size_t mismatches = 0;
  std::size_t checked = 0;
  if (core.node_count() >= 2) {
    const auto all_pairs = core.node_count() * (core.node_count() - 1);
    const auto count = std::min<std::size_t>(static_cast<std::size_t>(flags.pairs), all_pairs);
    for (const auto& [s, t] : bench::sample_pairs(core, count, flags.seed)) {
      const double expected = oracle::oracle_shortest(core, s, t).cost;
      std::vector<std::pair<std::string, double>> got{{"Dijkstra", dijkstra(core, s, t).cost}};
      for (const HeuristicSpec& h : heuristics) got.emplace_back(h.label(), astar(core, s, t, h).cost);
      for (const auto& [label, cost] : got) {
        ++checked;
        if (!same_cost(cost, expected)) {
          ++mismatches;
          out << "  optimality mismatch " << label << ": pair " << core.external_id(s) << "->"
              << core.external_id(t) << " cost " << cost << " oracle " << expected << '\n';
        }
      }
    }
  }
  ok = ok && mismatches == 0;
  out << (mismatches == 0 ? "PASS" : "FAIL") << " oracle optimality (" << checked << " searches, "
      << mismatches << " mismatches)\n";

  out << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kOk : kFailed;
}

int exit_code_for(Errc code) {
  return code == Errc::NoPath ? kNoPath : kBadInput;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shortest-path search on road networks: Dijkstra, A*, and k-step look-ahead A*",
               "roadsearch"};
  app.require_subcommand(1);

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic planar network");
  gen_cmd->add_option("--kind", gen.kind, "grid | random_geometric")->required();
  gen_cmd->add_option("--width", gen.spec.width);
  gen_cmd->add_option("--height", gen.spec.height);
  gen_cmd->add_option("--n", gen.spec.n, "Point count (random_geometric)");
  gen_cmd->add_option("--radius", gen.spec.connect_radius, "Connection radius (random_geometric)");
  gen_cmd->add_option("--cost-factor", gen.spec.cost_factor);
  gen_cmd->add_option("--jitter", gen.spec.jitter);
  gen_cmd->add_option("--oneway-fraction", gen.spec.oneway_fraction);
  gen_cmd->add_option("--seed", gen.spec.seed);
  gen_cmd->add_option("--out", gen.out_dir, "Output directory")->required();

  RouteFlags route;
  auto* route_cmd = app.add_subcommand("route", "Find one shortest path");
  route.network.attach(*route_cmd);
  route_cmd->add_option("--source,-s", route.source, "External source id")->required();
  route_cmd->add_option("--target,-t", route.target, "External target id")->required();
  route_cmd->add_option("--algo", route.algo)->check(CLI::IsMember({"dijkstra", "astar"}));
  route_cmd->add_option("--k", route.k, "0 = euclidean, k >= 1 = k-step look-ahead")
      ->check(CLI::NonNegativeNumber);
  route_cmd->add_flag("--reopen", route.reopen, "Re-open settled nodes on improvement");
  route_cmd->add_option("--format", route.format)->check(CLI::IsMember({"table", "json"}));

  BenchFlags bench_flags;
  auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark protocol");
  bench_cmd->add_option("--config", bench_flags.config, "JSON experiment config");
  bench_flags.network.attach(*bench_cmd);
  bench_cmd->add_option("--pairs", bench_flags.pairs, "Source-target pairs");
  bench_cmd->add_option("--runs", bench_flags.runs, "Runs per pair");
  bench_cmd->add_option("--k-max", bench_flags.k_max, "Largest look-ahead depth");
  bench_cmd->add_option("--seed", bench_flags.seed);
  bench_cmd->add_option("--source", bench_flags.source, "Fixed source (external id)");
  bench_cmd->add_option("--target", bench_flags.target, "Fixed target (external id)");
  bench_cmd->add_option("--threads", bench_flags.threads);
  bench_cmd->add_flag("--reopen", bench_flags.reopen);
  bench_cmd->add_option("--format", bench_flags.format)->check(CLI::IsMember({"csv", "json", "table", "plot"}));
  bench_cmd->add_option("--out", bench_flags.out_path, "Write the report here instead of stdout");

  ValidateFlags validate;
  auto* validate_cmd = app.add_subcommand("validate", "Check optimality and admissibility against the oracle");
  validate.network.attach(*validate_cmd);
  validate_cmd->add_option("--pairs", validate.pairs);
  validate_cmd->add_option("--targets", validate.targets);
  validate_cmd->add_option("--sample-nodes", validate.sample_nodes);
  validate_cmd->add_option("--k-max", validate.k_max);
  validate_cmd->add_option("--seed", validate.seed);

  std::vector<const char*> argv{"roadsearch"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*route_cmd) return cmd_route(route, out, err);
    if (*bench_cmd) return cmd_bench(bench_flags, *bench_cmd, out, err);
    if (*validate_cmd) return cmd_validate(validate, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadInput;
}

}  // namespace roadsearch::cli
