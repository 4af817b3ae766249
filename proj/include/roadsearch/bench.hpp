#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "roadsearch/graph.hpp"
#include "roadsearch/netgen.hpp"
#include "roadsearch/search.hpp"

namespace roadsearch::bench {

/// One benchmarked configuration: Dijkstra, or A* where k = 0 means the
/// euclidean heuristic and k >= 1 the k-step look-ahead.
struct Algorithm {
  enum class Kind { dijkstra, astar };

  Kind kind = Kind::dijkstra;
  int k = 0;

  static Algorithm dijkstra() { return {Kind::dijkstra, 0}; }
  static Algorithm astar(int k) { return {Kind::astar, k}; }

  std::string label() const;
  HeuristicSpec heuristic() const { return HeuristicSpec::from_k(k); }

  friend bool operator==(const Algorithm&, const Algorithm&) = default;
};

/// Dijkstra followed by A* with k = 0..k_max.
std::vector<Algorithm> standard_algorithms(int k_max);

struct NetworkFiles {
  std::filesystem::path nodes;
  std::filesystem::path edges;

  /// `dir/nodes.csv` and `dir/edges.csv`.
  static NetworkFiles in_directory(const std::filesystem::path& dir);
};

using NetworkSource = std::variant<NetworkFiles, netgen::GenSpec>;

struct ExperimentConfig {
  NetworkSource network = netgen::GenSpec{};
  std::vector<Algorithm> algorithms = standard_algorithms(10);
  int num_pairs = 1;
  int runs_per_pair = 1;
  std::uint64_t seed = 1;
  /// External ids; replaces random sampling when set.
  std::optional<std::pair<ExternalId, ExternalId>> fixed_pair;
  int max_k = 10;
  bool strict = false;
  bool reopen = false;
  int threads = 1;

  /// Throws InvalidConfig.
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct CellRecord {
  double cost = 0.0;
  std::size_t nodes_expanded = 0;
  std::size_t heuristic_evals = 0;
  std::size_t lookahead_steps = 0;
  std::vector<ExternalId> path;
  std::vector<double> runtimes_s;
  std::string error;
};

struct PairRecord {
  ExternalId source = 0;
  ExternalId target = 0;
  /// Parallel to ExperimentReport::rows.
  std::vector<CellRecord> cells;
};

struct AlgorithmRow {
  Algorithm algorithm;
  double mean_runtime_s = 0.0;
  double median_runtime_s = 0.0;
  double mean_nodes_expanded = 0.0;
  double mean_heuristic_evals = 0.0;
  double mean_lookahead_steps = 0.0;
  std::size_t timing_samples = 0;
  std::size_t pair_samples = 0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::size_t network_nodes = 0;
  std::size_t network_arcs = 0;
  std::vector<AlgorithmRow> rows;
  std::vector<PairRecord> pairs;
  bool failed = false;
  std::vector<std::string> failures;
  std::string timestamp;
  std::string host_note;
};

/// n distinct ordered pairs (s != t), uniform, deterministic per seed.
/// Throws TooFewNodes, or InvalidConfig when n exceeds the number of pairs.
std::vector<std::pair<NodeId, NodeId>> sample_pairs(const RoadGraph& g, std::size_t n,
                                                    std::uint64_t seed);

/// Loads or generates the network and keeps its largest strongly connected
/// component. Not part of any timing.
RoadGraph prepare_network(const ExperimentConfig& cfg);

ExperimentReport run_experiment(const ExperimentConfig& cfg);
/// Same, on an already prepared graph.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const RoadGraph& g);

enum class Format { csv, json, table, plot };

Format parse_format(const std::string& name);

std::string emit_report(const ExperimentReport& r, Format format);

nlohmann::json report_to_json(const ExperimentReport& r);

}  // namespace roadsearch::bench
