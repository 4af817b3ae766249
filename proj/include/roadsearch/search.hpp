#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roadsearch/graph.hpp"

namespace roadsearch {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Which remaining-cost estimator A* uses.
struct HeuristicSpec {
  enum class Kind { zero, euclidean, lookahead };

  Kind kind = Kind::euclidean;
  int k = 0;

  static HeuristicSpec zero() { return {Kind::zero, 0}; }
  static HeuristicSpec euclidean() { return {Kind::euclidean, 0}; }
  /// Throws InvalidHeuristic when k < 1.
  static HeuristicSpec lookahead(int k);
  /// Bench numbering: 0 is standard A* (euclidean), k >= 1 is look-ahead.
  static HeuristicSpec from_k(int k) { return k == 0 ? euclidean() : lookahead(k); }

  std::string label() const;

  friend bool operator==(const HeuristicSpec&, const HeuristicSpec&) = default;
};

/// Per-node visited flags for one search.
class VisitedSet {
 public:
  VisitedSet() = default;
  explicit VisitedSet(std::size_t node_count) : flags_(node_count, 0) {}

  bool contains(NodeId n) const { return flags_[n.value] != 0; }
  void insert(NodeId n) { flags_[n.value] = 1; }
  void erase(NodeId n) { flags_[n.value] = 0; }
  std::size_t size() const { return flags_.size(); }

 private:
  std::vector<char> flags_;
};

struct SearchOptions {
  /// Re-open settled nodes when a cheaper route to them appears. Off by
  /// default: settled nodes stay closed, as in the textbook loop.
  bool reopen = false;
  /// Keep the settle order in SearchResult::settle_order.
  bool record_settle_order = false;
};

struct SearchResult {
  Path path;
  double cost = 0.0;
  std::size_t nodes_expanded = 0;
  std::size_t heuristic_evals = 0;
  /// Arc extensions performed by look-ahead enumeration.
  std::size_t lookahead_steps = 0;
  double wall_time_s = 0.0;
  std::vector<NodeId> settle_order;
};

/// Throws NoPath when t is unreachable, InvalidNode for out-of-range ids.
SearchResult dijkstra(const RoadGraph& g, NodeId s, NodeId t, const SearchOptions& options = {});
SearchResult astar(const RoadGraph& g, NodeId s, NodeId t, const HeuristicSpec& h,
                   const SearchOptions& options = {});

/// Metric distance from n to t under the graph's metric.
double euclidean_h(const RoadGraph& g, NodeId n, NodeId t);

/// Minimum over acyclic, visited-avoiding look-ahead paths of exactly k arcs
/// from n of (path cost + distance from its end to t). A branch arriving at
/// t stops there and scores its cost alone. +inf when no branch exists.
double lookahead_h(const RoadGraph& g, const VisitedSet& visited, NodeId n, NodeId t, int k);

/// Reusable look-ahead evaluator; keeps its scratch buffer between calls.
class LookaheadEstimator {
 public:
  LookaheadEstimator(const RoadGraph& g, int k);

  double operator()(const VisitedSet& visited, NodeId n, NodeId t);
  std::size_t steps() const { return steps_; }

 private:
  double extend(const VisitedSet& visited, NodeId node, double cost, int remaining);
  double distance_to_target(NodeId n);

  const RoadGraph& graph_;
  int k_;
  std::vector<char> on_path_;
  // dist(n, target_) memo; NaN until computed.
  std::vector<double> to_target_;
  NodeId target_{};
  std::size_t steps_ = 0;
};

/// Value of h at n for the given visited set.
double evaluate_heuristic(const RoadGraph& g, const HeuristicSpec& h, const VisitedSet& visited,
                          NodeId n, NodeId t);

inline constexpr std::uint32_t kNoPredecessor = std::numeric_limits<std::uint32_t>::max();

/// Unwinds `previous` (internal index -> predecessor index, kNoPredecessor
/// for none) from t back to s. Throws BrokenChain.
Path reconstruct_path(const RoadGraph& g, std::span<const std::uint32_t> previous, NodeId s,
                      NodeId t);

}  // namespace roadsearch
