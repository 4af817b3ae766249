#include "roadsearch/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <tuple>

#include "roadsearch/error.hpp"

namespace roadsearch {

HeuristicSpec HeuristicSpec::lookahead(int k) {
  if (k < 1) throw Error(Errc::InvalidHeuristic, "look-ahead depth must be >= 1, got " + std::to_string(k));
  return {Kind::lookahead, k};
}

std::string HeuristicSpec::label() const {
  switch (kind) {
    case Kind::zero: return "A* (zero)";
    case Kind::euclidean: return "Standard A*";
    case Kind::lookahead: return "A* k=" + std::to_string(k);
  }
  return {};
}

double euclidean_h(const RoadGraph& g, NodeId n, NodeId t) {
  return n == t ? 0.0 : g.distance(n, t);
}

LookaheadEstimator::LookaheadEstimator(const RoadGraph& g, int k)
    : graph_(g), k_(k), on_path_(g.node_count(), 0) {
  if (k < 1) throw Error(Errc::InvalidHeuristic, "look-ahead depth must be >= 1");
}

double LookaheadEstimator::operator()(const VisitedSet& visited, NodeId n, NodeId t) {
  if (n == t) return 0.0;
  if (to_target_.empty() || target_ != t) {
    to_target_.assign(graph_.node_count(), std::numeric_limits<double>::quiet_NaN());
    target_ = t;
  }
  on_path_[n.value] = 1;
  const double best = extend(visited, n, 0.0, k_);
  on_path_[n.value] = 0;
  return best;
}

double LookaheadEstimator::distance_to_target(NodeId n) {
  double& d = to_target_[n.value];
  if (std::isnan(d)) d = graph_.distance(n, target_);
  return d;
}

double LookaheadEstimator::extend(const VisitedSet& visited, NodeId node, double cost, int remaining) {
  double best = kInfinity;
  for (const Arc& arc : graph_.out_arcs(node)) {
    const NodeId next = arc.to;
    if (visited.contains(next) || on_path_[next.value]) continue;
    ++steps_;
    const double reached = cost + arc.cost;
    if (next == target_) {
      best = std::min(best, reached);
    } else if (remaining == 1) {
      best = std::min(best, reached + distance_to_target(next));
    } else {
      on_path_[next.value] = 1;
      best = std::min(best, extend(visited, next, reached, remaining - 1));
      on_path_[next.value] = 0;
    }
  }
  return best;
}

double lookahead_h(const RoadGraph& g, const VisitedSet& visited, NodeId n, NodeId t, int k) {
  LookaheadEstimator estimator(g, k);
  return estimator(visited, n, t);
}

double evaluate_heuristic(const RoadGraph& g, const HeuristicSpec& h, const VisitedSet& visited,
                          NodeId n, NodeId t) {
  switch (h.kind) {
    case HeuristicSpec::Kind::zero: return 0.0;
    case HeuristicSpec::Kind::euclidean: return euclidean_h(g, n, t);
    case HeuristicSpec::Kind::lookahead: return lookahead_h(g, visited, n, t, h.k);
  }
  return 0.0;
}

Path reconstruct_path(const RoadGraph& g, std::span<const std::uint32_t> previous, NodeId s,
                      NodeId t) {
  Path path;
  if (s == t) return path;
  std::vector<NodeId> reversed{t};
  NodeId at = t;
  while (at != s) {
    if (at.value >= previous.size() || previous[at.value] == kNoPredecessor ||
        reversed.size() > previous.size()) {
      throw Error(Errc::BrokenChain, "no predecessor chain from node " + std::to_string(t.value) +
                                         " back to " + std::to_string(s.value));
    }
    at = NodeId{previous[at.value]};
    reversed.push_back(at);
  }
  path.edges.reserve(reversed.size() - 1);
  for (std::size_t i = reversed.size() - 1; i > 0; --i) {
    path.edges.emplace_back(reversed[i], reversed[i - 1]);
  }
  path.total_cost = path_cost(g, path);
  return path;
}

namespace {

struct FrontierEntry {
  double key;
  double g_at_push;
  NodeId node;
};

// Min-heap order: key, then smaller g, then smaller id. +inf keys sort last.
struct LaterEntry {
  bool operator()(const FrontierEntry& a, const FrontierEntry& b) const {
    return std::tie(a.key, a.g_at_push, a.node.value) > std::tie(b.key, b.g_at_push, b.node.value);
  }
};

void check_endpoints(const RoadGraph& g, NodeId s, NodeId t) {
  if (!g.contains(s) || !g.contains(t)) {
    throw Error(Errc::InvalidNode, "source or target outside the graph");
  }
}

// Best-first search keyed by g + estimate(visited, n). The estimate is
// evaluated whenever a node's g improves, against the visited set as of then.
template <typename Estimate>
SearchResult best_first(const RoadGraph& g, NodeId s, NodeId t, Estimate&& estimate,
                        const SearchOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  check_endpoints(g, s, t);

  SearchResult result;
  std::vector<double> dist(g.node_count(), kInfinity);
  std::vector<std::uint32_t> previous(g.node_count(), kNoPredecessor);
  VisitedSet visited(g.node_count());
  std::priority_queue<FrontierEntry, std::vector<FrontierEntry>, LaterEntry> frontier;

  dist[s.value] = 0.0;
  frontier.push({estimate(visited, s), 0.0, s});

  while (!frontier.empty() && !visited.contains(t)) {
    const FrontierEntry top = frontier.top();
    frontier.pop();
    const NodeId i = top.node;
    if (visited.contains(i) || top.g_at_push > dist[i.value]) continue;
    visited.insert(i);
    ++result.nodes_expanded;
    if (options.record_settle_order) result.settle_order.push_back(i);
    if (i == t) break;

    for (const Arc& arc : g.out_arcs(i)) {
      const NodeId j = arc.to;
      if (visited.contains(j) && !options.reopen) continue;
      const double g_temp = dist[i.value] + arc.cost;
      if (g_temp < dist[j.value]) {
        dist[j.value] = g_temp;
        previous[j.value] = i.value;
        if (visited.contains(j)) visited.erase(j);
        frontier.push({g_temp + estimate(visited, j), g_temp, j});
      }
    }
  }
  if (!visited.contains(t)) {
    throw Error(Errc::NoPath, "node " + std::to_string(g.external_id(t)) + " is unreachable from " +
                                  std::to_string(g.external_id(s)));
  }

  result.path = reconstruct_path(g, previous, s, t);
  result.cost = dist[t.value];
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace

SearchResult dijkstra(const RoadGraph& g, NodeId s, NodeId t, const SearchOptions& options) {
  return best_first(g, s, t, [](const VisitedSet&, NodeId) { return 0.0; }, options);
}

SearchResult astar(const RoadGraph& g, NodeId s, NodeId t, const HeuristicSpec& h,
                   const SearchOptions& options) {
  std::size_t evals = 0;
  SearchResult result;
  switch (h.kind) {
    case HeuristicSpec::Kind::zero:
      result = best_first(
          g, s, t, [&](const VisitedSet&, NodeId) { ++evals; return 0.0; }, options);
      break;
    case HeuristicSpec::Kind::euclidean:
      result = best_first(
          g, s, t, [&](const VisitedSet&, NodeId n) { ++evals; return euclidean_h(g, n, t); },
          options);
      break;
    case HeuristicSpec::Kind::lookahead: {
      if (h.k < 1) throw Error(Errc::InvalidHeuristic, "look-ahead depth must be >= 1");
      LookaheadEstimator estimator(g, h.k);
      result = best_first(
          g, s, t,
          [&](const VisitedSet& visited, NodeId n) { ++evals; return estimator(visited, n, t); },
          options);
      result.lookahead_steps = estimator.steps();
      break;
    }
  }
  result.heuristic_evals = evals;
  return result;
}

}  // namespace roadsearch
