#include "roadsearch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "roadsearch/error.hpp"

namespace roadsearch::oracle {

RoadGraph FixtureT1::graph() {
  GraphBuilder builder(Metric::planar);
  builder.add_node(a, {0.0, 0.0});
  builder.add_node(b, {0.0, 1.0});
  builder.add_node(c, {1.0, 1.0});
  builder.add_node(t, {0.0, 2.0});
  builder.add_edge(a, b, 1.0, false);
  builder.add_edge(b, t, 1.0, false);
  builder.add_edge(a, c, std::sqrt(2.0), false);
  builder.add_edge(c, t, std::sqrt(2.0), false);
  return std::move(builder).build();
}

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

}  // namespace

ShortestPath oracle_shortest(const RoadGraph& g, NodeId s, NodeId t) {
  if (!g.contains(s) || !g.contains(t)) throw Error(Errc::InvalidNode, "source or target outside the graph");
  const std::size_t n = g.node_count();
  std::vector<double> label(n, kInfinity);
  std::vector<std::uint32_t> parent(n, kNone);
  label[s.value] = 0.0;

  // With non-negative costs a fixpoint is reached within n passes.
  for (std::size_t pass = 0; pass < n; ++pass) {
    bool changed = false;
    for (const Arc& arc : g.arcs()) {
      const double through = label[arc.from.value] + arc.cost;
      if (through < label[arc.to.value]) {
        label[arc.to.value] = through;
        parent[arc.to.value] = arc.from.value;
        changed = true;
      }
    }
    if (!changed) break;
  }
  if (label[t.value] == kInfinity) {
    throw Error(Errc::NoPath, "oracle: target unreachable");
  }

  ShortestPath out;
  out.cost = label[t.value];
  std::vector<NodeId> chain;
  for (NodeId at = t; at != s; at = NodeId{parent[at.value]}) chain.push_back(at);
  chain.push_back(s);
  std::reverse(chain.begin(), chain.end());
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    out.path.edges.emplace_back(chain[i], chain[i + 1]);
    out.path.total_cost += *g.arc_cost(chain[i], chain[i + 1]);
  }
  return out;
}

std::vector<double> oracle_distances_to(const RoadGraph& g, NodeId t) {
  std::vector<double> label(g.node_count(), kInfinity);
  label[t.value] = 0.0;
  for (std::size_t pass = 0; pass < g.node_count(); ++pass) {
    bool changed = false;
    for (const Arc& arc : g.arcs()) {
      const double through = arc.cost + label[arc.to.value];
      if (through < label[arc.from.value]) {
        label[arc.from.value] = through;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return label;
}

namespace {

void enumerate(const RoadGraph& g, const VisitedSet& visited, NodeId t, int k,
               std::vector<NodeId>& current, std::vector<std::vector<NodeId>>& out) {
  const int length = static_cast<int>(current.size()) - 1;
  if (length == k) {
    out.push_back(current);
    return;
  }
  if (length > 0 && current.back() == t) {
    // Also kept as-is; the extensions below reproduce it after cutting.
    out.push_back(current);
  }
  for (const Arc& arc : g.out_arcs(current.back())) {
    if (visited.contains(arc.to)) continue;
    if (std::find(current.begin(), current.end(), arc.to) != current.end()) continue;
    current.push_back(arc.to);
    enumerate(g, visited, t, k, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<std::vector<NodeId>> lookahead_path_set(const RoadGraph& g, const VisitedSet& visited,
                                                    NodeId n, NodeId t, int k) {
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> current{n};
  enumerate(g, visited, t, k, current, out);
  return out;
}

std::vector<NodeId> cut_at(const std::vector<NodeId>& path, NodeId t) {
  const auto hit = std::find(path.begin(), path.end(), t);
  if (hit == path.end()) return path;
  return {path.begin(), hit + 1};
}

double oracle_lookahead(const RoadGraph& g, const VisitedSet& visited, NodeId n, NodeId t, int k) {
  if (n == t) return 0.0;
  const auto paths = lookahead_path_set(g, visited, n, t, k);
  std::vector<double> candidates{kInfinity};
  for (const auto& p : paths) {
    const auto cut = cut_at(p, t);
    double cost = 0.0;
    for (std::size_t i = 0; i + 1 < cut.size(); ++i) cost += *g.arc_cost(cut[i], cut[i + 1]);
    const NodeId last = cut.back();
    candidates.push_back(cost + (last == t ? 0.0 : g.distance(last, t)));
  }
  return *std::min_element(candidates.begin(), candidates.end());
}

}  // namespace roadsearch::oracle
