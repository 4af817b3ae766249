#include "roadsearch/heuristic_checks.hpp"

#include "roadsearch/oracle.hpp"

namespace roadsearch {

std::vector<AdmissibilityViolation> check_admissibility(const RoadGraph& g, const HeuristicSpec& h,
                                                        NodeId t, std::span<const NodeId> sample) {
  const std::vector<double> exact = oracle::oracle_distances_to(g, t);
  const VisitedSet none(g.node_count());
  std::vector<AdmissibilityViolation> violations;
  for (NodeId n : sample) {
    const double estimate = evaluate_heuristic(g, h, none, n, t);
    // Unreachable nodes have exact = +inf and cannot be overestimated.
    if (estimate > exact[n.value] + kAdmissibilityTolerance) {
      violations.push_back({n, estimate, exact[n.value]});
    }
  }
  return violations;
}

std::vector<ConsistencyViolation> check_consistency(const RoadGraph& g, const HeuristicSpec& h,
                                                    NodeId t) {
  const VisitedSet none(g.node_count());
  std::vector<double> estimate(g.node_count());
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    estimate[i] = evaluate_heuristic(g, h, none, NodeId{i}, t);
  }
  std::vector<ConsistencyViolation> violations;
  if (estimate[t.value] != 0.0) {
    violations.push_back({Arc{t, t, 0.0}, estimate[t.value], estimate[t.value]});
  }
  for (const Arc& arc : g.arcs()) {
    const double from = estimate[arc.from.value];
    const double to = estimate[arc.to.value];
    if (from > arc.cost + to + kAdmissibilityTolerance) violations.push_back({arc, from, to});
  }
  return violations;
}

}  // namespace roadsearch
