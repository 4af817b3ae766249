#pragma once

#include <span>
#include <vector>

#include "roadsearch/graph.hpp"
#include "roadsearch/search.hpp"

namespace roadsearch {

inline constexpr double kAdmissibilityTolerance = 1e-6;

struct AdmissibilityViolation {
  NodeId node;
  double estimate = 0.0;
  double exact = 0.0;
};

/// Nodes in `sample` whose estimate (empty visited set) exceeds the exact
/// remaining cost to t by more than kAdmissibilityTolerance. Exact costs
/// come from the brute-force oracle, so keep graphs desk-sized.
std::vector<AdmissibilityViolation> check_admissibility(const RoadGraph& g, const HeuristicSpec& h,
                                                        NodeId t, std::span<const NodeId> sample);

struct ConsistencyViolation {
  Arc arc;
  double estimate_from = 0.0;
  double estimate_to = 0.0;
};

/// Arcs (n, p) with h(n) > c(n, p) + h(p) + kAdmissibilityTolerance, plus a
/// self-arc entry for t when h(t) != 0.
std::vector<ConsistencyViolation> check_consistency(const RoadGraph& g, const HeuristicSpec& h,
                                                    NodeId t);

}  // namespace roadsearch
