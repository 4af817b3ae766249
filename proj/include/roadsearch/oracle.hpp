#pragma once

#include <vector>

#include "roadsearch/graph.hpp"
#include "roadsearch/search.hpp"

// Brute-force ground truth. Nothing here shares code with the frontier-based
// searches or the look-ahead estimator.
namespace roadsearch::oracle {

/// Hand-checkable planar fixture: a=(0,0), b=(1,0), c=(1,1), t=(2,0) with
/// two-way arcs a-b 1, b-t 1, a-c sqrt2, c-t sqrt2. External ids are 0..3
/// and coincide with internal ids.
struct FixtureT1 {
  static constexpr ExternalId a = 0;
  static constexpr ExternalId b = 1;
  static constexpr ExternalId c = 2;
  static constexpr ExternalId t = 3;

  static RoadGraph graph();
};

struct ShortestPath {
  double cost = 0.0;
  Path path;
};

/// Label-correcting relaxation over the full arc list until no label
/// changes. Throws NoPath.
ShortestPath oracle_shortest(const RoadGraph& g, NodeId s, NodeId t);

/// Exact distance from every node to t (+inf when t is unreachable), by the
/// same relaxation run on reversed arcs.
std::vector<double> oracle_distances_to(const RoadGraph& g, NodeId t);

/// Every acyclic path from n that avoids `visited`, as node sequences: all
/// paths of exactly k arcs (including ones that pass through t), plus the
/// shorter ones that end on t.
std::vector<std::vector<NodeId>> lookahead_path_set(const RoadGraph& g, const VisitedSet& visited,
                                                    NodeId n, NodeId t, int k);

/// Prefix of `path` up to and including its first visit to t; the whole
/// path when t does not occur.
std::vector<NodeId> cut_at(const std::vector<NodeId>& path, NodeId t);

/// Look-ahead value by materializing the path set, cutting each path at t,
/// and minimizing cut cost + distance(last node, t). +inf for an empty set.
double oracle_lookahead(const RoadGraph& g, const VisitedSet& visited, NodeId n, NodeId t, int k);

}  // namespace roadsearch::oracle
