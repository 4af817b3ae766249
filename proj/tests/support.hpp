#pragma once

// Test-only helpers: random graph generators and brute-force reachability.
// Kept independent of netgen so generator bugs cannot hide search bugs.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "roadsearch/graph.hpp"
#include "roadsearch/random.hpp"
#include "roadsearch/search.hpp"

namespace roadsearch::testing {

struct RandomGraphSpec {
  int nodes = 50;
  double radius = 0.25;
  double oneway_fraction = 0.2;
  double max_cost_factor = 1.5;  // costs drawn in [1, max] x distance
  std::uint64_t seed = 1;
};

/// Random planar mixed graph; every arc cost is >= its endpoint distance.
inline RoadGraph random_planar_graph(const RandomGraphSpec& spec) {
  Rng rng(spec.seed);
  GraphBuilder builder(Metric::planar);
  std::vector<GeoPoint> points(static_cast<std::size_t>(spec.nodes));
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i] = {rng.uniform(), rng.uniform()};
    builder.add_node(1000 + i * 7, points[i]);
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = planar_distance(points[i], points[j]);
      if (d > spec.radius) continue;
      const double cost = d * (1.0 + (spec.max_cost_factor - 1.0) * rng.uniform());
      if (rng.chance(spec.oneway_fraction)) {
        if (rng.chance(0.5)) {
          builder.add_edge(1000 + i * 7, 1000 + j * 7, cost, true);
        } else {
          builder.add_edge(1000 + j * 7, 1000 + i * 7, cost, true);
        }
      } else {
        builder.add_edge(1000 + i * 7, 1000 + j * 7, cost, false);
      }
    }
  }
  return std::move(builder).build();
}

/// reach[u][v] by repeated BFS over the arc list.
inline std::vector<std::vector<char>> reachability(const RoadGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<std::uint32_t> queue{static_cast<std::uint32_t>(s)};
    reach[s][s] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (const Arc& arc : g.out_arcs(NodeId{queue[head]})) {
        if (!reach[s][arc.to.value]) {
          reach[s][arc.to.value] = 1;
          queue.push_back(arc.to.value);
        }
      }
    }
  }
  return reach;
}

inline bool strongly_connected(const RoadGraph& g) {
  for (const auto& row : reachability(g)) {
    for (char r : row) {
      if (!r) return false;
    }
  }
  return true;
}

inline bool relative_equal(double a, double b, double rel = 1e-9) {
  if (a == b) return true;
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("roadsearch_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace roadsearch::testing
