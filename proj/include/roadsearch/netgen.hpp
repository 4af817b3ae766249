#pragma once

#include <cstdint>
#include <string>

#include "roadsearch/graph.hpp"

namespace roadsearch::netgen {

/// Parameters for a synthetic planar road network. Identical specs give
/// identical graphs.
struct GenSpec {
  enum class Kind { grid, random_geometric };

  Kind kind = Kind::grid;
  int width = 10;          // grid
  int height = 10;         // grid
  int n = 100;             // random_geometric
  double connect_radius = 0.1;
  double cost_factor = 1.2;
  double jitter = 0.0;     // grid only; random_geometric points are already uniform
  std::uint64_t seed = 1;
  double oneway_fraction = 0.0;
};

GenSpec::Kind parse_kind(const std::string& name);
std::string to_string(GenSpec::Kind kind);

/// width x height lattice with unit spacing. Throws InvalidSpec.
RoadGraph gen_grid(const GenSpec& spec);

/// n uniform points in the unit square, linked within connect_radius, then
/// reduced to the largest strongly connected component. Throws InvalidSpec
/// or DegenerateOutput.
RoadGraph gen_random_geometric(const GenSpec& spec);

RoadGraph generate(const GenSpec& spec);

}  // namespace roadsearch::netgen
