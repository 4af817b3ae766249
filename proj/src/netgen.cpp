#include "roadsearch/netgen.hpp"

#include <cmath>

#include "roadsearch/error.hpp"
#include "roadsearch/random.hpp"

namespace roadsearch::netgen {

GenSpec::Kind parse_kind(const std::string& name) {
  if (name == "grid") return GenSpec::Kind::grid;
  if (name == "random_geometric" || name == "rgg") return GenSpec::Kind::random_geometric;
  throw Error(Errc::InvalidSpec, "unknown generator kind '" + name + "'");
}

std::string to_string(GenSpec::Kind kind) {
  return kind == GenSpec::Kind::grid ? "grid" : "random_geometric";
}

namespace {

void check_common(const GenSpec& spec) {
  if (!(spec.cost_factor >= 1.0) || !std::isfinite(spec.cost_factor)) {
    throw Error(Errc::InvalidSpec, "cost_factor must be >= 1");
  }
  if (!(spec.oneway_fraction >= 0.0 && spec.oneway_fraction <= 1.0)) {
    throw Error(Errc::InvalidSpec, "oneway_fraction must lie in [0, 1]");
  }
  if (!(spec.jitter >= 0.0) || !std::isfinite(spec.jitter)) {
    throw Error(Errc::InvalidSpec, "jitter must be >= 0");
  }
}

// Adds u-v as a two-way segment, or as a one-way arc in a random direction.
void add_segment(GraphBuilder& builder, Rng& rng, const GenSpec& spec, ExternalId u, GeoPoint pu,
                 ExternalId v, GeoPoint pv) {
  const double cost = planar_distance(pu, pv) * spec.cost_factor;
  if (spec.oneway_fraction > 0.0 && rng.chance(spec.oneway_fraction)) {
    if (rng.chance(0.5)) {
      builder.add_edge(u, v, cost, true);
    } else {
      builder.add_edge(v, u, cost, true);
    }
    return;
  }
  builder.add_edge(u, v, cost, false);
}

}  // namespace

RoadGraph gen_grid(const GenSpec& spec) {
  check_common(spec);
  if (spec.width < 2 || spec.height < 2) throw Error(Errc::InvalidSpec, "grid needs width, height >= 2");

  Rng rng(spec.seed);
  const auto id = [&](int row, int col) {
    return static_cast<ExternalId>(row) * static_cast<ExternalId>(spec.width) + static_cast<ExternalId>(col);
  };
  std::vector<GeoPoint> points;
  points.reserve(static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height));
  GraphBuilder builder(Metric::planar);
  for (int row = 0; row < spec.height; ++row) {
    for (int col = 0; col < spec.width; ++col) {
      GeoPoint p{static_cast<double>(row), static_cast<double>(col)};
      if (spec.jitter > 0.0) {
        p.lat += spec.jitter * (2.0 * rng.uniform() - 1.0);
        p.lon += spec.jitter * (2.0 * rng.uniform() - 1.0);
      }
      points.push_back(p);
      builder.add_node(id(row, col), p);
    }
  }
  for (int row = 0; row < spec.height; ++row) {
    for (int col = 0; col < spec.width; ++col) {
      const ExternalId here = id(row, col);
      if (col + 1 < spec.width) {
        add_segment(builder, rng, spec, here, points[here], here + 1, points[here + 1]);
      }
      if (row + 1 < spec.height) {
        const ExternalId below = id(row + 1, col);
        add_segment(builder, rng, spec, here, points[here], below, points[below]);
      }
    }
  }
  return std::move(builder).build();
}

RoadGraph gen_random_geometric(const GenSpec& spec) {
  check_common(spec);
  if (spec.n < 2) throw Error(Errc::InvalidSpec, "random_geometric needs n >= 2");
  if (!(spec.connect_radius >= 0.0) || !std::isfinite(spec.connect_radius)) {
    throw Error(Errc::InvalidSpec, "connect_radius must be a finite non-negative number");
  }

  Rng rng(spec.seed);
  std::vector<GeoPoint> points(static_cast<std::size_t>(spec.n));
  GraphBuilder builder(Metric::planar);
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i].lon = rng.uniform();
    points[i].lat = rng.uniform();
    builder.add_node(i, points[i]);
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (planar_distance(points[i], points[j]) <= spec.connect_radius) {
        add_segment(builder, rng, spec, i, points[i], j, points[j]);
      }
    }
  }
  RoadGraph component = largest_navigable_component(std::move(builder).build());
  if (component.node_count() < 2) {
    throw Error(Errc::DegenerateOutput, "largest strongly connected component has " +
                                            std::to_string(component.node_count()) + " node(s)");
  }
  return component;
}

RoadGraph generate(const GenSpec& spec) {
  return spec.kind == GenSpec::Kind::grid ? gen_grid(spec) : gen_random_geometric(spec);
}

}  // namespace roadsearch::netgen
