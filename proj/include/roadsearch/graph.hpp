#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace roadsearch {

/// Dense internal node index, contiguous in [0, node_count).
struct NodeId {
  std::uint32_t value = 0;

  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

using ExternalId = std::uint64_t;

/// A position. Under the great-circle metric lat/lon are decimal degrees;
/// under the planar metric they are reused as y/x in arbitrary units.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  friend constexpr bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

enum class Metric { great_circle, planar };

inline constexpr double kEarthRadiusM = 6'371'000.0;

/// Great-circle distance in meters on a sphere of radius kEarthRadiusM.
double haversine_m(GeoPoint a, GeoPoint b);

/// Straight-line distance treating (lon, lat) as (x, y).
double planar_distance(GeoPoint a, GeoPoint b);

double metric_distance(Metric metric, GeoPoint a, GeoPoint b);

struct Arc {
  NodeId from;
  NodeId to;
  double cost = 0.0;
};

/// Immutable directed graph over dense node ids. Undirected road segments
/// are stored as two opposing arcs of equal cost. Safe to share between
/// concurrent searches.
class RoadGraph {
 public:
  RoadGraph() = default;

  std::size_t node_count() const { return points_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }
  bool empty() const { return points_.empty(); }
  Metric metric() const { return metric_; }

  bool contains(NodeId n) const { return n.value < points_.size(); }
  GeoPoint point(NodeId n) const { return points_[n.value]; }
  ExternalId external_id(NodeId n) const { return external_ids_[n.value]; }
  std::optional<NodeId> find(ExternalId id) const;

  std::span<const Arc> out_arcs(NodeId n) const {
    return {arcs_.data() + offsets_[n.value], arcs_.data() + offsets_[n.value + 1]};
  }
  std::span<const Arc> arcs() const { return arcs_; }

  /// Cost of arc u->v, if present.
  std::optional<double> arc_cost(NodeId u, NodeId v) const;

  double distance(NodeId a, NodeId b) const {
    return metric_distance(metric_, points_[a.value], points_[b.value]);
  }

 private:
  friend class GraphBuilder;

  Metric metric_ = Metric::great_circle;
  std::vector<GeoPoint> points_;
  std::vector<ExternalId> external_ids_;
  std::unordered_map<ExternalId, NodeId> by_external_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Arc> arcs_;
};

struct LoadOptions {
  /// Reject arcs cheaper than the metric distance between their endpoints
  /// instead of warning about them.
  bool strict = false;
  std::function<void(const std::string&)> on_warning;
};

/// Accumulates nodes and road segments keyed by external id, then freezes
/// them into a RoadGraph. Self-loops are dropped; among parallel arcs the
/// cheapest is kept.
class GraphBuilder {
 public:
  explicit GraphBuilder(Metric metric) : metric_(metric) {}

  /// Throws InvalidCoordinate, or MalformedRow on a duplicate id.
  void add_node(ExternalId id, GeoPoint point);
  /// Throws UnknownEndpoint or NegativeCost.
  void add_edge(ExternalId u, ExternalId v, double cost, bool oneway);

  std::size_t node_count() const { return points_.size(); }

  RoadGraph build(const LoadOptions& options = {}) &&;

 private:
  struct PendingArc {
    std::uint32_t from;
    std::uint32_t to;
    double cost;
  };

  Metric metric_;
  std::vector<GeoPoint> points_;
  std::vector<ExternalId> external_ids_;
  std::unordered_map<ExternalId, std::uint32_t> index_;
  std::vector<PendingArc> pending_;
};

/// Reads the node CSV (`id,lat,lon`) and edge CSV (`u,v,length,oneway`).
/// A leading `# metric=planar` line in the node file selects the planar
/// metric; otherwise coordinates are geographic. Extra columns are ignored.
RoadGraph load_network(const std::filesystem::path& node_file,
                       const std::filesystem::path& edge_file, const LoadOptions& options = {});
RoadGraph read_network(std::istream& nodes, std::istream& edges, const LoadOptions& options = {});

/// Writes the two CSVs in internal-id order. Opposing arc pairs of equal
/// cost are written once with oneway=false.
void write_network(const RoadGraph& g, std::ostream& nodes, std::ostream& edges);
void export_network(const RoadGraph& g, const std::filesystem::path& node_file,
                    const std::filesystem::path& edge_file);

/// Subgraph induced by the largest strongly connected component, ids
/// re-densified in original order. Ties go to the component holding the
/// smallest external id. Throws EmptyGraph.
RoadGraph largest_navigable_component(const RoadGraph& g);

/// Strongly connected component label per node (iterative Tarjan).
std::vector<std::uint32_t> strongly_connected_components(const RoadGraph& g,
                                                         std::size_t* component_count = nullptr);

/// Ordered edge sequence. `total_cost` is the sum of its arc costs.
struct Path {
  std::vector<std::pair<NodeId, NodeId>> edges;
  double total_cost = 0.0;

  bool empty() const { return edges.empty(); }
  bool is_valid() const;
  bool is_acyclic() const;
  /// Node sequence n_1..n_m; empty for the empty path.
  std::vector<NodeId> nodes() const;
};

/// Sum of arc costs along p, in order. Throws InvalidPath.
double path_cost(const RoadGraph& g, const Path& p);

}  // namespace roadsearch

template <>
struct std::hash<roadsearch::NodeId> {
  std::size_t operator()(roadsearch::NodeId n) const noexcept { return n.value; }
};
