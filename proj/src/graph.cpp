#include "roadsearch/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <string_view>

#include "roadsearch/error.hpp"

namespace roadsearch {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::MalformedRow: return "MalformedRow";
    case Errc::UnknownEndpoint: return "UnknownEndpoint";
    case Errc::NegativeCost: return "NegativeCost";
    case Errc::MetricViolation: return "MetricViolation";
    case Errc::InvalidCoordinate: return "InvalidCoordinate";
    case Errc::EmptyGraph: return "EmptyGraph";
    case Errc::InvalidPath: return "InvalidPath";
    case Errc::InvalidNode: return "InvalidNode";
    case Errc::InvalidHeuristic: return "InvalidHeuristic";
    case Errc::NoPath: return "NoPath";
    case Errc::BrokenChain: return "BrokenChain";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::DegenerateOutput: return "DegenerateOutput";
    case Errc::TooFewNodes: return "TooFewNodes";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Relative slack for the cost >= distance check; OSM lengths are rounded.
constexpr double kMetricSlack = 1e-9;

}  // namespace

double haversine_m(GeoPoint a, GeoPoint b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double half_dphi = (phi2 - phi1) / 2.0;
  const double half_dlambda = (b.lon - a.lon) * kDegToRad / 2.0;
  const double s = std::sin(half_dphi) * std::sin(half_dphi) +
                   std::cos(phi1) * std::cos(phi2) * std::sin(half_dlambda) * std::sin(half_dlambda);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(std::min(1.0, s)));
}

double planar_distance(GeoPoint a, GeoPoint b) {
  const double dx = b.lon - a.lon;
  const double dy = b.lat - a.lat;
  return std::sqrt(dx * dx + dy * dy);
}

double metric_distance(Metric metric, GeoPoint a, GeoPoint b) {
  return metric == Metric::great_circle ? haversine_m(a, b) : planar_distance(a, b);
}

std::optional<NodeId> RoadGraph::find(ExternalId id) const {
  if (auto it = by_external_.find(id); it != by_external_.end()) return it->second;
  return std::nullopt;
}

std::optional<double> RoadGraph::arc_cost(NodeId u, NodeId v) const {
  if (!contains(u)) return std::nullopt;
  for (const Arc& arc : out_arcs(u)) {
    if (arc.to == v) return arc.cost;
  }
  return std::nullopt;
}

void GraphBuilder::add_node(ExternalId id, GeoPoint point) {
  if (!std::isfinite(point.lat) || !std::isfinite(point.lon)) {
    throw Error(Errc::InvalidCoordinate, "node " + std::to_string(id) + " has a non-finite coordinate");
  }
  if (metric_ == Metric::great_circle &&
      (point.lat < -90.0 || point.lat > 90.0 || point.lon < -180.0 || point.lon > 180.0)) {
    throw Error(Errc::InvalidCoordinate, "node " + std::to_string(id) + " is outside lat/lon range");
  }
  const auto index = static_cast<std::uint32_t>(points_.size());
  if (!index_.emplace(id, index).second) {
    throw Error(Errc::MalformedRow, "duplicate node id " + std::to_string(id));
  }
  points_.push_back(point);
  external_ids_.push_back(id);
}

void GraphBuilder::add_edge(ExternalId u, ExternalId v, double cost, bool oneway) {
  const auto from = index_.find(u);
  const auto to = index_.find(v);
  if (from == index_.end() || to == index_.end()) {
    throw Error(Errc::UnknownEndpoint, "edge " + std::to_string(u) + "->" + std::to_string(v) +
                                           " references a missing node");
  }
  if (!(cost >= 0.0) || !std::isfinite(cost)) {
    throw Error(Errc::NegativeCost, "edge " + std::to_string(u) + "->" + std::to_string(v) +
                                        " has cost " + std::to_string(cost));
  }
  pending_.push_back({from->second, to->second, cost});
  if (!oneway) pending_.push_back({to->second, from->second, cost});
}

RoadGraph GraphBuilder::build(const LoadOptions& options) && {
  std::erase_if(pending_, [](const PendingArc& a) { return a.from == a.to; });
  std::sort(pending_.begin(), pending_.end(), [](const PendingArc& a, const PendingArc& b) {
    if (a.from != b.from) return a.from < b.from;
    if (a.to != b.to) return a.to < b.to;
    return a.cost < b.cost;
  });
  // Cheapest of each parallel group sorts first.
  pending_.erase(std::unique(pending_.begin(), pending_.end(),
                             [](const PendingArc& a, const PendingArc& b) {
                               return a.from == b.from && a.to == b.to;
                             }),
                 pending_.end());

  RoadGraph g;
  g.metric_ = metric_;
  g.points_ = std::move(points_);
  g.external_ids_ = std::move(external_ids_);
  g.by_external_.reserve(g.external_ids_.size());
  for (std::uint32_t i = 0; i < g.external_ids_.size(); ++i) {
    g.by_external_.emplace(g.external_ids_[i], NodeId{i});
  }

  std::size_t violations = 0;
  g.arcs_.reserve(pending_.size());
  g.offsets_.assign(g.points_.size() + 1, 0);
  for (const PendingArc& p : pending_) {
    const double dist = metric_distance(metric_, g.points_[p.from], g.points_[p.to]);
    if (p.cost < dist * (1.0 - kMetricSlack)) {
      std::ostringstream msg;
      msg << std::setprecision(17) << "arc " << g.external_ids_[p.from] << "->"
          << g.external_ids_[p.to] << " cost " << p.cost << " is below metric distance " << dist;
      if (options.strict) throw Error(Errc::MetricViolation, msg.str());
      ++violations;
      if (options.on_warning) options.on_warning(msg.str());
    }
    g.arcs_.push_back({NodeId{p.from}, NodeId{p.to}, p.cost});
    ++g.offsets_[p.from + 1];
  }
  for (std::size_t i = 1; i < g.offsets_.size(); ++i) g.offsets_[i] += g.offsets_[i - 1];
  if (violations > 1 && options.on_warning) {
    options.on_warning(std::to_string(violations) + " arcs are cheaper than their metric distance");
  }
  return g;
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  for (auto& f : fields) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
  }
  return fields;
}

[[noreturn]] void malformed(std::string_view file, std::size_t line_no, const std::string& what) {
  throw Error(Errc::MalformedRow, std::string(file) + " line " + std::to_string(line_no) + ": " + what);
}

template <typename T>
T parse_number(std::string_view text, std::string_view file, std::size_t line_no) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  // from_chars rejects a leading '+', which OSM exports never produce.
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    malformed(file, line_no, "cannot parse '" + std::string(text) + "'");
  }
  return value;
}

bool parse_bool(std::string_view text, std::string_view file, std::size_t line_no) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "true" || lower == "1") return true;
  if (lower == "false" || lower == "0") return false;
  malformed(file, line_no, "oneway must be true or false, got '" + std::string(text) + "'");
}

struct CsvTable {
  std::vector<std::size_t> columns;
  std::size_t width = 0;
};

CsvTable header_columns(std::string_view header, std::span<const std::string_view> required,
                        std::string_view file, std::size_t line_no) {
  const auto names = split_csv(header);
  CsvTable table;
  table.width = names.size();
  for (std::string_view want : required) {
    auto it = std::find(names.begin(), names.end(), want);
    if (it == names.end()) malformed(file, line_no, "missing column '" + std::string(want) + "'");
    table.columns.push_back(static_cast<std::size_t>(it - names.begin()));
  }
  return table;
}

// Returns false at EOF. Skips blank lines; hands '#' lines to on_comment.
template <typename OnComment>
bool next_line(std::istream& in, std::string& line, std::size_t& line_no, OnComment&& on_comment) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.front() == '#') {
      on_comment(std::string_view(line));
      continue;
    }
    return true;
  }
  return false;
}

}  // namespace

RoadGraph read_network(std::istream& nodes, std::istream& edges, const LoadOptions& options) {
  Metric metric = Metric::great_circle;
  auto on_node_comment = [&metric](std::string_view comment) {
    comment.remove_prefix(1);
    while (!comment.empty() && comment.front() == ' ') comment.remove_prefix(1);
    if (comment == "metric=planar") metric = Metric::planar;
    if (comment == "metric=great_circle") metric = Metric::great_circle;
  };
  auto ignore = [](std::string_view) {};

  std::string line;
  std::size_t line_no = 0;
  constexpr std::string_view kNodeFile = "node file";
  constexpr std::string_view kEdgeFile = "edge file";

  if (!next_line(nodes, line, line_no, on_node_comment)) {
    throw Error(Errc::EmptyGraph, "node file has no header");
  }
  constexpr std::string_view node_cols[] = {"id", "lat", "lon"};
  const CsvTable node_table = header_columns(line, node_cols, kNodeFile, line_no);

  // Comments before the header decide the metric, so the builder comes after.
  GraphBuilder builder(metric);
  while (next_line(nodes, line, line_no, ignore)) {
    const auto fields = split_csv(line);
    if (fields.size() != node_table.width) malformed(kNodeFile, line_no, "wrong column count");
    const auto id = parse_number<ExternalId>(fields[node_table.columns[0]], kNodeFile, line_no);
    const GeoPoint p{parse_number<double>(fields[node_table.columns[1]], kNodeFile, line_no),
                     parse_number<double>(fields[node_table.columns[2]], kNodeFile, line_no)};
    builder.add_node(id, p);
  }
  if (builder.node_count() == 0) throw Error(Errc::EmptyGraph, "node file lists no nodes");

  line_no = 0;
  if (!next_line(edges, line, line_no, ignore)) malformed(kEdgeFile, 0, "missing header");
  constexpr std::string_view edge_cols[] = {"u", "v", "length", "oneway"};
  const CsvTable edge_table = header_columns(line, edge_cols, kEdgeFile, line_no);
  while (next_line(edges, line, line_no, ignore)) {
    const auto fields = split_csv(line);
    if (fields.size() != edge_table.width) malformed(kEdgeFile, line_no, "wrong column count");
    builder.add_edge(parse_number<ExternalId>(fields[edge_table.columns[0]], kEdgeFile, line_no),
                     parse_number<ExternalId>(fields[edge_table.columns[1]], kEdgeFile, line_no),
                     parse_number<double>(fields[edge_table.columns[2]], kEdgeFile, line_no),
                     parse_bool(fields[edge_table.columns[3]], kEdgeFile, line_no));
  }
  return std::move(builder).build(options);
}

RoadGraph load_network(const std::filesystem::path& node_file,
                       const std::filesystem::path& edge_file, const LoadOptions& options) {
  std::ifstream nodes(node_file);
  if (!nodes) throw Error(Errc::Io, "cannot open " + node_file.string());
  std::ifstream edges(edge_file);
  if (!edges) throw Error(Errc::Io, "cannot open " + edge_file.string());
  return read_network(nodes, edges, options);
}

void write_network(const RoadGraph& g, std::ostream& nodes, std::ostream& edges) {
  nodes << std::setprecision(17);
  edges << std::setprecision(17);
  if (g.metric() == Metric::planar) nodes << "# metric=planar\n";
  nodes << "id,lat,lon\n";
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    const GeoPoint p = g.point(NodeId{i});
    nodes << g.external_id(NodeId{i}) << ',' << p.lat << ',' << p.lon << '\n';
  }
  edges << "u,v,length,oneway\n";
  for (const Arc& arc : g.arcs()) {
    const auto reverse = g.arc_cost(arc.to, arc.from);
    const bool twoway = reverse && *reverse == arc.cost;
    if (twoway && arc.to < arc.from) continue;
    edges << g.external_id(arc.from) << ',' << g.external_id(arc.to) << ',' << arc.cost << ','
          << (twoway ? "false" : "true") << '\n';
  }
}

void export_network(const RoadGraph& g, const std::filesystem::path& node_file,
                    const std::filesystem::path& edge_file) {
  std::ofstream nodes(node_file, std::ios::binary);
  std::ofstream edges(edge_file, std::ios::binary);
  if (!nodes || !edges) throw Error(Errc::Io, "cannot write " + node_file.string());
  write_network(g, nodes, edges);
  if (!nodes.flush() || !edges.flush()) throw Error(Errc::Io, "write failed");
}

std::vector<std::uint32_t> strongly_connected_components(const RoadGraph& g,
                                                         std::size_t* component_count) {
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  const auto n = static_cast<std::uint32_t>(g.node_count());
  std::vector<std::uint32_t> index(n, kUnset);
  std::vector<std::uint32_t> lowlink(n, 0);
  std::vector<std::uint32_t> component(n, kUnset);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  // (node, next out-arc offset) frames replace recursion.
  std::vector<std::pair<std::uint32_t, std::size_t>> frames;
  std::uint32_t next_index = 0;
  std::uint32_t next_component = 0;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    frames.emplace_back(root, 0);
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;

    while (!frames.empty()) {
      auto& [v, next_arc] = frames.back();
      const auto arcs = g.out_arcs(NodeId{v});
      if (next_arc < arcs.size()) {
        const std::uint32_t w = arcs[next_arc++].to.value;
        if (index[w] == kUnset) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.emplace_back(w, 0);
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
        continue;
      }
      const std::uint32_t done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const std::uint32_t parent = frames.back().first;
        lowlink[parent] = std::min(lowlink[parent], lowlink[done]);
      }
      if (lowlink[done] == index[done]) {
        std::uint32_t w = 0;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          component[w] = next_component;
        } while (w != done);
        ++next_component;
      }
    }
  }
  if (component_count) *component_count = next_component;
  return component;
}

RoadGraph largest_navigable_component(const RoadGraph& g) {
  if (g.empty()) throw Error(Errc::EmptyGraph, "graph has no nodes");
  std::size_t count = 0;
  const auto component = strongly_connected_components(g, &count);
  std::vector<std::size_t> size(count, 0);
  std::vector<ExternalId> min_external(count, std::numeric_limits<ExternalId>::max());
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    ++size[component[i]];
    min_external[component[i]] = std::min(min_external[component[i]], g.external_id(NodeId{i}));
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < count; ++c) {
    if (size[c] > size[best] || (size[c] == size[best] && min_external[c] < min_external[best])) {
      best = c;
    }
  }
  if (size[best] == g.node_count()) return g;

  GraphBuilder builder(g.metric());
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    if (component[i] == best) builder.add_node(g.external_id(NodeId{i}), g.point(NodeId{i}));
  }
  for (const Arc& arc : g.arcs()) {
    if (component[arc.from.value] == best && component[arc.to.value] == best) {
      builder.add_edge(g.external_id(arc.from), g.external_id(arc.to), arc.cost, true);
    }
  }
  // Metric violations were already reported when g was built.
  return std::move(builder).build();
}

bool Path::is_valid() const {
  for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
    if (edges[j].second != edges[j + 1].first) return false;
  }
  return true;
}

std::vector<NodeId> Path::nodes() const {
  std::vector<NodeId> out;
  if (edges.empty()) return out;
  out.reserve(edges.size() + 1);
  out.push_back(edges.front().first);
  for (const auto& e : edges) out.push_back(e.second);
  return out;
}

bool Path::is_acyclic() const {
  if (!is_valid()) return false;
  auto seq = nodes();
  std::sort(seq.begin(), seq.end());
  return std::adjacent_find(seq.begin(), seq.end()) == seq.end();
}

double path_cost(const RoadGraph& g, const Path& p) {
  if (!p.is_valid()) throw Error(Errc::InvalidPath, "consecutive edges do not chain");
  double total = 0.0;
  for (const auto& [u, v] : p.edges) {
    const auto cost = g.arc_cost(u, v);
    if (!cost) {
      throw Error(Errc::InvalidPath, "no arc " + std::to_string(u.value) + "->" + std::to_string(v.value));
    }
    total += *cost;
  }
  return total;
}

}  // namespace roadsearch
