#include <cmath>

#include "doctest.h"
#include "roadsearch/error.hpp"
#include "roadsearch/oracle.hpp"
#include "roadsearch/search.hpp"
#include "support.hpp"

using namespace roadsearch;
using T1 = oracle::FixtureT1;

namespace {

struct T1Nodes {
  RoadGraph g = T1::graph();
  NodeId a = *g.find(T1::a);
  NodeId b = *g.find(T1::b);
  NodeId c = *g.find(T1::c);
  NodeId t = *g.find(T1::t);
};

Errc search_error(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a search error");
  return Errc::Io;
}

}  // namespace

TEST_CASE("dijkstra on the T1 fixture") {
  T1Nodes f;
  SearchOptions trace;
  trace.record_settle_order = true;
  const SearchResult r = dijkstra(f.g, f.a, f.t, trace);
  CHECK(r.cost == 2.0);
  CHECK(r.path.edges == std::vector<std::pair<NodeId, NodeId>>{{f.a, f.b}, {f.b, f.t}});
  CHECK(r.path.total_cost == 2.0);
  // Hand-simulated: a(0), b(1), c(sqrt2), t(2).
  CHECK(r.nodes_expanded == 4);
  CHECK(r.settle_order == std::vector<NodeId>{f.a, f.b, f.c, f.t});
  CHECK(r.heuristic_evals == 0);
  CHECK(r.wall_time_s >= 0.0);
}

TEST_CASE("astar with the euclidean estimate on T1") {
  T1Nodes f;
  SearchOptions trace;
  trace.record_settle_order = true;
  const SearchResult r = astar(f.g, f.a, f.t, HeuristicSpec::euclidean(), trace);
  CHECK(r.cost == 2.0);
  // f(c) = 2*sqrt2 > 2, so c never settles.
  CHECK(r.nodes_expanded == 3);
  CHECK(r.settle_order == std::vector<NodeId>{f.a, f.b, f.t});
  // h(a) at start, then b and c after a settles, then t after b settles.
  CHECK(r.heuristic_evals == 4);
}

TEST_CASE("astar with look-ahead on T1") {
  T1Nodes f;
  for (int k = 1; k <= 4; ++k) {
    const SearchResult r = astar(f.g, f.a, f.t, HeuristicSpec::lookahead(k));
    CHECK(r.cost == 2.0);
    CHECK(r.path.nodes() == std::vector<NodeId>{f.a, f.b, f.t});
  }
}

TEST_CASE("degenerate and failing searches") {
  T1Nodes f;
  SUBCASE("s == t") {
    const SearchResult d = dijkstra(f.g, f.b, f.b);
    CHECK(d.cost == 0.0);
    CHECK(d.path.empty());
    CHECK(d.nodes_expanded == 1);
    const SearchResult a = astar(f.g, f.b, f.b, HeuristicSpec::lookahead(3));
    CHECK(a.cost == 0.0);
    CHECK(a.nodes_expanded == 1);
  }
  SUBCASE("unreachable target") {
    GraphBuilder chain(Metric::planar);
    chain.add_node(1, {0, 0});
    chain.add_node(2, {0, 1});
    chain.add_edge(1, 2, 1.0, true);
    const RoadGraph g = std::move(chain).build();
    CHECK(search_error([&] { dijkstra(g, NodeId{1}, NodeId{0}); }) == Errc::NoPath);
    CHECK(search_error([&] { astar(g, NodeId{1}, NodeId{0}, HeuristicSpec::lookahead(2)); }) ==
          Errc::NoPath);
  }
  SUBCASE("out of range ids") {
    CHECK(search_error([&] { dijkstra(f.g, f.a, NodeId{17}); }) == Errc::InvalidNode);
  }
  SUBCASE("bad heuristic") {
    CHECK(search_error([] { HeuristicSpec::lookahead(0); }) == Errc::InvalidHeuristic);
  }
}

TEST_CASE("euclidean_h") {
  T1Nodes f;
  CHECK(euclidean_h(f.g, f.t, f.t) == 0.0);
  CHECK(euclidean_h(f.g, f.c, f.t) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  GraphBuilder geo(Metric::great_circle);
  geo.add_node(1, {0, 0});
  geo.add_node(2, {1, 0});
  geo.add_edge(1, 2, 120000.0, false);
  const RoadGraph g = std::move(geo).build();
  CHECK(euclidean_h(g, NodeId{0}, NodeId{1}) == haversine_m({0, 0}, {1, 0}));
}

TEST_CASE("reconstruct_path") {
  T1Nodes f;
  std::vector<std::uint32_t> previous(4, kNoPredecessor);
  previous[f.b.value] = f.a.value;
  previous[f.t.value] = f.b.value;
  const Path p = reconstruct_path(f.g, previous, f.a, f.t);
  CHECK(p.edges == std::vector<std::pair<NodeId, NodeId>>{{f.a, f.b}, {f.b, f.t}});
  CHECK(p.total_cost == 2.0);
  CHECK(p.is_acyclic());

  CHECK(reconstruct_path(f.g, previous, f.t, f.t).empty());

  std::vector<std::uint32_t> unrooted(4, kNoPredecessor);
  unrooted[f.t.value] = f.b.value;
  CHECK(search_error([&] { reconstruct_path(f.g, unrooted, f.a, f.t); }) == Errc::BrokenChain);

  std::vector<std::uint32_t> loop(4, kNoPredecessor);
  loop[f.t.value] = f.b.value;
  loop[f.b.value] = f.t.value;
  CHECK(search_error([&] { reconstruct_path(f.g, loop, f.a, f.t); }) == Errc::BrokenChain);
}

TEST_CASE("zero heuristic settles nodes in dijkstra order") {
  SearchOptions trace;
  trace.record_settle_order = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RoadGraph g = largest_navigable_component(testing::random_planar_graph({.nodes = 80, .seed = seed}));
    Rng rng(seed);
    for (int i = 0; i < 5; ++i) {
      const NodeId s{static_cast<std::uint32_t>(rng.below(g.node_count()))};
      const NodeId t{static_cast<std::uint32_t>(rng.below(g.node_count()))};
      const SearchResult d = dijkstra(g, s, t, trace);
      const SearchResult z = astar(g, s, t, HeuristicSpec::zero(), trace);
      CHECK(d.settle_order == z.settle_order);
      CHECK(d.cost == z.cost);
      CHECK(d.path.edges == z.path.edges);
    }
  }
}

TEST_CASE("search results are valid acyclic paths whose cost matches path_cost") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const RoadGraph g = largest_navigable_component(testing::random_planar_graph({.nodes = 100, .seed = seed}));
    Rng rng(seed * 31);
    for (int i = 0; i < 5; ++i) {
      const NodeId s{static_cast<std::uint32_t>(rng.below(g.node_count()))};
      const NodeId t{static_cast<std::uint32_t>(rng.below(g.node_count()))};
      for (const HeuristicSpec& h : {HeuristicSpec::euclidean(), HeuristicSpec::lookahead(1),
                                     HeuristicSpec::lookahead(3)}) {
        const SearchResult r = astar(g, s, t, h);
        CHECK(r.path.is_acyclic());
        CHECK(testing::relative_equal(path_cost(g, r.path), r.cost));
        if (s != t) {
          CHECK(r.path.edges.front().first == s);
          CHECK(r.path.edges.back().second == t);
        }
      }
    }
  }
}

TEST_CASE("re-open mode still finds optimal costs") {
  SearchOptions reopen;
  reopen.reopen = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RoadGraph g = largest_navigable_component(testing::random_planar_graph({.nodes = 80, .seed = seed}));
    Rng rng(seed);
    for (int i = 0; i < 5; ++i) {
      const NodeId s{static_cast<std::uint32_t>(rng.below(g.node_count()))};
      const NodeId t{static_cast<std::uint32_t>(rng.below(g.node_count()))};
      const double expected = dijkstra(g, s, t).cost;
      for (int k = 1; k <= 4; ++k) {
        CHECK(testing::relative_equal(astar(g, s, t, HeuristicSpec::lookahead(k), reopen).cost, expected));
      }
    }
  }
}

TEST_CASE("closed-set look-ahead can miss the optimum; re-opening recovers it") {
  // Smallest instance found by exhaustive seed search: six nodes, all two-way.
  const RoadGraph g = testing::random_planar_graph(
      {.nodes = 6, .radius = 0.6, .oneway_fraction = 0.0, .max_cost_factor = 1.6, .seed = 173});
  const NodeId s{2};
  const NodeId t{5};
  const double optimum = oracle::oracle_shortest(g, s, t).cost;
  CHECK(testing::relative_equal(astar(g, s, t, HeuristicSpec::lookahead(1)).cost, optimum));

  const SearchResult closed = astar(g, s, t, HeuristicSpec::lookahead(2));
  CHECK(closed.cost > optimum * (1.0 + 1e-9));
  CHECK(testing::relative_equal(path_cost(g, closed.path), closed.cost));

  SearchOptions reopen;
  reopen.reopen = true;
  CHECK(testing::relative_equal(astar(g, s, t, HeuristicSpec::lookahead(2), reopen).cost, optimum));
}
