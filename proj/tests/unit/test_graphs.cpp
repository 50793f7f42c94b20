#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "paracon/errors.hpp"
#include "paracon/generators.hpp"
#include "paracon/graphs.hpp"

using namespace paracon;

namespace {

DirectedGraph graph(std::size_t m, std::vector<Arc> arcs) { return DirectedGraph::from_arcs(m, arcs, true); }

// Boolean matrix product oracle: arc (i, j) in second o first iff some k has
// (i, k) in first and (k, j) in second.
DirectedGraph oracle_compose(const DirectedGraph& first, const DirectedGraph& second) {
  const std::size_t m = first.vertex_count();
  DirectedGraph out(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        if (first.has_arc(i, k) && second.has_arc(k, j)) out.add_arc(i, j);
  return out;
}

}  // namespace

TEST(DirectedGraph, ConstructionAndNeighbors) {
  const auto g = graph(3, {{0, 1}, {2, 1}});
  EXPECT_EQ(g.arc_count(), 5u);
  EXPECT_TRUE(g.has_all_self_arcs());
  EXPECT_EQ(g.neighbors_of(1), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(g.neighbors_of(0), (std::vector<std::size_t>{0}));
  EXPECT_THROW(g.has_arc(3, 0), std::out_of_range);
}

TEST(Compose, Examples) {
  EXPECT_EQ(compose_graphs(DirectedGraph::complete(3), DirectedGraph::complete(3)), DirectedGraph::complete(3));
  const auto g = graph(4, {{0, 2}, {3, 1}, {1, 0}});
  EXPECT_EQ(compose_graphs(DirectedGraph::self_arcs(4), g), g);
  const auto c = compose_graphs(graph(3, {{0, 1}}), graph(3, {{1, 2}}));
  EXPECT_TRUE(c.has_arc(0, 1));
  EXPECT_TRUE(c.has_arc(1, 2));
  EXPECT_TRUE(c.has_arc(0, 2));
  EXPECT_FALSE(c.has_arc(2, 0));
}

TEST(Compose, MatchesBooleanProductOracle) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 100; ++k) {
    const auto a = gen::random_self_arced_graph(5, 0.3, rng);
    const auto b = gen::random_self_arced_graph(5, 0.3, rng);
    EXPECT_EQ(compose_graphs(a, b), oracle_compose(a, b));
  }
}

TEST(StrongConnectivity, Examples) {
  EXPECT_TRUE(is_strongly_connected(graph(3, {{0, 1}, {1, 2}, {2, 0}})));
  EXPECT_FALSE(is_strongly_connected(graph(2, {{0, 1}})));
  EXPECT_TRUE(is_strongly_connected(DirectedGraph::complete(5)));
  const auto comps = strongly_connected_components(graph(4, {{0, 1}, {1, 0}, {2, 3}}));
  EXPECT_EQ(comps[0], comps[1]);
  EXPECT_NE(comps[0], comps[2]);
  EXPECT_NE(comps[2], comps[3]);
}

TEST(Complete, Examples) {
  EXPECT_TRUE(is_complete(DirectedGraph::complete(3)));
  const auto cycle = graph(3, {{0, 1}, {1, 2}, {2, 0}});
  EXPECT_FALSE(is_complete(cycle));
  const auto twice = compose_graphs(cycle, cycle);
  EXPECT_TRUE(is_complete(twice));
  EXPECT_EQ(twice.arc_count(), 9u);
}

TEST(GraphOfMatrix, Examples) {
  EXPECT_EQ(graph_of_matrix(Mat::Identity(3, 3)), DirectedGraph::self_arcs(3));
  EXPECT_EQ(graph_of_matrix(Mat::Constant(3, 3, 0.2)), DirectedGraph::complete(3));
  Mat S(2, 2);
  S << 1, 0, 0.5, 0.5;
  EXPECT_EQ(graph_of_matrix(S), graph(2, {{0, 1}}));
  S(0, 1) = -0.1;
  EXPECT_THROW(graph_of_matrix(S), InvalidInput);
}

TEST(GraphOfMatrix, HomomorphismOnRandomPairs) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const Mat A1 = gen::random_nonnegative(4, 0.4, rng);
    const Mat A2 = gen::random_nonnegative(4, 0.4, rng);
    EXPECT_EQ(graph_of_matrix(A2 * A1), compose_graphs(graph_of_matrix(A1), graph_of_matrix(A2)));
  }
}

TEST(Schedule, IndexingAndHorizon) {
  const auto a = graph(2, {{0, 1}});
  const auto b = graph(2, {{1, 0}});
  const auto s = GraphSchedule::periodic({a, b}, 10);
  EXPECT_EQ(s.pool_index(1), 0u);
  EXPECT_EQ(s.pool_index(2), 1u);
  EXPECT_EQ(s.pool_index(9), 0u);
  EXPECT_THROW(s.pool_index(0), std::out_of_range);
  EXPECT_THROW(s.pool_index(11), std::out_of_range);

  const auto r1 = GraphSchedule::seeded_random({a, b}, 42, 50);
  const auto r2 = GraphSchedule::seeded_random({a, b}, 42, 50);
  for (std::size_t t = 1; t <= 50; ++t) EXPECT_EQ(r1.pool_index(t), r2.pool_index(t));
}

TEST(Rjsc, Examples) {
  const auto sc = GraphSchedule::constant(graph(3, {{0, 1}, {1, 2}, {2, 0}}));
  const auto r = certify_rjsc(sc, 1, 1, 20);
  ASSERT_TRUE(std::holds_alternative<RjscCertificate>(r));
  EXPECT_EQ(std::get<RjscCertificate>(r).verified_windows, 20u);

  const auto alt = GraphSchedule::periodic({graph(2, {{0, 1}}), graph(2, {{1, 0}})});
  EXPECT_TRUE(std::holds_alternative<RjscCertificate>(certify_rjsc(alt, 2, 1, 10)));
  const auto first = certify_rjsc(alt, 1, 1, 10);
  ASSERT_TRUE(std::holds_alternative<RjscFailure>(first));
  EXPECT_EQ(std::get<RjscFailure>(first).failing_window, 1u);

  const auto rooted = GraphSchedule::constant(graph(2, {{0, 1}}));
  for (std::size_t l = 1; l <= 5; ++l) EXPECT_TRUE(std::holds_alternative<RjscFailure>(certify_rjsc(rooted, l, 1, 5)));
  EXPECT_TRUE(std::holds_alternative<RjscFailure>(search_rjsc(rooted, 5, 5)));

  const auto found = search_rjsc(alt, 4, 10);
  ASSERT_TRUE(std::holds_alternative<RjscCertificate>(found));
  EXPECT_EQ(std::get<RjscCertificate>(found).window_length, 2u);
  EXPECT_EQ(std::get<RjscCertificate>(found).offset, 1u);
}

TEST(Rjsc, WindowBoundsAndHorizon) {
  const auto s = GraphSchedule::periodic({graph(2, {{0, 1}}), graph(2, {{1, 0}})}, 7);
  // Window k covers (k-1) l + rho0 .. k l + rho0 - 1; k_max = 3, l = 2, rho0 = 2 needs t = 7.
  EXPECT_NO_THROW(certify_rjsc(s, 2, 2, 3));
  EXPECT_THROW(certify_rjsc(s, 2, 2, 4), std::out_of_range);
  EXPECT_THROW(certify_rjsc(s, 0, 1, 4), InvalidInput);
}
