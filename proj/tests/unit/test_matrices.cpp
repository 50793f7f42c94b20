#include <gtest/gtest.h>

#include <random>

#include "paracon/errors.hpp"
#include "paracon/generators.hpp"
#include "paracon/matrices.hpp"

using namespace paracon;

namespace {

DirectedGraph graph(std::size_t m, std::vector<Arc> arcs) { return DirectedGraph::from_arcs(m, arcs, true); }

Mat m22(double a, double b, double c, double d) { return (Mat(2, 2) << a, b, c, d).finished(); }

}  // namespace

TEST(StochasticFromGraph, Examples) {
  EXPECT_EQ(stochastic_from_graph(DirectedGraph::self_arcs(3)).entries(), Mat::Identity(3, 3));
  EXPECT_EQ(stochastic_from_graph(DirectedGraph::complete(2)).entries(), m22(.5, .5, .5, .5));
  EXPECT_EQ(stochastic_from_graph(graph(2, {{0, 1}})).entries(), m22(1, 0, .5, .5));
  EXPECT_THROW(stochastic_from_graph(DirectedGraph(2)), InvalidInput);
}

TEST(StochasticFromGraph, ThirdsAreExact) {
  const auto S = stochastic_from_graph(DirectedGraph::complete(3));
  EXPECT_EQ(S(0, 1), 1.0 / 3.0);
  EXPECT_TRUE(S.weight_set().count(1.0 / 3.0));
}

TEST(StochasticFromWeights, Validation) {
  const auto g = graph(2, {{0, 1}});
  EXPECT_NO_THROW(stochastic_from_weights(g, m22(1, 0, .5, .5)));
  EXPECT_THROW(stochastic_from_weights(g, m22(0.9, 0, .5, .5)), InvalidInput);  // row sum 0.9
  EXPECT_THROW(stochastic_from_weights(g, m22(.5, .5, .5, .5)), InvalidInput);  // weight off the graph
  EXPECT_THROW(stochastic_from_weights(g, m22(1, 0, 0, 1)), InvalidInput);      // arc without weight
}

TEST(StochasticMatrix, WeightSetMembership) {
  EXPECT_THROW(StochasticMatrix(m22(.5, .5, .5, .5), {0.25}), InvalidInput);
  EXPECT_NO_THROW(StochasticMatrix(m22(.5, .5, .5, .5), {0.5}));
}

TEST(ApplyKron, Examples) {
  const std::vector<Vec> x{(Vec(2) << 2, 0).finished(), (Vec(2) << 0, 2).finished()};
  const auto sx = StackedVector::from_blocks(x);
  EXPECT_EQ(apply_kron(Mat::Identity(2, 2), sx), sx);
  EXPECT_EQ(apply_kron(m22(.5, .5, .5, .5), sx).flat(), Vec::Ones(4));
  const std::vector<Vec> y{Vec::Constant(1, 4.0), Vec::Constant(1, 0.0)};
  EXPECT_EQ(apply_kron(m22(1, 0, .5, .5), StackedVector::from_blocks(y)).flat(), (Vec(2) << 4, 2).finished());
}

TEST(ApplyKron, MatchesExplicitKroneckerProduct) {
  std::mt19937_64 rng(9);
  const Mat S = gen::random_positive_stochastic(4, rng);
  const StackedVector x(4, 3, gen::gaussian_vector(12, rng));
  const Vec direct = kron_identity(S, 3) * x.flat();
  const Vec fast = apply_kron(S, x).flat();
  for (Eigen::Index k = 0; k < 12; ++k) EXPECT_NEAR(fast[k], direct[k], 1e-14);
}

TEST(PhiProduct, Examples) {
  const auto S = stochastic_from_graph(graph(3, {{0, 1}, {1, 2}}));
  const std::vector<StochasticMatrix> constant(5, S);
  EXPECT_EQ(phi_product(constant, 2, 2).matrix, Mat::Identity(3, 3));
  const Mat cube = S.entries() * S.entries() * S.entries();
  EXPECT_TRUE(phi_product(constant, 1, 4).matrix.isApprox(cube, 1e-15));

  const auto S1 = stochastic_from_graph(graph(2, {{0, 1}}));
  const auto S2 = stochastic_from_graph(graph(2, {{1, 0}}));
  const std::vector<StochasticMatrix> alt{S1, S2};
  // Phi(2, 0) = S(2) S(1); by hand [[.5,.5],[0,1]] [[1,0],[.5,.5]] = [[.75,.25],[.5,.5]].
  EXPECT_EQ(phi_product(alt, 0, 2).matrix, m22(.75, .25, .5, .5));
  EXPECT_THROW(phi_product(alt, 2, 1), std::out_of_range);
  EXPECT_THROW(phi_product(alt, 0, 3), std::out_of_range);
}

TEST(Predicates, Examples) {
  const Mat half = m22(.5, .5, .5, .5);
  EXPECT_TRUE(is_positive_matrix(half));
  EXPECT_TRUE(is_doubly_stochastic(half));
  EXPECT_TRUE(has_positive_diagonal(half));
  const Mat ce = m22(1, 0, .5, .5);
  EXPECT_FALSE(is_positive_matrix(ce));
  EXPECT_FALSE(is_doubly_stochastic(ce));
  EXPECT_TRUE(is_row_stochastic(ce));
  EXPECT_FALSE(is_positive_matrix(Mat::Identity(2, 2)));
  EXPECT_TRUE(is_doubly_stochastic(Mat::Identity(2, 2)));
}

TEST(ConsensusFixedSet, Examples) {
  EXPECT_TRUE(consensus_fixed_set_check(stochastic_from_graph(graph(3, {{0, 1}, {1, 2}, {2, 0}})).entries()));
  EXPECT_FALSE(consensus_fixed_set_check(Mat::Identity(3, 3)));
  Mat block = Mat::Zero(4, 4);
  block.topLeftCorner(2, 2) = m22(.5, .5, .5, .5);
  block.bottomRightCorner(2, 2) = m22(.5, .5, .5, .5);
  EXPECT_FALSE(consensus_fixed_set_check(block));
}

TEST(Generators, DoublyStochasticAndPositive) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const Mat D = gen::random_doubly_stochastic(5, rng);
    EXPECT_TRUE(is_doubly_stochastic(D));
    EXPECT_TRUE(has_positive_diagonal(D));
    const Mat P = gen::random_positive_stochastic(5, rng);
    EXPECT_TRUE(is_positive_matrix(P));
    EXPECT_TRUE(is_row_stochastic(P));
  }
}
