#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "paracon/errors.hpp"
#include "paracon/vectorspace.hpp"

using namespace paracon;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

// Direct summation, kept separate from the library implementation.
double oracle_p_norm(const Vec& x, double p) {
  double s = 0.0;
  for (double c : x) s += std::pow(std::abs(c), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

TEST(NormIndex, RejectsOneAndBelow) {
  EXPECT_THROW(NormIndex::finite(1.0), InvalidInput);
  EXPECT_THROW(NormIndex::finite(0.5), InvalidInput);
  EXPECT_THROW(NormIndex::finite(std::numeric_limits<double>::infinity()), InvalidInput);
  EXPECT_NO_THROW(NormIndex::finite(1.5));
  EXPECT_TRUE(NormIndex::infinity().is_infinite());
}

TEST(PNorm, SmallCases) {
  EXPECT_DOUBLE_EQ(p_norm(v2(3, 4), NormIndex::finite(2)), 5.0);
  EXPECT_EQ(p_norm(Vec::Zero(3), NormIndex::finite(7)), 0.0);
  EXPECT_EQ(p_norm((Vec(3) << 1, -2, 3).finished(), NormIndex::infinity()), 3.0);
}

TEST(PNorm, MatchesDirectSummation) {
  const Vec x = (Vec(4) << 0.3, -1.7, 2.5, 1e-3).finished();
  for (double p : {1.5, 2.0, 3.0, 7.0}) EXPECT_NEAR(p_norm(x, NormIndex::finite(p)), oracle_p_norm(x, p), 1e-13);
}

TEST(PNorm, HugeEntriesDoNotOverflow) {
  const Vec x = v2(1e200, 1e200);
  EXPECT_NEAR(p_norm(x, NormIndex::finite(3)) / 1e200, std::cbrt(2.0), 1e-14);
}

TEST(PNorm, RejectsNonFinite) {
  EXPECT_THROW(p_norm(v2(1, std::nan("")), NormIndex::finite(2)), InvalidInput);
  EXPECT_THROW(p_norm(v2(1, std::numeric_limits<double>::infinity()), NormIndex::infinity()), InvalidInput);
}

TEST(MixedNorm, Examples) {
  const std::vector<Vec> a{v2(3, 4), v2(0, 0)};
  EXPECT_DOUBLE_EQ(mixed_norm(StackedVector::from_blocks(a), {NormIndex::finite(2), NormIndex::finite(2)}), 5.0);
  const std::vector<Vec> b{v2(1, 0), v2(0, 1)};
  EXPECT_DOUBLE_EQ(mixed_norm(StackedVector::from_blocks(b), {NormIndex::finite(2), NormIndex::infinity()}), 1.0);
  const std::vector<Vec> c{v2(3, 4), v2(6, 8)};
  const double direct = std::sqrt(3.0 * 3 + 4 * 4 + 6 * 6 + 8 * 8);
  EXPECT_NEAR(mixed_norm(StackedVector::from_blocks(c), {NormIndex::finite(2), NormIndex::finite(2)}), direct, 1e-14);
  EXPECT_NEAR(direct, std::sqrt(125.0), 1e-14);
}

TEST(MixedNorm, BlockNorms) {
  const std::vector<Vec> c{v2(3, 4), v2(6, 8), v2(0, -2)};
  const Vec bn = block_norms(StackedVector::from_blocks(c), NormIndex::finite(2));
  ASSERT_EQ(bn.size(), 3);
  EXPECT_DOUBLE_EQ(bn[0], 5);
  EXPECT_DOUBLE_EQ(bn[1], 10);
  EXPECT_DOUBLE_EQ(bn[2], 2);
}

TEST(Minkowski, StrictnessWitness) {
  EXPECT_TRUE(minkowski_strictness_witness(v2(1, 0), v2(0, 1), NormIndex::finite(2)));
  EXPECT_FALSE(minkowski_strictness_witness(v2(1, 1), v2(2, 2), NormIndex::finite(2)));
  // Evaluate both sides directly for p = 3.
  const double lhs = oracle_p_norm(v2(0, 3), 3);
  const double rhs = oracle_p_norm(v2(1, 2), 3) + oracle_p_norm(v2(-1, 1), 3);
  ASSERT_LT(lhs, rhs - 1e-10);
  EXPECT_TRUE(minkowski_strictness_witness(v2(1, 2), v2(-1, 1), NormIndex::finite(3)));
  EXPECT_THROW(minkowski_strictness_witness(v2(1, 2), v2(-1, 1), NormIndex::infinity()), InvalidInput);
}

TEST(StackedVector, Layout) {
  const std::vector<Vec> blocks{v2(1, 2), v2(3, 4), v2(5, 6)};
  const StackedVector x = StackedVector::from_blocks(blocks);
  EXPECT_EQ(x.agents(), 3u);
  EXPECT_EQ(x.dimension(), 2u);
  EXPECT_EQ(x.flat(), (Vec(6) << 1, 2, 3, 4, 5, 6).finished());
  EXPECT_EQ(Vec(x.block(1)), v2(3, 4));
  EXPECT_EQ(x.blocks(), blocks);
  const StackedVector r = StackedVector::replicate(v2(7, 8), 2);
  EXPECT_EQ(r.flat(), (Vec(4) << 7, 8, 7, 8).finished());
  EXPECT_THROW(StackedVector(2, 2, Vec::Zero(3)), DimensionMismatch);
}
