#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "paracon/errors.hpp"
#include "paracon/generators.hpp"
#include "paracon/verify.hpp"

using namespace paracon;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
const NormIndex kTwo = NormIndex::finite(2);

ParaMap half(const Vec& a, double c) { return ParaMap::projector(ConvexSet::halfspace(a, c)); }

DirectedGraph cycle3() { return DirectedGraph::from_arcs(3, std::vector<Arc>{{0, 1}, {1, 2}, {2, 0}}, true); }

}  // namespace

TEST(CheckReport, RecordAndMerge) {
  CheckReport a;
  a.name = "a";
  a.record(true, 1, 2, 1, "x");
  a.record(false, 3, 2, -1, "y");
  EXPECT_EQ(a.trials, 2u);
  EXPECT_FALSE(a.passed());
  EXPECT_EQ(a.worst_margin, -1);
  CheckReport b;
  b.tally("k", 2);
  b.merge(a);
  EXPECT_EQ(b.trials, 2u);
  EXPECT_EQ(b.violations.front().what, "a: y");
  EXPECT_EQ(b.counts.at("k"), 2u);
}

TEST(Elsner, AlternatingHalfspacesReachIntersection) {
  const std::vector<ParaMap> pool{half(v2(1, 1), 1), half(v2(1, -1), 0)};
  const auto r = check_elsner(pool, [](std::size_t t) { return t % 2; }, v2(10, -7), 200);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.trials, 2u);
}

TEST(Elsner, SingleMapPool) {
  const std::vector<ParaMap> pool{ParaMap::gradient_descent({Mat::Identity(2, 2), v2(1, 1)}, 0.5, 1.0)};
  EXPECT_TRUE(check_elsner(pool, [](std::size_t) { return 0; }, v2(3, 3), 100).passed());
}

TEST(LinearQneIffNe, Examples) {
  std::mt19937_64 rng(42);
  const auto xs = sample_ball(Vec::Zero(3), 10, 40, rng);
  Mat proj = Mat::Zero(3, 3);
  proj(0, 0) = proj(1, 1) = 1;
  auto r = check_linear_qne_iff_ne(proj, xs, kTwo);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.counts.at("nonexpansive"), 1u);
  EXPECT_EQ(r.counts.at("paracontraction"), 1u);

  r = check_linear_qne_iff_ne(2.0 * Mat::Identity(3, 3), xs, kTwo);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.counts.at("expansive"), 1u);
  EXPECT_EQ(r.counts.at("not_paracontraction"), 1u);

  r = check_linear_qne_iff_ne(gen::random_doubly_stochastic(3, rng), xs, kTwo);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.counts.at("paracontraction"), 1u);
}

TEST(StackedMap, PcAndEqualityWitness) {
  std::mt19937_64 rng(42);
  const Vec y = v2(0.5, 0);
  const std::vector<ParaMap> maps{half(v2(1, 0), 1), half(v2(-1, 0), 0)};
  std::vector<StackedVector> xs;
  for (auto& f : sample_ball(Vec::Zero(4), 10, 50, rng)) xs.emplace_back(2, 2, f);
  const std::vector<StackedVector> ys{StackedVector::replicate(y, 2)};
  EXPECT_TRUE(check_M_pc_22(maps, xs, ys).passed());
  const auto q = check_M_qne_pinf(maps, xs, ys, kTwo, rng);
  EXPECT_TRUE(q.passed());
  EXPECT_EQ(q.counts.at("equality_configurations"), 1u);

  // Points of F(M) keep both distances.
  const std::vector<StackedVector> fixed_x{StackedVector::replicate(v2(0.2, 5), 2)};
  EXPECT_TRUE(check_M_qne_pinf(maps, fixed_x, ys, kTwo, rng).passed());
}

TEST(StochasticChecks, Preconditions) {
  std::vector<Vec> xs{v2(1, 2)};
  Mat notds(2, 2);
  notds << 1, 0, 0.5, 0.5;
  EXPECT_THROW(check_dbl_stochastic_pc(notds, xs), PreconditionError);
  std::vector<StackedVector> sx{StackedVector(2, 1, v2(1, 2))};
  EXPECT_THROW(check_S_I_pc_infty(notds, sx, kTwo), PreconditionError);
}

TEST(StochasticChecks, NecessityWitnessIsExact) {
  std::mt19937_64 rng(42);
  Mat S(3, 3);
  S << 0.5, 0.5, 0, 0, 0.5, 0.5, 0.5, 0, 0.5;
  for (double p : {1.5, 2.0, 3.0}) {
    const auto r = check_positive_stochastic_necessity(S, 2, NormIndex::finite(p), rng);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.counts.at("probes"), 1u);
  }
  // Identity: F(S kron I) is everything, the probe does not apply.
  const auto skip = check_positive_stochastic_necessity(Mat::Identity(2, 2), 2, kTwo, rng);
  EXPECT_EQ(skip.trials, 0u);
  EXPECT_EQ(skip.counts.at("skipped_fixed_set_not_consensus"), 1u);
}

TEST(VSequence, FixedStartGivesZeros) {
  std::mt19937_64 rng(1);
  const Vec y = gen::gaussian_vector(3, rng);
  auto maps = gen::random_projectors_containing(3, y, rng);
  std::vector<StochasticMatrix> steps;
  for (int t = 0; t < 4; ++t) steps.push_back(gen::random_stochastic(cycle3(), rng));
  const auto vs = make_v_sequence(maps, steps, StackedVector::replicate(y, 3), y);
  for (const auto& v : vs.v) EXPECT_LE((v.flat() - StackedVector::replicate(y, 3).flat()).norm(), 1e-15);
  EXPECT_TRUE(check_v_inequality(vs, kTwo).passed());
  const auto phi = check_phi_inequality(vs, kTwo);
  EXPECT_TRUE(phi.passed());
  EXPECT_EQ(phi.counts.at("identity_cases"), 3u);
}

TEST(VSequence, RandomSchedulesPass) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec y = gen::gaussian_vector(3, rng);
    auto maps = gen::random_projectors_containing(3, y, rng);
    std::vector<StochasticMatrix> steps;
    for (int t = 0; t < 4; ++t) steps.push_back(gen::random_stochastic(gen::random_strongly_connected_graph(3, 0.3, rng), rng));
    const StackedVector v0(3, 3, 5.0 * gen::gaussian_vector(9, rng));
    const auto vs = make_v_sequence(maps, steps, v0, y);
    ASSERT_TRUE(check_v_inequality(vs, kTwo).passed());
    ASSERT_TRUE(check_phi_inequality(vs, kTwo).passed());
  }
}

TEST(ComposedMap, CycleOverTwoStepsStrictDecrease) {
  std::mt19937_64 rng(42);
  const Vec y = gen::gaussian_vector(3, rng);
  const auto maps = gen::random_halfspace_projectors(3, y, 0.5, rng);
  const auto S = stochastic_from_graph(cycle3());
  const std::vector<StochasticMatrix> steps{S, S};
  std::vector<StackedVector> xs;
  for (auto& f : sample_ball(Vec::Zero(9), 10, 500, rng)) xs.emplace_back(3, 3, f);
  const auto r = check_composed_map_pc(maps, steps, xs, y, kTwo);
  EXPECT_TRUE(r.passed());
  EXPECT_GE(r.trials, 500u);
  EXPECT_TRUE(check_class_lemma(maps, steps, std::span(xs).first(3), y).passed());
}

TEST(ComposedMap, SingleStepMatchesStochasticCheck) {
  std::mt19937_64 rng(8);
  const Vec y = gen::gaussian_vector(2, rng);
  const Mat P = gen::random_positive_stochastic(3, rng);
  std::set<double> w(P.reshaped().begin(), P.reshaped().end());
  const std::vector<StochasticMatrix> steps{StochasticMatrix(P, w)};
  const auto maps = gen::random_projectors_containing(3, y, rng);
  std::vector<StackedVector> xs;
  for (auto& f : sample_ball(Vec::Zero(6), 10, 50, rng)) xs.emplace_back(3, 2, f);
  EXPECT_TRUE(check_composed_map_pc(maps, steps, xs, y, kTwo).passed());
  // The composed map is (S kron I) M; the mixing half alone is also strict.
  std::vector<StackedVector> mx;
  for (const auto& x : xs) mx.push_back(apply_stacked(maps, x));
  EXPECT_TRUE(check_S_I_pc_infty(P, mx, kTwo).passed());
}

TEST(ComposedMap, PreconditionsEnforced) {
  std::mt19937_64 rng(2);
  const Vec y = Vec::Zero(2);
  const auto maps = gen::random_projectors_containing(3, y, rng);
  const std::vector<StochasticMatrix> one{stochastic_from_graph(cycle3())};
  std::vector<StackedVector> xs{StackedVector(3, 2)};
  EXPECT_THROW(check_composed_map_pc(maps, one, xs, y, kTwo), PreconditionError);
  const std::vector<StochasticMatrix> rooted{stochastic_from_graph(DirectedGraph::from_arcs(3, std::vector<Arc>{{0, 1}, {1, 2}}, true))};
  EXPECT_THROW(check_class_lemma(maps, rooted, xs, y), PreconditionError);
}

TEST(Counterexample, CheckPasses) {
  const auto r = check_counterexample();
  EXPECT_TRUE(r.passed()) << (r.violations.empty() ? "" : r.violations.front().what);
}

TEST(GraphChecks, Pass) {
  std::mt19937_64 rng(42);
  EXPECT_TRUE(check_graph_homomorphism(50, 5, rng).passed());
  const auto r = check_graph_composition_complete(3, 5, 20, rng);
  EXPECT_TRUE(r.passed());
  EXPECT_GT(r.trials, 0u);
}

TEST(Suite, NamesAndUnknown) {
  const auto& suite = default_suite();
  EXPECT_GE(suite.size(), 19u);
  const std::vector<std::string> bad{"nosuchcheck"};
  EXPECT_THROW(run_suite(bad, 42), InvalidInput);
  const std::vector<std::string> one{"check_counterexample"};
  const auto reports = run_suite(one, 42);
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_TRUE(reports[0].passed());
  std::ostringstream csv;
  write_report_csv(csv, reports);
  EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "check,trials,violations,worst_margin");
}
