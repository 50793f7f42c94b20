#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "paracon/engine.hpp"
#include "paracon/errors.hpp"
#include "paracon/generators.hpp"
#include "paracon/verify.hpp"

using namespace paracon;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
const NormIndex kTwo = NormIndex::finite(2);

ParaMap half(double a0, double a1, double c) { return ParaMap::projector(ConvexSet::halfspace(v2(a0, a1), c)); }

}  // namespace

TEST(Step, ConsensusFixedPointInvariant) {
  const std::vector<ParaMap> maps{half(1, 0, 1), half(-1, 0, 0), half(0, 1, 2)};
  const auto x = StackedVector::replicate(v2(0.5, 0.5), 3);
  EXPECT_EQ(step(x, stochastic_from_graph(DirectedGraph::complete(3)), maps), x);
}

TEST(Step, SingleAgentIsPlainIteration) {
  const std::vector<ParaMap> maps{ParaMap::projector(ConvexSet::ball(Vec::Zero(2), 1))};
  const StackedVector x(1, 2, v2(3, 4));
  EXPECT_EQ(step(x, Mat::Identity(1, 1), maps).flat(), maps[0](v2(3, 4)));
}

TEST(Step, CounterexampleFirstAgentOnlySeesItself) {
  const Scenario sc = counterexample_scenario();
  const auto x2 = step(sc.x0, sc.step_matrices().front(), sc.maps);
  EXPECT_EQ(Vec(x2.block(0)), Vec(sc.x0.block(0)));
}

TEST(Step, AgentwiseMatchesKroneckerForm) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 30; ++k) {
    const auto g = gen::random_self_arced_graph(4, 0.4, rng);
    const auto S = gen::random_stochastic(g, rng);
    const Vec anchor = gen::gaussian_vector(3, rng);
    const auto maps = gen::random_projectors_containing(4, anchor, rng);
    const StackedVector x(4, 3, 5.0 * gen::gaussian_vector(12, rng));
    EXPECT_EQ(step_agentwise(x, g, S.entries(), maps), step(x, S, maps));
  }
}

TEST(Metrics, Disagreement) {
  EXPECT_EQ(disagreement(StackedVector::replicate(v2(1, 2), 3), kTwo), 0.0);
  const std::vector<Vec> b{v2(0, 0), v2(3, 4)};
  EXPECT_DOUBLE_EQ(disagreement(StackedVector::from_blocks(b), kTwo), 5.0);
  const StackedVector e(3, 3, (Vec(9) << 1, 0, 0, 0, 1, 0, 0, 0, 1).finished());
  EXPECT_DOUBLE_EQ(disagreement(e, kTwo), std::sqrt(2.0));
}

TEST(Metrics, Residual) {
  const std::vector<ParaMap> maps{half(1, 0, 0), ParaMap::projector(ConvexSet::ball(Vec::Zero(2), 1))};
  const std::vector<Vec> fixed{v2(-1, 0), v2(0.1, 0.1)};
  EXPECT_EQ(residual(StackedVector::from_blocks(fixed), maps, kTwo), 0.0);
  const std::vector<Vec> away{v2(-1, 0), v2(0, 3)};
  EXPECT_NEAR(residual(StackedVector::from_blocks(away), maps, kTwo), 2.0, 1e-15);

  // Affine block: residual is the minimum-norm correction of r = Ax - b.
  Mat A(1, 2);
  A << 3, 4;
  const std::vector<ParaMap> aff{ParaMap::affine_linear_solve(A, Vec::Constant(1, 5.0))};
  const StackedVector x(1, 2, v2(1, 1));  // r = 2, ||A'(AA')^{-1} r|| = 2 / 5
  EXPECT_NEAR(residual(x, aff, kTwo), 0.4, 1e-15);
}

TEST(Run, AlreadyAtConsensusFixedPoint) {
  Scenario sc;
  sc.maps = {half(1, 0, 1), half(-1, 0, 0)};
  sc.schedule = GraphSchedule::constant(DirectedGraph::complete(2));
  sc.x0 = StackedVector::replicate(v2(0.5, 0), 2);
  const Trace tr = run(sc);
  EXPECT_TRUE(tr.converged);
  EXPECT_EQ(tr.final_time(), 1u);
  EXPECT_EQ(tr.steps[0].disagreement, 0.0);
  EXPECT_EQ(tr.steps[0].residual, 0.0);
  EXPECT_FALSE(tr.steps[0].xbar.has_value());
}

TEST(Run, LinearSystemMatchesDirectSolve) {
  const LinearCase lc = linear_equation_case(false);
  const Trace tr = run(lc.scenario);
  ASSERT_TRUE(tr.converged);
  const Vec direct = lc.system.A.fullPivLu().solve(lc.system.b);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LE((Vec(tr.final_state().block(i)) - direct).norm(), 1e-6);
}

TEST(Run, CounterexampleNeverConverges) {
  const Scenario sc = counterexample_scenario(false, false, 300);
  const Trace tr = run(sc);
  EXPECT_FALSE(tr.converged);
  EXPECT_EQ(tr.final_time(), 301u);
  for (const auto& rec : tr.steps) EXPECT_EQ(Vec(rec.x.block(0)), Vec(sc.x0.block(0)));
}

TEST(Run, ValidatesShapes) {
  Scenario sc = counterexample_scenario();
  sc.x0 = StackedVector(3, 2);
  EXPECT_THROW(run(sc), DimensionMismatch);
  sc = counterexample_scenario();
  sc.schedule = GraphSchedule::constant(DirectedGraph::complete(3));
  EXPECT_THROW(run(sc), DimensionMismatch);
}

TEST(Run, UniformWeightsReproduceDefault) {
  Scenario a = linear_equation_case(true).scenario;
  a.horizon = 200;
  Scenario b = a;
  std::vector<Mat> w;
  for (const auto& g : a.schedule.pool()) w.push_back(stochastic_from_graph(g).entries());
  b.weights = w;
  std::ostringstream ta, tb;
  write_trace_csv(ta, run(a));
  write_trace_csv(tb, run(b));
  EXPECT_EQ(ta.str(), tb.str());
}

TEST(ZSubsequence, IndexArithmetic) {
  const Trace tr = run(linear_equation_case(true).scenario);
  ASSERT_GT(tr.final_time(), 20u);
  const auto t1 = z_subsequence_times(tr, 1, 1, 1);
  EXPECT_EQ(t1[0], 1u);  // (k-1) q l + rho0 - 1 at k = 2
  EXPECT_EQ(t1[1], 2u);
  const auto t2 = z_subsequence_times(tr, 2, 1, 2);
  EXPECT_EQ(t2[0], 4u);
  EXPECT_EQ(t2[1], 8u);
  const auto z = extract_z_subsequence(tr, 2, 1, 2);
  EXPECT_EQ(z[0], *tr.at(4).xbar);
  EXPECT_EQ(z[1], *tr.at(8).xbar);
}

TEST(ZSubsequence, DistanceToLimitNonincreasing) {
  const LinearCase lc = linear_equation_case(true);
  const Trace tr = run(lc.scenario);
  const auto limit = StackedVector::replicate(lc.system.solution, 3);
  double prev = INFINITY;
  for (const auto& z : extract_z_subsequence(tr, 3, 1, 2)) {
    StackedVector d = z;
    d.flat() -= limit.flat();
    const double dist = mixed_norm(d, {kTwo, NormIndex::infinity()});
    EXPECT_LE(dist, prev + 1e-12);
    prev = dist;
  }
}

TEST(Output, CsvFormat) {
  const Trace tr = run(counterexample_scenario(false, false, 2));
  std::ostringstream trace, metrics;
  write_trace_csv(trace, tr);
  write_metrics_csv(metrics, tr);
  std::istringstream ts(trace.str());
  std::string line;
  std::getline(ts, line);
  EXPECT_EQ(line, "t,agent,component,value,xbar_value");
  std::getline(ts, line);
  EXPECT_EQ(line, "1,1,1,-3,-3");
  EXPECT_EQ(metrics.str().substr(0, metrics.str().find('\n')), "t,disagreement,residual,distance_to_witness");
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(std::nan("")), "nan");
}
