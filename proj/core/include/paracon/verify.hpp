#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "paracon/engine.hpp"
#include "paracon/generators.hpp"
#include "paracon/graphs.hpp"
#include "paracon/maps.hpp"
#include "paracon/matrices.hpp"

namespace paracon {

struct Violation {
  std::string what;  // the failing instance, human readable
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Outcome of one numerical check. Passes iff no violation was recorded.
struct CheckReport {
  std::string name;
  std::size_t trials = 0;
  std::vector<Violation> violations;
  /// Smallest slack seen over all checked inequalities (rhs - lhs for
  /// "lhs <= rhs", tolerance - |difference| for equalities).
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string note;
  /// Case tallies (vacuous samples, skipped probes, strict cases, ...).
  std::map<std::string, std::size_t> counts;

  bool passed() const noexcept { return violations.empty(); }

  /// Records one comparison; `ok` decides the verdict, the margin is tracked.
  void record(bool ok, double lhs, double rhs, double margin, const std::string& what);
  void tally(const std::string& key, std::size_t k = 1) { counts[key] += k; }
  /// Sums trials and counts, keeps the worst margin, prefixes violations with
  /// the other report's name.
  void merge(const CheckReport& other);
};

// ---------------------------------------------------------------------------
// Fixed-point iteration and composition

/// Iterates x <- pool[selector(t)](x) for t = 1..T, then requires the limit to
/// be a fixed point (residual <= 1e-7) of every map used at least
/// T / (2 |pool|) times.
CheckReport check_elsner(std::span<const ParaMap> pool, const std::function<std::size_t(std::size_t)>& selector,
                         const Vec& x0, std::size_t T);

/// F(P1 o P2) = F(P1) n F(P2), sampled in both directions, plus fixed points
/// located by iterating the composite from each sample.
CheckReport check_composition_fixed_sets(const ParaMap& p1, const ParaMap& p2, std::span<const Vec> samples,
                                         const Vec& common_fixed_point);

/// For linear P: quasi-nonexpansive <=> nonexpansive, and paracontraction
/// <=> ||Px|| < ||x|| off F(P), each side judged on the samples. Throws
/// InvalidInput if P fails the sampled linearity test.
CheckReport check_linear_qne_iff_ne(const Mat& P, std::span<const Vec> samples, NormIndex p);

/// Convex-combination probes of fixed points are fixed (pairs taken from
/// `fixed_points`, alpha uniform in [0, 1]).
CheckReport check_closed_convex(const ParaMap& map, std::span<const Vec> fixed_points, std::size_t probes,
                                std::mt19937_64& rng);

/// Strict and non-strict paracontraction checks of a single map against
/// sampled points and fixed points.
CheckReport check_map_properties(const std::string& label, const ParaMap& map, std::span<const Vec> x_samples,
                                 std::span<const Vec> y_fixed);

// ---------------------------------------------------------------------------
// The stacked map M

/// M(x) = (M_1(x_1), ..., M_m(x_m)).
StackedVector apply_stacked(std::span<const ParaMap> maps, const StackedVector& x);
bool stacked_fixed(std::span<const ParaMap> maps, const StackedVector& x, double tol = kFixedPointTolerance);

/// M is a paracontraction in ||.||_{2,2}: strict decrease for x not in F(M).
CheckReport check_M_pc_22(std::span<const ParaMap> maps, std::span<const StackedVector> samples,
                          std::span<const StackedVector> fixed);

/// M is quasi-nonexpansive in ||.||_{p,inf}; additionally (m >= 2) builds the
/// configuration x_1 not fixed, x_2 fixed and farther from y_2, and requires
/// ||M(x) - y||_{p,inf} = ||x - y||_{p,inf} to 1e-12.
CheckReport check_M_qne_pinf(std::span<const ParaMap> maps, std::span<const StackedVector> samples,
                             std::span<const StackedVector> fixed, NormIndex p, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Stochastic matrices

/// Doubly stochastic S with positive diagonal: ||Sx||_2 < ||x||_2 for
/// sampled x with Sx != x. Throws PreconditionError on a bad S.
CheckReport check_dbl_stochastic_pc(const Mat& S, std::span<const Vec> samples);

/// Positive stochastic S: ||(S kron I)x||_{p,inf} < ||x||_{p,inf} for
/// sampled x off the consensus set.
CheckReport check_S_I_pc_infty(const Mat& S, std::span<const StackedVector> samples, NormIndex p);

/// Stochastic S with some s_ik = 0 and F(S kron I) = C: the block vector
/// with 0 at k and a unit z elsewhere keeps its (p,inf)-norm exactly (to
/// 1e-15). Skipped (empty report with a note) if F(S kron I) != C or S is
/// positive.
CheckReport check_positive_stochastic_necessity(const Mat& S, std::size_t n, NormIndex p, std::mt19937_64& rng);

/// S kron I is quasi-nonexpansive in ||.||_{p,inf} for any stochastic S.
CheckReport check_S_I_qne_pinf(const Mat& S, std::span<const StackedVector> samples, NormIndex p);

// ---------------------------------------------------------------------------
// v-sequences and composed maps

/// v_i(t+1) = sum_j s_ij(t+1) M_j(v_j(t)), t = 0..q-1.
struct VSequence {
  std::vector<StochasticMatrix> steps;  // S(1)..S(q)
  std::vector<ParaMap> maps;
  Vec y_star;                       // common fixed point
  std::vector<StackedVector> v;     // v(0)..v(q)

  std::size_t q() const noexcept { return steps.size(); }
};

VSequence make_v_sequence(std::vector<ParaMap> maps, std::vector<StochasticMatrix> steps, StackedVector v0, Vec y_star);

/// ((S(q) kron I) M o ... o (S(1) kron I) M)(x).
StackedVector apply_composed(std::span<const ParaMap> maps, std::span<const StochasticMatrix> steps,
                             const StackedVector& x);

/// ||v_i(t) - y*|| <= sum_j phi_ij(t, tau) ||v_j(tau) - y*|| + 1e-10 for all i
/// and 0 <= tau <= t <= q; the case tau = t must hold with equality.
CheckReport check_v_inequality(const VSequence& vs, NormIndex p);

/// The inequality at (q, 0) for every i; the strict form when some
/// phi_ij(q, t) > 0 meets a non-fixed v_j(t); and the linear identity
/// v_i(q) = sum_p phi_ip(q, 0) v_p(0) (to 1e-10) when every such v_j(t) is
/// fixed.
CheckReport check_phi_inequality(const VSequence& vs, NormIndex p);

/// Composed map over S(1..q) with a positive product: strict
/// (p,inf)-decrease toward the stacked y* for non-fixed samples, and its
/// fixed points are consensus vectors of common fixed points. Throws
/// PreconditionError if the product is not positive.
CheckReport check_composed_map_pc(std::span<const ParaMap> maps, std::span<const StochasticMatrix> steps,
                                  std::span<const StackedVector> samples, const Vec& y_star, NormIndex p);

/// F(composed map) = F(M) n C when the product graph is strongly connected.
/// Throws PreconditionError otherwise.
CheckReport check_class_lemma(std::span<const ParaMap> maps, std::span<const StochasticMatrix> steps,
                              std::span<const StackedVector> samples, const Vec& y_star);

/// Locates a fixed point of the composed map by damped iteration
/// x <- (x + T(x)) / 2 until ||T(x) - x||_inf <= 1e-10 (at most 1e5 steps).
StackedVector find_composed_fixed_point(std::span<const ParaMap> maps, std::span<const StochasticMatrix> steps,
                                        StackedVector x);

// ---------------------------------------------------------------------------
// Trajectories

/// ||x(t+1) - x*|| <= ||xbar(t) - x*|| <= ||x(t) - x*|| (each within 1e-12) in
/// ||.||_{p,inf} at every recorded step.
CheckReport check_fejer_chain(const Trace& trace, const StackedVector& x_star, NormIndex p);

/// ||x(t) - x*|| <= ||xbar(rho_k) - x*|| + 1e-12 for all t > rho_k, rho_k
/// ranging over the z-subsequence times.
CheckReport check_subsequence_lemma(const Trace& trace, std::size_t l, std::size_t rho0, std::size_t q,
                                    const StackedVector& x_star, NormIndex p);

/// The rooted-but-not-strongly-connected two-agent example: projectors onto
/// {x_1 <= 1} and {x_1 >= 0} in R^2, arc 1 -> 2 only, weights s11 = 1,
/// s21 = s22 = 1/2.
Scenario counterexample_scenario(bool reverse_arc = false, bool start_in_intersection = false,
                                 std::size_t horizon = 1000);

/// Agent 1 stays put (to 1e-12) and keeps its distance to the second set for
/// all steps, the run never converges; then the control (start in the
/// intersection) and contrast (reverse arc added) runs converge.
CheckReport check_counterexample();

// ---------------------------------------------------------------------------
// Graph algebra

/// gamma(A2 A1) == compose_graphs(gamma(A1), gamma(A2)) on random pairs.
CheckReport check_graph_homomorphism(std::size_t trials, std::size_t m_max, std::mt19937_64& rng);

/// The composition of m - 1 self-arced strongly connected graphs is complete.
/// Exhaustive for m <= exhaustive_m_max: every composition of k such graphs
/// is generated layer by layer (deduplicated), so all ordered (m-1)-tuples are
/// covered. Random tuples for m in (exhaustive_m_max, random_m_max].
CheckReport check_graph_composition_complete(std::size_t exhaustive_m_max, std::size_t random_m_max,
                                             std::size_t random_trials, std::mt19937_64& rng);

// ---------------------------------------------------------------------------
// Regression scenarios

/// Distributed solve of a random consistent 4x4 system (unique solution),
/// rows split 2/1/1 over three agents. Constant complete graph, or the
/// periodic schedule 1->2, 2->3, 3->1 (one arc plus self-arcs per step).
struct LinearCase {
  Scenario scenario;
  gen::LinearSystem system;
};
LinearCase linear_equation_case(bool time_varying, std::uint64_t seed = kDefaultSeed);

// ---------------------------------------------------------------------------
// Suite

struct SuiteEntry {
  std::string name;
  std::string summary;
  std::function<CheckReport(std::uint64_t seed)> run;
};

/// Every check with its default instance.
const std::vector<SuiteEntry>& default_suite();

/// Runs the named checks ("all" expands to every entry). Throws
/// InvalidInput on an unknown name.
std::vector<CheckReport> run_suite(std::span<const std::string> names, std::uint64_t seed);

/// One block per report: name, trials, verdict, worst margin, violations.
void write_report_text(std::ostream& os, std::span<const CheckReport> reports);
/// CSV `check,trials,violations,worst_margin`.
void write_report_csv(std::ostream& os, std::span<const CheckReport> reports);

}  // namespace paracon
