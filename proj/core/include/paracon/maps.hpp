#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "paracon/convex_set.hpp"
#include "paracon/vectorspace.hpp"

namespace paracon {

enum class MapKind { AffineLinearSolve, Projector, GradientDescent, Proximal, Averaged, Composite, Linear };

std::string to_string(MapKind kind);

/// f(x) = 1/2 x'Qx + c'x with Q symmetric positive semidefinite.
struct QuadraticObjective {
  Mat Q;
  Vec c;
};

/// Closed proper convex function with a closed-form proximal operator.
class ProxFunction {
 public:
  enum class Kind { Indicator, Quadratic, WeightedL1 };

  static ProxFunction indicator(ConvexSet set);
  static ProxFunction quadratic(QuadraticObjective f);
  /// w * ||x||_1, w >= 0.
  static ProxFunction weighted_l1(std::size_t dimension, double weight);

  Kind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  const std::shared_ptr<const ConvexSet>& set() const noexcept { return set_; }
  const QuadraticObjective& objective() const noexcept { return objective_; }
  double weight() const noexcept { return weight_; }

 private:
  ProxFunction() = default;
  Kind kind_ = Kind::WeightedL1;
  std::size_t dimension_ = 0;
  std::shared_ptr<const ConvexSet> set_;
  QuadraticObjective objective_;
  double weight_ = 0.0;
};

/// The map N inside an averaged map alpha*N + (1 - alpha)*I. Each option is
/// nonexpansive in the Euclidean norm.
class NonexpansiveMap {
 public:
  enum class Kind { Identity, Reflection, Linear };

  static NonexpansiveMap identity(std::size_t dimension);
  /// 2 P_C - I
  static NonexpansiveMap reflection(ConvexSet set);
  /// x -> Qx with ||Q||_2 <= 1 (checked).
  static NonexpansiveMap linear(Mat Q);

  Kind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  Vec apply(const Vec& x) const;
  const std::shared_ptr<const ConvexSet>& set() const noexcept { return set_; }
  const Mat& matrix() const noexcept { return matrix_; }

 private:
  NonexpansiveMap() = default;
  Kind kind_ = Kind::Identity;
  std::size_t dimension_ = 0;
  std::shared_ptr<const ConvexSet> set_;
  Mat matrix_;
};

/// A continuous map R^n -> R^n with an analytic fixed-point oracle.
///
/// The oracle (in_fixed_set) is declared per kind from the map's parameters,
/// never by evaluating the map, so property checkers can use it as ground
/// truth. Every map also carries one known fixed point (witness()).
class ParaMap {
 public:
  /// x -> x - A'(AA')^{-1}(Ax - b); A must have linearly independent rows.
  static ParaMap affine_linear_solve(Mat A, Vec b);
  static ParaMap projector(ConvexSet set);
  /// x -> x - step * grad f(x); requires lipschitz >= lambda_max(Q) and
  /// 0 < step < 2 / lipschitz, and that f has a minimizer.
  static ParaMap gradient_descent(QuadraticObjective f, double step, double lipschitz);
  /// x -> argmin_y f(y) + 1/2 ||x - y||_2^2
  static ParaMap proximal(ProxFunction f);
  /// x -> alpha N(x) + (1 - alpha) x, 0 < alpha < 1.
  static ParaMap averaged(NonexpansiveMap inner, double alpha);
  /// x -> Px. The contraction norm is declared by the caller.
  static ParaMap linear(Mat P, NormIndex norm = NormIndex::finite(2.0));

  MapKind kind() const noexcept;
  std::size_t dimension() const noexcept;
  /// Norm in which the map is a paracontraction.
  NormIndex contraction_norm() const noexcept;

  /// Throws DimensionMismatch on a wrong-sized x.
  Vec operator()(const Vec& x) const;

  /// Analytic membership of x in F(M), up to tol.
  bool in_fixed_set(const Vec& x, double tol = kFixedPointTolerance) const;
  /// A point of F(M).
  const Vec& witness() const noexcept;

  /// Members of a composite (outermost first); empty otherwise.
  std::span<const ParaMap> members() const noexcept;

  class Impl;

 private:
  friend ParaMap compose(std::vector<ParaMap> maps, Vec common_fixed_point);
  explicit ParaMap(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// maps[0] o maps[1] o ... o maps[k-1] (the last map is applied first).
/// The caller supplies a common fixed point of all members; throws
/// PreconditionError if it is not fixed by every member.
ParaMap compose(std::vector<ParaMap> maps, Vec common_fixed_point);

inline Vec eval(const ParaMap& map, const Vec& x) { return map(x); }

/// ||M(x) - x||_p <= tol in the map's contraction norm.
bool is_fixed_point(const ParaMap& map, const Vec& x, double tol = kFixedPointTolerance);

struct PropertyViolation {
  Vec x;
  Vec y;
  double lhs = 0.0;  // ||M(x) - y||
  double rhs = 0.0;  // ||x - y||
};

struct PropertyReport {
  std::size_t pairs_checked = 0;
  std::size_t pairs_vacuous = 0;  // x already fixed: nothing to check
  double worst_margin = 0.0;      // min over checked pairs of rhs - lhs
  std::vector<PropertyViolation> violations;

  bool passed() const noexcept { return violations.empty(); }
};

/// Strict decrease ||M(x) - y||_p < ||x - y||_p - kStrictTolerance for every
/// sampled non-fixed x and every y. Throws PreconditionError if some y is not
/// fixed (at kFixedPointTolerance).
PropertyReport check_paracontraction(const ParaMap& map, std::span<const Vec> x_samples,
                                     std::span<const Vec> y_fixed, NormIndex p);

/// Non-strict version, with 1e-12 relative slack.
PropertyReport check_quasi_nonexpansive(const ParaMap& map, std::span<const Vec> x_samples,
                                        std::span<const Vec> y_fixed, NormIndex p);

/// Whether alpha*x1 + (1 - alpha)*x2 is a fixed point, for fixed x1, x2.
bool fixed_set_closed_convex_probe(const ParaMap& map, const Vec& x1, const Vec& x2, double alpha);

/// Uniform samples from the Euclidean ball of the given radius.
std::vector<Vec> sample_ball(const Vec& center, double radius, std::size_t count, std::mt19937_64& rng);

inline constexpr std::uint64_t kDefaultSeed = 42;
inline constexpr double kDefaultSampleRadius = 10.0;

}  // namespace paracon
