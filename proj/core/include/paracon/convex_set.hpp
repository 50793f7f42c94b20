#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "paracon/vectorspace.hpp"

namespace paracon {

enum class ConvexSetKind { Halfspace, Ball, Box, AffineSubspace, Intersection };

/// Nonempty closed convex subset of R^n with a Euclidean projector.
///
/// Every set carries a witness point found at construction, so an empty set
/// can never be built. Values are immutable and cheap to copy.
class ConvexSet {
 public:
  /// { x : a'x <= c }, a != 0.
  static ConvexSet halfspace(Vec a, double c);
  static ConvexSet ball(Vec center, double radius);
  /// { x : lo <= x <= hi } componentwise; requires lo <= hi.
  static ConvexSet box(Vec lo, Vec hi);
  /// { x : Ax = b } with A of full row rank.
  static ConvexSet affine_subspace(Mat A, Vec b);
  /// Intersection of sets of a common dimension; projected onto with
  /// Dykstra's alternating projection. Throws InvalidInput if no common
  /// point is found.
  static ConvexSet intersection(std::vector<ConvexSet> parts);

  ConvexSetKind kind() const noexcept;
  std::size_t dimension() const noexcept;

  /// argmin_{y in C} ||x - y||_2
  Vec project(const Vec& x) const;
  /// Membership up to an absolute tolerance on the constraint violation.
  bool contains(const Vec& x, double tol = kFixedPointTolerance) const;
  /// Euclidean distance from x to the set.
  double distance(const Vec& x) const;
  const Vec& witness() const noexcept;

  class Shape;

 private:
  explicit ConvexSet(std::shared_ptr<const Shape> shape) : shape_(std::move(shape)) {}
  std::shared_ptr<const Shape> shape_;
};

/// Precomputed projector onto { x : Ax = b }; shared by ConvexSet and the
/// affine linear-equation map.
class AffineProjector {
 public:
  /// Throws InvalidInput when A is not of full row rank (smallest singular
  /// value <= 1e-10) or shapes disagree.
  AffineProjector(Mat A, Vec b);

  const Mat& A() const noexcept { return A_; }
  const Vec& b() const noexcept { return b_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(A_.cols()); }

  /// x - A'(AA')^{-1}(Ax - b)
  Vec project(const Vec& x) const;
  /// A'(AA')^{-1} r, the displacement that project() subtracts.
  Vec correction(const Vec& residual) const;
  /// I - A'(AA')^{-1}A
  Mat kernel_projector() const;
  /// Minimum-norm solution of Ax = b.
  const Vec& least_norm_solution() const noexcept { return x0_; }

 private:
  Mat A_;
  Vec b_;
  Eigen::LDLT<Mat> gram_;
  Vec x0_;
};

}  // namespace paracon
