#include "paracon/convex_set.hpp"

#include <algorithm>
#include <cmath>

#include "paracon/errors.hpp"

namespace paracon {

class ConvexSet::Shape {
 public:
  virtual ~Shape() = default;
  virtual ConvexSetKind kind() const noexcept = 0;
  virtual Vec project(const Vec& x) const = 0;
  virtual double distance(const Vec& x) const { return (x - project(x)).norm(); }
  virtual bool contains(const Vec& x, double tol) const { return distance(x) <= tol; }

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(witness.size()); }
  Vec witness;
};

namespace {

void require_dimension(const Vec& x, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(x.size()) != n)
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(n) + ", got " +
                            std::to_string(x.size()));
}

class Halfspace final : public ConvexSet::Shape {
 public:
  Halfspace(Vec a, double c) : a_(std::move(a)), c_(c), a_sq_(a_.squaredNorm()) {
    witness = a_ * (c_ / a_sq_);
  }
  ConvexSetKind kind() const noexcept override { return ConvexSetKind::Halfspace; }
  Vec project(const Vec& x) const override {
    const double excess = a_.dot(x) - c_;
    if (excess <= 0.0) return x;
    return x - a_ * (excess / a_sq_);
  }
  double distance(const Vec& x) const override {
    return std::max(0.0, a_.dot(x) - c_) / std::sqrt(a_sq_);
  }

 private:
  Vec a_;
  double c_;
  double a_sq_;
};

class Ball final : public ConvexSet::Shape {
 public:
  Ball(Vec center, double radius) : center_(std::move(center)), radius_(radius) { witness = center_; }
  ConvexSetKind kind() const noexcept override { return ConvexSetKind::Ball; }
  Vec project(const Vec& x) const override {
    const Vec d = x - center_;
    const double r = d.norm();
    if (r <= radius_) return x;
    return center_ + d * (radius_ / r);
  }
  double distance(const Vec& x) const override { return std::max(0.0, (x - center_).norm() - radius_); }

 private:
  Vec center_;
  double radius_;
};

class Box final : public ConvexSet::Shape {
 public:
  Box(Vec lo, Vec hi) : lo_(std::move(lo)), hi_(std::move(hi)) { witness = lo_; }
  ConvexSetKind kind() const noexcept override { return ConvexSetKind::Box; }
  Vec project(const Vec& x) const override { return x.cwiseMax(lo_).cwiseMin(hi_); }

 private:
  Vec lo_;
  Vec hi_;
};

class Affine final : public ConvexSet::Shape {
 public:
  explicit Affine(AffineProjector proj) : proj_(std::move(proj)) { witness = proj_.least_norm_solution(); }
  ConvexSetKind kind() const noexcept override { return ConvexSetKind::AffineSubspace; }
  Vec project(const Vec& x) const override { return proj_.project(x); }
  double distance(const Vec& x) const override { return proj_.correction(proj_.A() * x - proj_.b()).norm(); }

 private:
  AffineProjector proj_;
};

class Intersection final : public ConvexSet::Shape {
 public:
  explicit Intersection(std::vector<ConvexSet> parts) : parts_(std::move(parts)) {}
  ConvexSetKind kind() const noexcept override { return ConvexSetKind::Intersection; }

  Vec project(const Vec& x) const override {
    if (contains_all(x, 0.0)) return x;
    // Dykstra's algorithm: converges to the projection, unlike plain
    // alternating projection which only finds some point of the intersection.
    constexpr int kMaxCycles = 200000;
    Vec current = x;
    std::vector<Vec> increments(parts_.size(), Vec::Zero(x.size()));
    for (int cycle = 0; cycle < kMaxCycles; ++cycle) {
      const Vec before = current;
      for (std::size_t k = 0; k < parts_.size(); ++k) {
        const Vec shifted = current + increments[k];
        current = parts_[k].project(shifted);
        increments[k] = shifted - current;
      }
      const double change = (current - before).lpNorm<Eigen::Infinity>();
      if (change <= 1e-15 * (1.0 + current.lpNorm<Eigen::Infinity>()) && contains_all(current, 1e-13)) break;
    }
    return current;
  }

  bool contains(const Vec& x, double tol) const override { return contains_all(x, tol); }

 private:
  bool contains_all(const Vec& x, double tol) const {
    return std::all_of(parts_.begin(), parts_.end(), [&](const ConvexSet& s) { return s.contains(x, tol); });
  }

  std::vector<ConvexSet> parts_;
};

}  // namespace

AffineProjector::AffineProjector(Mat A, Vec b) : A_(std::move(A)), b_(std::move(b)) {
  if (A_.rows() == 0 || A_.cols() == 0) throw InvalidInput("affine projector: empty matrix");
  if (A_.rows() != b_.size()) throw DimensionMismatch("affine projector: rows of A differ from length of b");
  if (!A_.allFinite() || !b_.allFinite()) throw InvalidInput("affine projector: non-finite entry");
  if (A_.rows() > A_.cols()) throw InvalidInput("affine projector: A has more rows than columns");
  Eigen::JacobiSVD<Mat> svd(A_);
  if (svd.singularValues().minCoeff() <= 1e-10)
    throw InvalidInput("affine projector: rows of A are not linearly independent");
  gram_.compute(A_ * A_.transpose());
  x0_ = A_.transpose() * gram_.solve(b_);
}

Vec AffineProjector::correction(const Vec& residual) const { return A_.transpose() * gram_.solve(residual); }

Vec AffineProjector::project(const Vec& x) const {
  require_dimension(x, dimension(), "affine projector");
  return x - correction(A_ * x - b_);
}

Mat AffineProjector::kernel_projector() const {
  const auto n = A_.cols();
  return Mat::Identity(n, n) - A_.transpose() * gram_.solve(A_);
}

ConvexSet ConvexSet::halfspace(Vec a, double c) {
  require_finite(a, "halfspace normal");
  if (!std::isfinite(c)) throw InvalidInput("halfspace offset is not finite");
  if (a.size() == 0 || a.squaredNorm() == 0.0) throw InvalidInput("halfspace normal must be nonzero");
  return ConvexSet(std::make_shared<Halfspace>(std::move(a), c));
}

ConvexSet ConvexSet::ball(Vec center, double radius) {
  require_finite(center, "ball center");
  if (center.size() == 0) throw InvalidInput("ball center is empty");
  if (!std::isfinite(radius) || radius < 0.0) throw InvalidInput("ball radius must be finite and >= 0");
  return ConvexSet(std::make_shared<Ball>(std::move(center), radius));
}

ConvexSet ConvexSet::box(Vec lo, Vec hi) {
  require_finite(lo, "box lower corner");
  require_finite(hi, "box upper corner");
  if (lo.size() == 0) throw InvalidInput("box is empty-dimensional");
  if (lo.size() != hi.size()) throw DimensionMismatch("box corners differ in dimension");
  if ((lo.array() > hi.array()).any()) throw InvalidInput("box requires lo <= hi");
  return ConvexSet(std::make_shared<Box>(std::move(lo), std::move(hi)));
}

ConvexSet ConvexSet::affine_subspace(Mat A, Vec b) {
  return ConvexSet(std::make_shared<Affine>(AffineProjector(std::move(A), std::move(b))));
}

ConvexSet ConvexSet::intersection(std::vector<ConvexSet> parts) {
  if (parts.empty()) throw InvalidInput("intersection of zero sets");
  const std::size_t n = parts.front().dimension();
  for (const auto& p : parts)
    if (p.dimension() != n) throw DimensionMismatch("intersection: parts differ in dimension");
  auto shape = std::make_shared<Intersection>(std::move(parts));
  shape->witness = shape->project(Vec::Zero(static_cast<Eigen::Index>(n)));
  if (!shape->contains(shape->witness, kFixedPointTolerance))
    throw InvalidInput("intersection: no common point found (sets appear disjoint)");
  return ConvexSet(std::move(shape));
}

ConvexSetKind ConvexSet::kind() const noexcept { return shape_->kind(); }
std::size_t ConvexSet::dimension() const noexcept { return shape_->dimension(); }

Vec ConvexSet::project(const Vec& x) const {
  require_dimension(x, dimension(), "convex set projection");
  return shape_->project(x);
}

bool ConvexSet::contains(const Vec& x, double tol) const {
  require_dimension(x, dimension(), "convex set membership");
  return shape_->contains(x, tol);
}

double ConvexSet::distance(const Vec& x) const {
  require_dimension(x, dimension(), "convex set distance");
  return shape_->distance(x);
}

const Vec& ConvexSet::witness() const noexcept { return shape_->witness; }

}  // namespace paracon
