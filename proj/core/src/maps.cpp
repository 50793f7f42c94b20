#include "paracon/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "paracon/errors.hpp"

namespace paracon {

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::AffineLinearSolve: return "affine_linear_solve";
    case MapKind::Projector: return "projector";
    case MapKind::GradientDescent: return "gradient_descent";
    case MapKind::Proximal: return "proximal";
    case MapKind::Averaged: return "averaged";
    case MapKind::Composite: return "composite";
    case MapKind::Linear: return "linear";
  }
  return "unknown";
}

namespace {

void require_dimension(const Vec& x, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(x.size()) != n)
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(n) + ", got " +
                            std::to_string(x.size()));
}

void validate_quadratic(const QuadraticObjective& f) {
  if (f.Q.rows() == 0 || f.Q.rows() != f.Q.cols()) throw InvalidInput("quadratic objective: Q must be square");
  if (f.c.size() != f.Q.rows()) throw DimensionMismatch("quadratic objective: c does not match Q");
  if (!f.Q.allFinite() || !f.c.allFinite()) throw InvalidInput("quadratic objective: non-finite entry");
  const double scale = std::max(1.0, f.Q.cwiseAbs().maxCoeff());
  if ((f.Q - f.Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidInput("quadratic objective: Q is not symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> eig(f.Q, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12 * scale)
    throw InvalidInput("quadratic objective: Q is not positive semidefinite");
}

double largest_eigenvalue(const Mat& Q) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(Q, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

/// A minimizer of 1/2 x'Qx + c'x, i.e. a solution of Qx = -c.
Vec quadratic_minimizer(const QuadraticObjective& f) {
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(f.Q);
  Vec x = cod.solve(Vec(-f.c));
  if ((f.Q * x + f.c).norm() > 1e-9 * (1.0 + f.c.norm()))
    throw InvalidInput("quadratic objective has no minimizer (c is not in the range of Q)");
  return x;
}

/// Orthonormal basis of { x : Px = x }.
Mat fixed_subspace_basis(const Mat& P) {
  const auto n = P.rows();
  const Mat D = P - Mat::Identity(n, n);
  Eigen::JacobiSVD<Mat> svd(D, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  const double threshold = 1e-10 * std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv[rank] > threshold) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

double distance_to_subspace(const Mat& basis, const Vec& x) {
  if (basis.cols() == 0) return x.norm();
  return (x - basis * (basis.transpose() * x)).norm();
}

double spectral_norm(const Mat& A) {
  Eigen::JacobiSVD<Mat> svd(A);
  return svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
}

/// Factor bounding ||v||_p by ||v||_2 in dimension n.
double euclidean_to_p_factor(NormIndex p, std::size_t n) {
  if (p.is_infinite() || p.value() >= 2.0) return 1.0;
  return std::pow(static_cast<double>(n), 1.0 / p.value() - 0.5);
}

}  // namespace

class ParaMap::Impl {
 public:
  virtual ~Impl() = default;
  virtual MapKind kind() const noexcept = 0;
  virtual Vec apply(const Vec& x) const = 0;
  virtual bool fixed(const Vec& x, double tol) const = 0;
  virtual std::span<const ParaMap> members() const noexcept { return {}; }

  std::size_t dimension = 0;
  NormIndex norm = NormIndex::finite(2.0);
  Vec witness;
};

namespace {

class AffineSolveImpl final : public ParaMap::Impl {
 public:
  explicit AffineSolveImpl(AffineProjector proj) : proj_(std::move(proj)) {
    dimension = proj_.dimension();
    witness = proj_.least_norm_solution();
  }
  MapKind kind() const noexcept override { return MapKind::AffineLinearSolve; }
  Vec apply(const Vec& x) const override { return proj_.project(x); }
  bool fixed(const Vec& x, double tol) const override {
    return proj_.correction(proj_.A() * x - proj_.b()).norm() <= tol;
  }

 private:
  AffineProjector proj_;
};

class ProjectorImpl final : public ParaMap::Impl {
 public:
  explicit ProjectorImpl(ConvexSet set) : set_(std::move(set)) {
    dimension = set_.dimension();
    witness = set_.witness();
  }
  MapKind kind() const noexcept override { return MapKind::Projector; }
  Vec apply(const Vec& x) const override { return set_.project(x); }
  bool fixed(const Vec& x, double tol) const override { return set_.contains(x, tol); }

 private:
  ConvexSet set_;
};

class GradientDescentImpl final : public ParaMap::Impl {
 public:
  GradientDescentImpl(QuadraticObjective f, double step) : f_(std::move(f)), step_(step) {
    dimension = static_cast<std::size_t>(f_.c.size());
    witness = quadratic_minimizer(f_);
  }
  MapKind kind() const noexcept override { return MapKind::GradientDescent; }
  Vec apply(const Vec& x) const override { return x - step_ * (f_.Q * x + f_.c); }
  bool fixed(const Vec& x, double tol) const override { return step_ * (f_.Q * x + f_.c).norm() <= tol; }

 private:
  QuadraticObjective f_;
  double step_;
};

class ProximalImpl final : public ParaMap::Impl {
 public:
  explicit ProximalImpl(ProxFunction f) : f_(std::move(f)) {
    dimension = f_.dimension();
    switch (f_.kind()) {
      case ProxFunction::Kind::Indicator:
        witness = f_.set()->witness();
        break;
      case ProxFunction::Kind::Quadratic: {
        const auto n = static_cast<Eigen::Index>(dimension);
        shifted_.compute(Mat::Identity(n, n) + f_.objective().Q);
        witness = quadratic_minimizer(f_.objective());
        break;
      }
      case ProxFunction::Kind::WeightedL1:
        witness = Vec::Zero(static_cast<Eigen::Index>(dimension));
        break;
    }
  }
  MapKind kind() const noexcept override { return MapKind::Proximal; }

  Vec apply(const Vec& x) const override {
    switch (f_.kind()) {
      case ProxFunction::Kind::Indicator:
        return f_.set()->project(x);
      case ProxFunction::Kind::Quadratic:
        return shifted_.solve(Vec(x - f_.objective().c));
      case ProxFunction::Kind::WeightedL1: {
        const double w = f_.weight();
        return x.unaryExpr([w](double v) { return std::copysign(std::max(std::abs(v) - w, 0.0), v); });
      }
    }
    return x;
  }

  bool fixed(const Vec& x, double tol) const override {
    switch (f_.kind()) {
      case ProxFunction::Kind::Indicator:
        return f_.set()->contains(x, tol);
      case ProxFunction::Kind::Quadratic:
        return (f_.objective().Q * x + f_.objective().c).norm() <= tol;
      case ProxFunction::Kind::WeightedL1:
        return f_.weight() == 0.0 || x.norm() <= tol;
    }
    return false;
  }

 private:
  ProxFunction f_;
  Eigen::LDLT<Mat> shifted_;
};

class AveragedImpl final : public ParaMap::Impl {
 public:
  AveragedImpl(NonexpansiveMap inner, double alpha) : inner_(std::move(inner)), alpha_(alpha) {
    dimension = inner_.dimension();
    const auto n = static_cast<Eigen::Index>(dimension);
    switch (inner_.kind()) {
      case NonexpansiveMap::Kind::Identity:
        witness = Vec::Zero(n);
        break;
      case NonexpansiveMap::Kind::Reflection:
        witness = inner_.set()->witness();
        break;
      case NonexpansiveMap::Kind::Linear:
        witness = Vec::Zero(n);
        fixed_basis_ = fixed_subspace_basis(inner_.matrix());
        displacement_gain_ = spectral_norm(inner_.matrix() - Mat::Identity(n, n));
        break;
    }
  }
  MapKind kind() const noexcept override { return MapKind::Averaged; }
  Vec apply(const Vec& x) const override { return alpha_ * inner_.apply(x) + (1.0 - alpha_) * x; }

  // F(alpha N + (1 - alpha) I) = F(N).
  bool fixed(const Vec& x, double tol) const override {
    switch (inner_.kind()) {
      case NonexpansiveMap::Kind::Identity:
        return true;
      case NonexpansiveMap::Kind::Reflection:
        return 2.0 * alpha_ * inner_.set()->distance(x) <= tol;
      case NonexpansiveMap::Kind::Linear:
        return alpha_ * displacement_gain_ * distance_to_subspace(fixed_basis_, x) <= tol;
    }
    return false;
  }

 private:
  NonexpansiveMap inner_;
  double alpha_;
  Mat fixed_basis_;
  double displacement_gain_ = 0.0;
};

class LinearImpl final : public ParaMap::Impl {
 public:
  explicit LinearImpl(Mat P) : P_(std::move(P)) {
    dimension = static_cast<std::size_t>(P_.rows());
    witness = Vec::Zero(P_.rows());
    fixed_basis_ = fixed_subspace_basis(P_);
    displacement_gain_ = spectral_norm(P_ - Mat::Identity(P_.rows(), P_.cols()));
  }
  MapKind kind() const noexcept override { return MapKind::Linear; }
  Vec apply(const Vec& x) const override { return P_ * x; }
  bool fixed(const Vec& x, double tol) const override {
    const double gain = displacement_gain_ * euclidean_to_p_factor(norm, dimension);
    return gain * distance_to_subspace(fixed_basis_, x) <= tol;
  }

 private:
  Mat P_;
  Mat fixed_basis_;
  double displacement_gain_ = 0.0;
};

class CompositeImpl final : public ParaMap::Impl {
 public:
  explicit CompositeImpl(std::vector<ParaMap> maps) : maps_(std::move(maps)) {}
  MapKind kind() const noexcept override { return MapKind::Composite; }
  Vec apply(const Vec& x) const override {
    Vec y = x;
    for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) y = (*it)(y);
    return y;
  }
  // F(P1 o P2) = F(P1) n F(P2) for paracontractions sharing a fixed point.
  bool fixed(const Vec& x, double tol) const override {
    return std::all_of(maps_.begin(), maps_.end(), [&](const ParaMap& m) { return m.in_fixed_set(x, tol); });
  }
  std::span<const ParaMap> members() const noexcept override { return maps_; }

 private:
  std::vector<ParaMap> maps_;
};

}  // namespace

ProxFunction ProxFunction::indicator(ConvexSet set) {
  ProxFunction f;
  f.kind_ = Kind::Indicator;
  f.dimension_ = set.dimension();
  f.set_ = std::make_shared<const ConvexSet>(std::move(set));
  return f;
}

ProxFunction ProxFunction::quadratic(QuadraticObjective objective) {
  validate_quadratic(objective);
  ProxFunction f;
  f.kind_ = Kind::Quadratic;
  f.dimension_ = static_cast<std::size_t>(objective.c.size());
  f.objective_ = std::move(objective);
  return f;
}

ProxFunction ProxFunction::weighted_l1(std::size_t dimension, double weight) {
  if (dimension == 0) throw InvalidInput("weighted l1: zero dimension");
  if (!std::isfinite(weight) || weight < 0.0) throw InvalidInput("weighted l1: weight must be finite and >= 0");
  ProxFunction f;
  f.kind_ = Kind::WeightedL1;
  f.dimension_ = dimension;
  f.weight_ = weight;
  return f;
}

NonexpansiveMap NonexpansiveMap::identity(std::size_t dimension) {
  if (dimension == 0) throw InvalidInput("identity map: zero dimension");
  NonexpansiveMap n;
  n.kind_ = Kind::Identity;
  n.dimension_ = dimension;
  return n;
}

NonexpansiveMap NonexpansiveMap::reflection(ConvexSet set) {
  NonexpansiveMap n;
  n.kind_ = Kind::Reflection;
  n.dimension_ = set.dimension();
  n.set_ = std::make_shared<const ConvexSet>(std::move(set));
  return n;
}

NonexpansiveMap NonexpansiveMap::linear(Mat Q) {
  if (Q.rows() == 0 || Q.rows() != Q.cols()) throw InvalidInput("linear nonexpansive map: matrix must be square");
  if (!Q.allFinite()) throw InvalidInput("linear nonexpansive map: non-finite entry");
  if (spectral_norm(Q) > 1.0 + 1e-12) throw InvalidInput("linear nonexpansive map: operator 2-norm exceeds 1");
  NonexpansiveMap n;
  n.kind_ = Kind::Linear;
  n.dimension_ = static_cast<std::size_t>(Q.rows());
  n.matrix_ = std::move(Q);
  return n;
}

Vec NonexpansiveMap::apply(const Vec& x) const {
  switch (kind_) {
    case Kind::Identity: return x;
    case Kind::Reflection: return 2.0 * set_->project(x) - x;
    case Kind::Linear: return matrix_ * x;
  }
  return x;
}

ParaMap ParaMap::affine_linear_solve(Mat A, Vec b) {
  return ParaMap(std::make_shared<AffineSolveImpl>(AffineProjector(std::move(A), std::move(b))));
}

ParaMap ParaMap::projector(ConvexSet set) { return ParaMap(std::make_shared<ProjectorImpl>(std::move(set))); }

ParaMap ParaMap::gradient_descent(QuadraticObjective f, double step, double lipschitz) {
  validate_quadratic(f);
  if (!std::isfinite(lipschitz) || lipschitz <= 0.0) throw InvalidInput("gradient descent: Lipschitz constant must be > 0");
  if (lipschitz < largest_eigenvalue(f.Q) * (1.0 - 1e-12))
    throw InvalidInput("gradient descent: Lipschitz constant below the largest eigenvalue of Q");
  if (!std::isfinite(step) || !(step > 0.0) || !(step < 2.0 / lipschitz))
    throw InvalidInput("gradient descent: step must satisfy 0 < step < 2/lipschitz");
  return ParaMap(std::make_shared<GradientDescentImpl>(std::move(f), step));
}

ParaMap ParaMap::proximal(ProxFunction f) { return ParaMap(std::make_shared<ProximalImpl>(std::move(f))); }

ParaMap ParaMap::averaged(NonexpansiveMap inner, double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 0.0) || !(alpha < 1.0))
    throw InvalidInput("averaged map: alpha must lie in (0, 1)");
  return ParaMap(std::make_shared<AveragedImpl>(std::move(inner), alpha));
}

ParaMap ParaMap::linear(Mat P, NormIndex norm) {
  if (P.rows() == 0 || P.rows() != P.cols()) throw InvalidInput("linear map: matrix must be square");
  if (!P.allFinite()) throw InvalidInput("linear map: non-finite entry");
  auto impl = std::make_shared<LinearImpl>(std::move(P));
  impl->norm = norm;
  return ParaMap(std::move(impl));
}

ParaMap compose(std::vector<ParaMap> maps, Vec common_fixed_point) {
  if (maps.empty()) throw InvalidInput("compose: no maps");
  const std::size_t n = maps.front().dimension();
  for (const auto& m : maps) {
    if (m.dimension() != n) throw DimensionMismatch("compose: maps differ in dimension");
    if (!(m.contraction_norm() == maps.front().contraction_norm()))
      throw InvalidInput("compose: maps are paracontractions in different norms");
  }
  if (common_fixed_point.size() == 0) throw PreconditionError("compose: missing common-fixed-point witness");
  require_dimension(common_fixed_point, n, "compose witness");
  for (const auto& m : maps)
    if (!is_fixed_point(m, common_fixed_point))
      throw PreconditionError("compose: witness is not a fixed point of every member");
  const NormIndex norm = maps.front().contraction_norm();
  auto impl = std::make_shared<CompositeImpl>(std::move(maps));
  impl->dimension = n;
  impl->norm = norm;
  impl->witness = std::move(common_fixed_point);
  return ParaMap(std::move(impl));
}

MapKind ParaMap::kind() const noexcept { return impl_->kind(); }
std::size_t ParaMap::dimension() const noexcept { return impl_->dimension; }
NormIndex ParaMap::contraction_norm() const noexcept { return impl_->norm; }
const Vec& ParaMap::witness() const noexcept { return impl_->witness; }
std::span<const ParaMap> ParaMap::members() const noexcept { return impl_->members(); }

Vec ParaMap::operator()(const Vec& x) const {
  require_dimension(x, impl_->dimension, "map evaluation");
  return impl_->apply(x);
}

bool ParaMap::in_fixed_set(const Vec& x, double tol) const {
  require_dimension(x, impl_->dimension, "fixed-point oracle");
  return impl_->fixed(x, tol);
}

bool is_fixed_point(const ParaMap& map, const Vec& x, double tol) {
  return p_norm(map(x) - x, map.contraction_norm()) <= tol;
}

namespace {

template <class Violates>
PropertyReport check_pairs(const ParaMap& map, std::span<const Vec> xs, std::span<const Vec> ys, NormIndex p,
                           Violates violates) {
  for (const auto& y : ys)
    if (!is_fixed_point(map, y, kFixedPointTolerance))
      throw PreconditionError("property check: a supplied y is not a fixed point of the map");
  PropertyReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& x : xs) {
    const Vec mx = map(x);
    if (p_norm(mx - x, map.contraction_norm()) <= kFixedPointTolerance) {
      report.pairs_vacuous += ys.size();
      continue;
    }
    for (const auto& y : ys) {
      const double lhs = p_norm(mx - y, p);
      const double rhs = p_norm(x - y, p);
      ++report.pairs_checked;
      report.worst_margin = std::min(report.worst_margin, rhs - lhs);
      if (violates(lhs, rhs)) report.violations.push_back({x, y, lhs, rhs});
    }
  }
  if (report.pairs_checked == 0) report.worst_margin = 0.0;
  return report;
}

}  // namespace

PropertyReport check_paracontraction(const ParaMap& map, std::span<const Vec> x_samples,
                                     std::span<const Vec> y_fixed, NormIndex p) {
  return check_pairs(map, x_samples, y_fixed, p,
                     [](double lhs, double rhs) { return !(lhs < rhs - kStrictTolerance); });
}

PropertyReport check_quasi_nonexpansive(const ParaMap& map, std::span<const Vec> x_samples,
                                        std::span<const Vec> y_fixed, NormIndex p) {
  // Fixed x are checked too: they give equality.
  for (const auto& y : y_fixed)
    if (!is_fixed_point(map, y, kFixedPointTolerance))
      throw PreconditionError("property check: a supplied y is not a fixed point of the map");
  PropertyReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (const auto& x : x_samples) {
    const Vec mx = map(x);
    for (const auto& y : y_fixed) {
      const double lhs = p_norm(mx - y, p);
      const double rhs = p_norm(x - y, p);
      ++report.pairs_checked;
      report.worst_margin = std::min(report.worst_margin, rhs - lhs);
      if (lhs > rhs + 1e-12 * std::max(1.0, rhs)) report.violations.push_back({x, y, lhs, rhs});
    }
  }
  if (report.pairs_checked == 0) report.worst_margin = 0.0;
  return report;
}

bool fixed_set_closed_convex_probe(const ParaMap& map, const Vec& x1, const Vec& x2, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidInput("closed-convex probe: alpha must lie in [0, 1]");
  if (!is_fixed_point(map, x1) || !is_fixed_point(map, x2))
    throw PreconditionError("closed-convex probe: endpoints must be fixed points");
  return is_fixed_point(map, alpha * x1 + (1.0 - alpha) * x2);
}

std::vector<Vec> sample_ball(const Vec& center, double radius, std::size_t count, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const auto n = center.size();
  std::vector<Vec> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Vec dir(n);
    for (Eigen::Index i = 0; i < n; ++i) dir[i] = normal(rng);
    const double len = dir.norm();
    if (len == 0.0) dir = Vec::Unit(n, 0); else dir /= len;
    const double r = radius * std::pow(uniform(rng), 1.0 / static_cast<double>(n));
    out.push_back(center + r * dir);
  }
  return out;
}

}  // namespace paracon
