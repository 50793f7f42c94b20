#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace paracon {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Margin a "strict" inequality must clear before it counts as strict.
inline constexpr double kStrictTolerance = 1e-10;
/// Absolute tolerance for fixed-point membership.
inline constexpr double kFixedPointTolerance = 1e-9;

/// Exponent of a p-norm: a finite real strictly greater than one, or infinity.
class NormIndex {
 public:
  /// Throws InvalidInput unless 1 < p < inf.
  static NormIndex finite(double p);
  static NormIndex infinity() noexcept { return NormIndex(0.0, true); }

  bool is_infinite() const noexcept { return infinite_; }
  /// The exponent; +inf for the max-norm.
  double value() const noexcept;
  std::string to_string() const;

  friend bool operator==(const NormIndex&, const NormIndex&) = default;

 private:
  NormIndex(double p, bool inf) : p_(p), infinite_(inf) {}
  double p_;
  bool infinite_;
};

struct MixedNormSpec {
  NormIndex p;  // inner, applied to each block
  NormIndex q;  // outer, applied to the vector of block norms
};

/// x in R^{mn} viewed as m consecutive blocks of length n.
class StackedVector {
 public:
  StackedVector() = default;
  /// m zero blocks of dimension n.
  StackedVector(std::size_t agents, std::size_t dimension);
  StackedVector(std::size_t agents, std::size_t dimension, Vec flat);

  static StackedVector from_blocks(std::span<const Vec> blocks);
  /// m copies of y (a point of the consensus set).
  static StackedVector replicate(const Vec& y, std::size_t agents);

  std::size_t agents() const noexcept { return agents_; }
  std::size_t dimension() const noexcept { return dimension_; }

  auto block(std::size_t i) { return flat_.segment(static_cast<Eigen::Index>(i * dimension_), static_cast<Eigen::Index>(dimension_)); }
  auto block(std::size_t i) const { return flat_.segment(static_cast<Eigen::Index>(i * dimension_), static_cast<Eigen::Index>(dimension_)); }

  const Vec& flat() const noexcept { return flat_; }
  Vec& flat() noexcept { return flat_; }

  std::vector<Vec> blocks() const;

  bool same_shape(const StackedVector& other) const noexcept {
    return agents_ == other.agents_ && dimension_ == other.dimension_;
  }

  friend bool operator==(const StackedVector& a, const StackedVector& b) {
    return a.same_shape(b) && a.flat_ == b.flat_;
  }

 private:
  std::size_t agents_ = 0;
  std::size_t dimension_ = 0;
  Vec flat_;
};

/// (sum |x_i|^p)^(1/p), or max |x_i|. Throws InvalidInput on non-finite entries.
double p_norm(const Eigen::Ref<const Vec>& x, NormIndex p);

/// q-norm of the vector of block p-norms.
double mixed_norm(const StackedVector& x, MixedNormSpec spec);

/// Vector of block p-norms (the inner stage of mixed_norm).
Vec block_norms(const StackedVector& x, NormIndex p);

/// True iff ||u + v||_p < ||u||_p + ||v||_p - kStrictTolerance. Requires a
/// finite p; for 1 < p < inf this is the case exactly when u and v are not
/// nonnegative multiples of one another (up to the tolerance).
bool minkowski_strictness_witness(const Vec& u, const Vec& v, NormIndex p);

/// Throws InvalidInput if any entry is NaN or infinite.
void require_finite(const Eigen::Ref<const Vec>& x, const char* what);

}  // namespace paracon
