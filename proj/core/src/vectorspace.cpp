#include "paracon/vectorspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "paracon/errors.hpp"

namespace paracon {

NormIndex NormIndex::finite(double p) {
  if (!std::isfinite(p) || !(p > 1.0)) {
    std::ostringstream os;
    os << "norm exponent must satisfy 1 < p < inf, got " << p;
    throw InvalidInput(os.str());
  }
  return NormIndex(p, false);
}

double NormIndex::value() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : p_;
}

std::string NormIndex::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os << p_;
  return os.str();
}

void require_finite(const Eigen::Ref<const Vec>& x, const char* what) {
  if (!x.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entry");
}

StackedVector::StackedVector(std::size_t agents, std::size_t dimension)
    : agents_(agents), dimension_(dimension),
      flat_(Vec::Zero(static_cast<Eigen::Index>(agents * dimension))) {
  if (agents == 0 || dimension == 0) throw InvalidInput("stacked vector needs m >= 1 and n >= 1");
}

StackedVector::StackedVector(std::size_t agents, std::size_t dimension, Vec flat)
    : agents_(agents), dimension_(dimension), flat_(std::move(flat)) {
  if (agents == 0 || dimension == 0) throw InvalidInput("stacked vector needs m >= 1 and n >= 1");
  if (static_cast<std::size_t>(flat_.size()) != agents * dimension)
    throw DimensionMismatch("stacked vector: flat length is not m*n");
}

StackedVector StackedVector::from_blocks(std::span<const Vec> blocks) {
  if (blocks.empty()) throw InvalidInput("stacked vector needs at least one block");
  const auto n = static_cast<std::size_t>(blocks.front().size());
  StackedVector out(blocks.size(), n);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (static_cast<std::size_t>(blocks[i].size()) != n)
      throw DimensionMismatch("stacked vector: blocks differ in dimension");
    out.block(i) = blocks[i];
  }
  return out;
}

StackedVector StackedVector::replicate(const Vec& y, std::size_t agents) {
  StackedVector out(agents, static_cast<std::size_t>(y.size()));
  for (std::size_t i = 0; i < agents; ++i) out.block(i) = y;
  return out;
}

std::vector<Vec> StackedVector::blocks() const {
  std::vector<Vec> out;
  out.reserve(agents_);
  for (std::size_t i = 0; i < agents_; ++i) out.emplace_back(block(i));
  return out;
}

double p_norm(const Eigen::Ref<const Vec>& x, NormIndex p) {
  require_finite(x, "p_norm");
  if (x.size() == 0) return 0.0;
  const double scale = x.cwiseAbs().maxCoeff();
  if (p.is_infinite() || scale == 0.0) return scale;
  if (p.value() == 2.0) return x.norm();
  // Scale by the max modulus so that |x_i|^p neither overflows nor underflows.
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x[i]) / scale, p.value());
  return scale * std::pow(sum, 1.0 / p.value());
}

Vec block_norms(const StackedVector& x, NormIndex p) {
  Vec norms(static_cast<Eigen::Index>(x.agents()));
  for (std::size_t i = 0; i < x.agents(); ++i) norms[static_cast<Eigen::Index>(i)] = p_norm(x.block(i), p);
  return norms;
}

double mixed_norm(const StackedVector& x, MixedNormSpec spec) {
  return p_norm(block_norms(x, spec.p), spec.q);
}

bool minkowski_strictness_witness(const Vec& u, const Vec& v, NormIndex p) {
  if (p.is_infinite()) throw InvalidInput("minkowski strictness requires a finite p");
  if (u.size() != v.size()) throw DimensionMismatch("minkowski_strictness_witness: dimension mismatch");
  const Vec sum = u + v;
  return p_norm(sum, p) < p_norm(u, p) + p_norm(v, p) - kStrictTolerance;
}

}  // namespace paracon
