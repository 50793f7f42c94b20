#include "paracon/matrices.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "paracon/errors.hpp"

namespace paracon {

namespace {

void require_row_sums(const Mat& S) {
  for (Eigen::Index i = 0; i < S.rows(); ++i) {
    const double sum = S.row(i).sum();
    if (std::abs(sum - 1.0) > 1e-12)
      throw InvalidInput("stochastic matrix: row " + std::to_string(i) + " sums to " + std::to_string(sum));
  }
}

}  // namespace

StochasticMatrix::StochasticMatrix(Mat entries, std::set<double> weight_set)
    : entries_(std::move(entries)), weight_set_(std::move(weight_set)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
    throw InvalidInput("stochastic matrix: must be square and nonempty");
  weight_set_.insert(0.0);
  for (Eigen::Index i = 0; i < entries_.rows(); ++i)
    for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
      const double v = entries_(i, j);
      if (!std::isfinite(v) || v < 0.0) throw InvalidInput("stochastic matrix: entries must be finite and nonnegative");
      if (!weight_set_.contains(v)) throw InvalidInput("stochastic matrix: entry outside the declared weight set");
    }
  require_row_sums(entries_);
}

StochasticMatrix stochastic_from_graph(const DirectedGraph& g) {
  const std::size_t m = g.vertex_count();
  if (!g.has_all_self_arcs()) throw InvalidInput("stochastic_from_graph: neighbor graph is missing a self-arc");
  std::set<double> weights{0.0};
  for (std::size_t d = 1; d <= m; ++d) weights.insert(1.0 / static_cast<double>(d));
  Mat S = Mat::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const auto nbrs = g.neighbors_of(i);
    const double w = 1.0 / static_cast<double>(nbrs.size());
    for (std::size_t j : nbrs) S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = w;
  }
  return StochasticMatrix(std::move(S), std::move(weights));
}

StochasticMatrix stochastic_from_weights(const DirectedGraph& g, const Mat& weights) {
  const auto m = static_cast<Eigen::Index>(g.vertex_count());
  if (weights.rows() != m || weights.cols() != m) throw DimensionMismatch("stochastic_from_weights: shape mismatch");
  std::set<double> values{0.0};
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) {
      const double w = weights(i, j);
      const bool arc = g.has_arc(static_cast<std::size_t>(j), static_cast<std::size_t>(i));
      if (!std::isfinite(w) || w < 0.0) throw InvalidInput("stochastic_from_weights: weights must be finite and >= 0");
      if (arc && w == 0.0)
        throw InvalidInput("stochastic_from_weights: zero weight on arc " + std::to_string(j + 1) + "->" +
                           std::to_string(i + 1));
      if (!arc && w > 0.0)
        throw InvalidInput("stochastic_from_weights: positive weight on non-arc " + std::to_string(j + 1) + "->" +
                           std::to_string(i + 1));
      values.insert(w);
    }
  return StochasticMatrix(weights, std::move(values));
}

StackedVector apply_kron(const Mat& S, const StackedVector& x) {
  const std::size_t m = x.agents();
  if (static_cast<std::size_t>(S.rows()) != m || S.rows() != S.cols())
    throw DimensionMismatch("apply_kron: matrix size differs from the number of blocks");
  StackedVector out(m, x.dimension());
  for (std::size_t i = 0; i < m; ++i) {
    auto dst = out.block(i);
    for (std::size_t j = 0; j < m; ++j) {
      const double s = S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (s != 0.0) dst += s * x.block(j);
    }
  }
  return out;
}

StackedVector apply_kron(const StochasticMatrix& S, const StackedVector& x) { return apply_kron(S.entries(), x); }

TransitionProduct phi_product(std::span<const StochasticMatrix> steps, std::size_t tau, std::size_t t) {
  if (tau > t || t > steps.size())
    throw std::out_of_range("phi_product: need 0 <= tau <= t <= " + std::to_string(steps.size()));
  const auto m = steps.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(steps.front().size());
  if (steps.empty()) throw std::out_of_range("phi_product: empty schedule");
  Mat phi = Mat::Identity(m, m);
  // Left-multiply: Phi(s, tau) = S(s) Phi(s - 1, tau).
  for (std::size_t s = tau + 1; s <= t; ++s) phi = steps[s - 1].entries() * phi;
  return {tau, t, std::move(phi)};
}

bool is_positive_matrix(const Mat& A) { return (A.array() > 0.0).all(); }

bool is_row_stochastic(const Mat& S, double tol) {
  if (S.rows() != S.cols() || (S.array() < 0.0).any()) return false;
  return ((S.rowwise().sum().array() - 1.0).abs() <= tol).all();
}

bool is_doubly_stochastic(const Mat& S, double tol) {
  return is_row_stochastic(S, tol) && ((S.colwise().sum().array() - 1.0).abs() <= tol).all();
}

bool has_positive_diagonal(const Mat& S) { return (S.diagonal().array() > 0.0).all(); }

bool consensus_fixed_set_check(const Mat& S) {
  const auto m = S.rows();
  Eigen::JacobiSVD<Mat> svd(S - Mat::Identity(m, m));
  const Vec& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv[k] > 1e-10) ++rank;
  return rank == m - 1;
}

Mat kron_identity(const Mat& S, std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n);
  Mat K = Mat::Zero(S.rows() * nn, S.cols() * nn);
  for (Eigen::Index i = 0; i < S.rows(); ++i)
    for (Eigen::Index j = 0; j < S.cols(); ++j) K.block(i * nn, j * nn, nn, nn) = S(i, j) * Mat::Identity(nn, nn);
  return K;
}

}  // namespace paracon
