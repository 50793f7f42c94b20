#pragma once

#include <cstddef>
#include <set>
#include <span>

#include "paracon/graphs.hpp"
#include "paracon/vectorspace.hpp"

namespace paracon {

/// Row-stochastic m x m matrix whose entries come from a declared finite set
/// of weights. Entries are compared against the set exactly (bitwise equal
/// doubles); weights are produced canonically (1.0 / d, or parsed once).
class StochasticMatrix {
 public:
  /// Throws InvalidInput if an entry is negative or non-finite, a row sum is
  /// off by more than 1e-12, or an entry is missing from weight_set.
  StochasticMatrix(Mat entries, std::set<double> weight_set);

  std::size_t size() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  const Mat& entries() const noexcept { return entries_; }
  const std::set<double>& weight_set() const noexcept { return weight_set_; }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Mat entries_;
  std::set<double> weight_set_;
};

/// s_ij = 1 / |N_i| for j in N_i, else 0. Throws InvalidInput when a
/// self-arc is missing.
StochasticMatrix stochastic_from_graph(const DirectedGraph& g);

/// Weighted averaging: weights(i, j) must be positive exactly on arcs j -> i
/// and each row must sum to 1 within 1e-12.
StochasticMatrix stochastic_from_weights(const DirectedGraph& g, const Mat& weights);

/// (S kron I) x: block i of the result is sum_j s_ij x_j.
StackedVector apply_kron(const StochasticMatrix& S, const StackedVector& x);
StackedVector apply_kron(const Mat& S, const StackedVector& x);

/// Phi(t, tau) = S(t) S(t-1) ... S(tau+1), with Phi(t, t) = I.
struct TransitionProduct {
  std::size_t tau;
  std::size_t t;
  Mat matrix;
};

/// `steps[k]` holds S(k + 1). Requires 0 <= tau <= t <= steps.size();
/// throws std::out_of_range otherwise.
TransitionProduct phi_product(std::span<const StochasticMatrix> steps, std::size_t tau, std::size_t t);

bool is_positive_matrix(const Mat& A);
bool is_doubly_stochastic(const Mat& S, double tol = 1e-12);
bool has_positive_diagonal(const Mat& S);
bool is_row_stochastic(const Mat& S, double tol = 1e-12);

/// True iff { x : Sx = x } is exactly span{1}: rank(S - I) = m - 1 with a
/// singular-value threshold of 1e-10.
bool consensus_fixed_set_check(const Mat& S);

/// Kronecker product S kron I_n, materialized. Test and oracle use only.
Mat kron_identity(const Mat& S, std::size_t n);

}  // namespace paracon
