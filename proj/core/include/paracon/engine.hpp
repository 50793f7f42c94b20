#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "paracon/graphs.hpp"
#include "paracon/maps.hpp"
#include "paracon/matrices.hpp"
#include "paracon/vectorspace.hpp"

namespace paracon {

/// Everything needed to run x(t+1) = M((S(t) kron I) x(t)).
struct Scenario {
  std::vector<ParaMap> maps;  // M_1..M_m
  GraphSchedule schedule = GraphSchedule::constant(DirectedGraph::self_arcs(1));  // replaced by the caller
  /// Optional weight matrix per schedule pool graph; uniform 1/|N_i| when absent.
  std::optional<std::vector<Mat>> weights;
  StackedVector x0;
  std::size_t horizon = 10000;  // maximum number of steps
  double eps_consensus = 1e-8;
  double eps_residual = 1e-8;
  NormIndex norm = NormIndex::finite(2.0);
  /// A common fixed point of the maps, when known.
  std::optional<Vec> witness;

  std::size_t agents() const noexcept { return maps.size(); }
  std::size_t dimension() const noexcept { return maps.empty() ? 0 : maps.front().dimension(); }

  /// Throws InvalidInput / DimensionMismatch describing the first problem.
  void validate() const;
  /// One stochastic matrix per schedule pool graph.
  std::vector<StochasticMatrix> step_matrices() const;
};

/// Record for time t. xbar is absent on the final record (no step was taken
/// from it).
struct TraceStep {
  std::size_t t = 0;
  std::optional<std::size_t> graph;  // schedule pool index of N(t), with xbar
  StackedVector x;
  std::optional<StackedVector> xbar;
  double disagreement = 0.0;
  double residual = 0.0;
  std::optional<double> distance_to_witness;
};

struct Trace {
  std::vector<TraceStep> steps;  // steps[k] is time t = k + 1
  bool converged = false;

  std::size_t final_time() const noexcept { return steps.size(); }
  const TraceStep& at(std::size_t t) const;
  const StackedVector& final_state() const { return steps.back().x; }
};

/// Block i of the result is M_i(sum_j s_ij x_j).
StackedVector step(const StackedVector& x, const Mat& S, std::span<const ParaMap> maps);
StackedVector step(const StackedVector& x, const StochasticMatrix& S, std::span<const ParaMap> maps);

/// Agent-wise form: x_i(t+1) = M_i(sum over N_i of s_ij x_j), evaluated
/// neighbor by neighbor. Produces the same bits as step() for the same
/// matrix.
StackedVector step_agentwise(const StackedVector& x, const DirectedGraph& g, const Mat& S,
                             std::span<const ParaMap> maps);

/// max over pairs of ||x_i - x_j||_p.
double disagreement(const StackedVector& x, NormIndex p);
/// max over i of ||M_i(x_i) - x_i||_p.
double residual(const StackedVector& x, std::span<const ParaMap> maps, NormIndex p);

/// Runs from x(1) = x0 until disagreement <= eps_consensus and residual <=
/// eps_residual, or until `horizon` steps have been taken. Throws
/// std::out_of_range if the schedule ends before the horizon.
Trace run(const Scenario& scenario);

/// z(k) = xbar((k - 1) q l + rho0 - 1) for k = 2, 3, ... while recorded.
/// Throws InvalidInput on zero parameters and std::out_of_range if not even
/// z(2) is available.
std::vector<StackedVector> extract_z_subsequence(const Trace& trace, std::size_t l, std::size_t rho0, std::size_t q);
/// The trace times t whose xbar(t) forms the z subsequence.
std::vector<std::size_t> z_subsequence_times(const Trace& trace, std::size_t l, std::size_t rho0, std::size_t q);

/// CSV `t,agent,component,value,xbar_value`; agent and component 1-based.
void write_trace_csv(std::ostream& os, const Trace& trace);
/// CSV `t,disagreement,residual,distance_to_witness`.
void write_metrics_csv(std::ostream& os, const Trace& trace);
/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

}  // namespace paracon
