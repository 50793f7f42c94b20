#include "paracon/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "paracon/errors.hpp"

namespace paracon {

void Scenario::validate() const {
  if (maps.empty()) throw InvalidInput("scenario: no agents");
  const std::size_t n = maps.front().dimension();
  for (std::size_t i = 0; i < maps.size(); ++i)
    if (maps[i].dimension() != n)
      throw DimensionMismatch("scenario: agent " + std::to_string(i + 1) + " map has dimension " +
                              std::to_string(maps[i].dimension()) + ", expected " + std::to_string(n));
  if (schedule.vertex_count() != maps.size())
    throw DimensionMismatch("scenario: graph schedule has " + std::to_string(schedule.vertex_count()) +
                            " vertices for " + std::to_string(maps.size()) + " agents");
  if (x0.agents() != maps.size() || x0.dimension() != n)
    throw DimensionMismatch("scenario: initial state shape does not match agents x dimension");
  require_finite(x0.flat(), "scenario initial state");
  if (weights && weights->size() != schedule.pool().size())
    throw InvalidInput("scenario: need one weight matrix per schedule graph");
  if (!(eps_consensus > 0.0) || !(eps_residual > 0.0)) throw InvalidInput("scenario: tolerances must be positive");
  if (witness && static_cast<std::size_t>(witness->size()) != n)
    throw DimensionMismatch("scenario: witness has the wrong dimension");
}

std::vector<StochasticMatrix> Scenario::step_matrices() const {
  std::vector<StochasticMatrix> out;
  const auto pool = schedule.pool();
  out.reserve(pool.size());
  for (std::size_t k = 0; k < pool.size(); ++k)
    out.push_back(weights ? stochastic_from_weights(pool[k], (*weights)[k]) : stochastic_from_graph(pool[k]));
  return out;
}

const TraceStep& Trace::at(std::size_t t) const {
  if (t == 0 || t > steps.size()) throw std::out_of_range("trace: time " + std::to_string(t) + " not recorded");
  return steps[t - 1];
}

namespace {

void require_maps(const StackedVector& x, std::span<const ParaMap> maps) {
  if (maps.size() != x.agents()) throw DimensionMismatch("step: number of maps differs from number of blocks");
  for (const auto& m : maps)
    if (m.dimension() != x.dimension()) throw DimensionMismatch("step: map dimension differs from block dimension");
}

}  // namespace

StackedVector step(const StackedVector& x, const Mat& S, std::span<const ParaMap> maps) {
  require_maps(x, maps);
  StackedVector out = apply_kron(S, x);
  // Blocks are independent; ascending order keeps runs reproducible.
  for (std::size_t i = 0; i < out.agents(); ++i) out.block(i) = maps[i](Vec(out.block(i)));
  return out;
}

StackedVector step(const StackedVector& x, const StochasticMatrix& S, std::span<const ParaMap> maps) {
  return step(x, S.entries(), maps);
}

StackedVector step_agentwise(const StackedVector& x, const DirectedGraph& g, const Mat& S,
                             std::span<const ParaMap> maps) {
  require_maps(x, maps);
  if (g.vertex_count() != x.agents()) throw DimensionMismatch("step_agentwise: graph size differs from agents");
  StackedVector out(x.agents(), x.dimension());
  for (std::size_t i = 0; i < x.agents(); ++i) {
    Vec mix = Vec::Zero(static_cast<Eigen::Index>(x.dimension()));
    for (std::size_t j : g.neighbors_of(i)) {
      const double s = S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (s != 0.0) mix += s * x.block(j);
    }
    out.block(i) = maps[i](mix);
  }
  return out;
}

double disagreement(const StackedVector& x, NormIndex p) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.agents(); ++i)
    for (std::size_t j = i + 1; j < x.agents(); ++j) worst = std::max(worst, p_norm(x.block(i) - x.block(j), p));
  return worst;
}

double residual(const StackedVector& x, std::span<const ParaMap> maps, NormIndex p) {
  require_maps(x, maps);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.agents(); ++i) {
    const Vec xi = x.block(i);
    worst = std::max(worst, p_norm(maps[i](xi) - xi, p));
  }
  return worst;
}

Trace run(const Scenario& scenario) {
  scenario.validate();
  const auto matrices = scenario.step_matrices();
  const MixedNormSpec fejer_norm{scenario.norm, NormIndex::infinity()};
  std::optional<StackedVector> target;
  if (scenario.witness) target = StackedVector::replicate(*scenario.witness, scenario.agents());

  Trace trace;
  StackedVector x = scenario.x0;
  for (std::size_t t = 1;; ++t) {
    TraceStep rec;
    rec.t = t;
    rec.x = x;
    rec.disagreement = disagreement(x, scenario.norm);
    rec.residual = residual(x, scenario.maps, scenario.norm);
    if (target) {
      StackedVector diff = x;
      diff.flat() -= target->flat();
      rec.distance_to_witness = mixed_norm(diff, fejer_norm);
    }
    if (rec.disagreement <= scenario.eps_consensus && rec.residual <= scenario.eps_residual) {
      trace.converged = true;
      trace.steps.push_back(std::move(rec));
      break;
    }
    if (t > scenario.horizon) {
      trace.steps.push_back(std::move(rec));
      break;
    }
    const std::size_t idx = scenario.schedule.pool_index(t);
    rec.graph = idx;
    StackedVector xbar = apply_kron(matrices[idx], x);
    StackedVector next = xbar;
    for (std::size_t i = 0; i < next.agents(); ++i) next.block(i) = scenario.maps[i](Vec(xbar.block(i)));
    rec.xbar = std::move(xbar);
    trace.steps.push_back(std::move(rec));
    x = std::move(next);
  }
  return trace;
}

std::vector<std::size_t> z_subsequence_times(const Trace& trace, std::size_t l, std::size_t rho0, std::size_t q) {
  if (l == 0 || rho0 == 0 || q == 0) throw InvalidInput("z subsequence: l, rho0 and q must be positive");
  std::vector<std::size_t> times;
  for (std::size_t k = 2;; ++k) {
    const std::size_t t = (k - 1) * q * l + rho0 - 1;
    if (t == 0 || t > trace.steps.size() || !trace.at(t).xbar) break;
    times.push_back(t);
  }
  if (times.empty()) throw std::out_of_range("z subsequence: trace too short for z(2)");
  return times;
}

std::vector<StackedVector> extract_z_subsequence(const Trace& trace, std::size_t l, std::size_t rho0, std::size_t q) {
  std::vector<StackedVector> out;
  for (std::size_t t : z_subsequence_times(trace, l, rho0, q)) out.push_back(*trace.at(t).xbar);
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << "t,agent,component,value,xbar_value\n";
  for (const auto& rec : trace.steps) {
    for (std::size_t i = 0; i < rec.x.agents(); ++i)
      for (std::size_t c = 0; c < rec.x.dimension(); ++c) {
        const auto k = static_cast<Eigen::Index>(c);
        os << rec.t << ',' << i + 1 << ',' << c + 1 << ',' << format_double(rec.x.block(i)[k]) << ',';
        if (rec.xbar) os << format_double(rec.xbar->block(i)[k]);
        os << '\n';
      }
  }
}

void write_metrics_csv(std::ostream& os, const Trace& trace) {
  os << "t,disagreement,residual,distance_to_witness\n";
  for (const auto& rec : trace.steps) {
    os << rec.t << ',' << format_double(rec.disagreement) << ',' << format_double(rec.residual) << ',';
    if (rec.distance_to_witness) os << format_double(*rec.distance_to_witness);
    os << '\n';
  }
}

}  // namespace paracon
