#include "paracon/verify.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "paracon/errors.hpp"
#include "paracon/generators.hpp"

namespace paracon {

namespace {

constexpr double kChainSlack = 1e-12;
constexpr double kIdentityTol = 1e-10;
constexpr double kBoopFixedTol = 1e-12;
constexpr std::size_t kMaxStoredViolations = 50;

const NormIndex kTwo = NormIndex::finite(2.0);

std::string fmt(double v) { return format_double(v); }

std::string vec_str(const Eigen::Ref<const Vec>& v) {
  std::string s = "(";
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k) s += ", ";
    s += fmt(v[k]);
  }
  return s + ")";
}

StackedVector diff(const StackedVector& a, const StackedVector& b) {
  StackedVector d = a;
  d.flat() -= b.flat();
  return d;
}

double pinf_distance(const StackedVector& a, const StackedVector& b, NormIndex p) {
  return mixed_norm(diff(a, b), {p, NormIndex::infinity()});
}

double displacement(const ParaMap& map, const Vec& x) { return p_norm(map(x) - x, map.contraction_norm()); }

std::vector<StackedVector> sample_stacked(std::size_t m, std::size_t n, std::size_t count, double radius,
                                          gen::Rng& rng) {
  std::vector<StackedVector> out;
  out.reserve(count);
  for (auto& flat : sample_ball(Vec::Zero(static_cast<Eigen::Index>(m * n)), radius, count, rng))
    out.emplace_back(m, n, std::move(flat));
  return out;
}

// Iterates the map until it stops moving; the library maps reach a fixed
// point in one step or converge geometrically.
Vec settle(const ParaMap& map, Vec x) {
  for (int k = 0; k < 100000; ++k) {
    Vec next = map(x);
    const double d = p_norm(next - x, kTwo);
    x = std::move(next);
    if (d <= 1e-14) break;
  }
  return x;
}

}  // namespace

void CheckReport::record(bool ok, double lhs, double rhs, double margin, const std::string& what) {
  ++trials;
  worst_margin = std::min(worst_margin, margin);
  if (!ok) {
    if (violations.size() < kMaxStoredViolations)
      violations.push_back({what, lhs, rhs});
    else
      violations.back().what = "(further violations omitted) " + what;
  }
}

void CheckReport::merge(const CheckReport& other) {
  trials += other.trials;
  worst_margin = std::min(worst_margin, other.worst_margin);
  for (const auto& v : other.violations) {
    Violation copy = v;
    if (!other.name.empty()) copy.what = other.name + ": " + copy.what;
    violations.push_back(std::move(copy));
  }
  for (const auto& [key, k] : other.counts) counts[key] += k;
  if (!other.note.empty() && note.find(other.note) == std::string::npos) {
    if (!note.empty()) note += "; ";
    note += other.note;
  }
}

// ---------------------------------------------------------------------------

CheckReport check_elsner(std::span<const ParaMap> pool, const std::function<std::size_t(std::size_t)>& selector,
                         const Vec& x0, std::size_t T) {
  if (pool.empty()) throw InvalidInput("check_elsner: empty pool");
  CheckReport report;
  report.name = "check_elsner";
  std::vector<std::size_t> uses(pool.size(), 0);
  Vec x = x0;
  for (std::size_t t = 1; t <= T; ++t) {
    const std::size_t k = selector(t);
    if (k >= pool.size()) throw InvalidInput("check_elsner: selector out of range");
    x = pool[k](x);
    ++uses[k];
  }
  const double threshold = static_cast<double>(T) / (2.0 * static_cast<double>(pool.size()));
  const double tol = 1e-7;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    if (static_cast<double>(uses[k]) < threshold) continue;
    const double res = displacement(pool[k], x);
    report.record(res <= tol, res, tol, tol - res, "limit not fixed by map " + std::to_string(k + 1));
  }
  return report;
}

CheckReport check_composition_fixed_sets(const ParaMap& p1, const ParaMap& p2, std::span<const Vec> samples,
                                         const Vec& common_fixed_point) {
  CheckReport report;
  report.name = "check_composition_fixed_sets";
  const ParaMap comp = compose({p1, p2}, common_fixed_point);
  std::size_t both = 0;
  for (const Vec& x : samples) {
    const bool in_both = p1.in_fixed_set(x) && p2.in_fixed_set(x);
    const double res = displacement(comp, x);
    const bool comp_fixed = res <= kFixedPointTolerance;
    if (in_both) {
      ++both;
      report.record(comp_fixed, res, kFixedPointTolerance, kFixedPointTolerance - res,
                    "common fixed point moved by the composite: " + vec_str(x));
    }
    if (comp_fixed)
      report.record(in_both, res, kFixedPointTolerance, kFixedPointTolerance - res,
                    "composite fixes a point outside F(P1) n F(P2): " + vec_str(x));

    const Vec z = settle(comp, x);
    const double tol = 1e-7;
    const double d1 = displacement(p1, z);
    const double d2 = displacement(p2, z);
    const double worst = std::max(d1, d2);
    report.record(worst <= tol, worst, tol, tol - worst, "located fixed point of the composite not common: " + vec_str(z));
  }
  report.tally("samples_in_both_fixed_sets", both);
  return report;
}

CheckReport check_linear_qne_iff_ne(const Mat& P, std::span<const Vec> samples, NormIndex p) {
  if (P.rows() != P.cols()) throw DimensionMismatch("check_linear_qne_iff_ne: P must be square");
  if (samples.size() < 2) throw InvalidInput("check_linear_qne_iff_ne: need at least two samples");
  CheckReport report;
  report.name = "check_linear_qne_iff_ne";
  const auto n = P.rows();

  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const Vec& x = samples[k];
    const Vec& y = samples[k + 1];
    const double a = 0.5 + static_cast<double>(k % 7);
    const Vec lhs = P * (a * x + y);
    const Vec rhs = a * (P * x) + P * y;
    if ((lhs - rhs).norm() > 1e-10 * (1.0 + rhs.norm()))
      throw InvalidInput("check_linear_qne_iff_ne: P is not linear on the samples");
  }

  // Orthonormal basis of F(P) = ker(P - I).
  Eigen::JacobiSVD<Mat> svd(P - Mat::Identity(n, n), Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv[k] > 1e-10) ++rank;
  const Mat N = svd.matrixV().rightCols(n - rank);
  const auto dist_to_fixed = [&](const Vec& x) { return (x - N * (N.transpose() * x)).norm(); };

  std::vector<Vec> fixed{Vec::Zero(n)};
  for (const Vec& x : samples) fixed.push_back(N * (N.transpose() * x));

  const auto le = [](double l, double r) { return l <= r * (1.0 + 1e-12) + 1e-14; };

  // Both sides see the same difference directions x - y, so for a linear P the
  // sampled verdicts must agree.
  bool qne = true, ne = true, pc = true, nd = true;
  for (const Vec& x : samples) {
    for (const Vec& y : fixed) {
      qne = qne && le(p_norm(P * x - y, p), p_norm(x - y, p));
      ne = ne && le(p_norm(P * x - P * y, p), p_norm(x - y, p));
      const Vec d = x - y;
      if (dist_to_fixed(d) > kFixedPointTolerance) {
        pc = pc && p_norm(P * x - y, p) < p_norm(d, p) - kStrictTolerance;
        nd = nd && p_norm(P * d, p) < p_norm(d, p) - kStrictTolerance;
      }
    }
  }
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const Vec d = samples[k] - samples[k + 1];
    qne = qne && le(p_norm(P * d, p), p_norm(d, p));
    ne = ne && le(p_norm(P * samples[k] - P * samples[k + 1], p), p_norm(d, p));
  }
  report.record(qne == ne, qne, ne, qne == ne ? 0.0 : -1.0, "quasi-nonexpansive and nonexpansive verdicts differ");
  report.record(pc == nd, pc, nd, pc == nd ? 0.0 : -1.0,
                "paracontraction and norm-decrease verdicts differ");
  report.tally(qne ? "nonexpansive" : "expansive");
  report.tally(pc ? "paracontraction" : "not_paracontraction");
  return report;
}

CheckReport check_closed_convex(const ParaMap& map, std::span<const Vec> fixed_points, std::size_t probes,
                                std::mt19937_64& rng) {
  if (fixed_points.empty()) throw InvalidInput("check_closed_convex: no fixed points");
  CheckReport report;
  report.name = "check_closed_convex";
  std::uniform_int_distribution<std::size_t> pick(0, fixed_points.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < probes; ++k) {
    const Vec& a = fixed_points[pick(rng)];
    const Vec& b = fixed_points[pick(rng)];
    const double alpha = unit(rng);
    const bool ok = fixed_set_closed_convex_probe(map, a, b, alpha);
    const Vec mid = alpha * a + (1.0 - alpha) * b;
    const double res = displacement(map, mid);
    report.record(ok, res, kFixedPointTolerance, kFixedPointTolerance - res,
                  to_string(map.kind()) + ": convex combination not fixed at alpha " + fmt(alpha));
  }
  return report;
}

CheckReport check_map_properties(const std::string& label, const ParaMap& map, std::span<const Vec> x_samples,
                                 std::span<const Vec> y_fixed) {
  CheckReport report;
  report.name = label;
  const NormIndex p = map.contraction_norm();
  const PropertyReport pc = check_paracontraction(map, x_samples, y_fixed, p);
  const PropertyReport qne = check_quasi_nonexpansive(map, x_samples, y_fixed, p);
  const auto fold = [&](const PropertyReport& r, const std::string& what) {
    report.trials += r.pairs_checked;
    if (r.pairs_checked) report.worst_margin = std::min(report.worst_margin, r.worst_margin);
    for (const auto& v : r.violations)
      if (report.violations.size() < kMaxStoredViolations)
        report.violations.push_back({what + " at x = " + vec_str(v.x) + ", y = " + vec_str(v.y), v.lhs, v.rhs});
  };
  fold(pc, to_string(map.kind()) + " strict decrease");
  fold(qne, to_string(map.kind()) + " quasi-nonexpansive");
  report.tally("vacuous_pairs", pc.pairs_vacuous);
  return report;
}

// ---------------------------------------------------------------------------

StackedVector apply_stacked(std::span<const ParaMap> maps, const StackedVector& x) {
  if (maps.size() != x.agents()) throw DimensionMismatch("apply_stacked: one map per agent required");
  StackedVector out(x.agents(), x.dimension());
  for (std::size_t i = 0; i < maps.size(); ++i) out.block(i) = maps[i](Vec(x.block(i)));
  return out;
}

bool stacked_fixed(std::span<const ParaMap> maps, const StackedVector& x, double tol) {
  if (maps.size() != x.agents()) throw DimensionMismatch("stacked_fixed: one map per agent required");
  for (std::size_t i = 0; i < maps.size(); ++i)
    if (!is_fixed_point(maps[i], Vec(x.block(i)), tol)) return false;
  return true;
}

CheckReport check_M_pc_22(std::span<const ParaMap> maps, std::span<const StackedVector> samples,
                          std::span<const StackedVector> fixed) {
  CheckReport report;
  report.name = "check_M_pc_22";
  const MixedNormSpec norm{kTwo, kTwo};
  std::size_t vacuous = 0;
  for (const auto& x : samples) {
    if (stacked_fixed(maps, x)) {
      ++vacuous;
      continue;
    }
    const StackedVector mx = apply_stacked(maps, x);
    for (const auto& y : fixed) {
      const double lhs = mixed_norm(diff(mx, y), norm);
      const double rhs = mixed_norm(diff(x, y), norm);
      report.record(lhs < rhs - kStrictTolerance, lhs, rhs, rhs - lhs, "no strict decrease in (2,2)-norm");
    }
  }
  report.tally("vacuous_samples", vacuous);
  return report;
}

CheckReport check_M_qne_pinf(std::span<const ParaMap> maps, std::span<const StackedVector> samples,
                             std::span<const StackedVector> fixed, NormIndex p, std::mt19937_64& rng) {
  CheckReport report;
  report.name = "check_M_qne_pinf";
  for (const auto& x : samples) {
    const StackedVector mx = apply_stacked(maps, x);
    for (const auto& y : fixed) {
      const double lhs = pinf_distance(mx, y, p);
      const double rhs = pinf_distance(x, y, p);
      const double bound = rhs * (1.0 + kChainSlack);
      report.record(lhs <= bound, lhs, rhs, bound - lhs, "(p,inf)-distance grew");
    }
  }
  if (maps.size() < 2 || fixed.empty()) return report;

  // Equality configuration: x_1 not fixed and close to y_1, x_2 fixed but
  // farther from y_2, every other block at y.
  const StackedVector& y = fixed.front();
  const std::size_t n = y.dimension();
  const Vec y1 = y.block(0);
  const Vec y2 = y.block(1);
  Vec x2;
  double D = 0.0;
  for (int attempt = 0; attempt < 100 && D <= 1e-6; ++attempt) {
    const Vec z = y2 + kDefaultSampleRadius * gen::unit_vector(n, rng);
    x2 = settle(maps[1], z);
    D = p_norm(x2 - y2, p);
  }
  if (D <= 1e-6) {
    report.tally("equality_skipped_singleton");
    return report;
  }
  Vec x1;
  bool found = false;
  for (int attempt = 0; attempt < 100 && !found; ++attempt) {
    x1 = y1 + 0.5 * D * gen::unit_vector(n, rng, p);
    found = !is_fixed_point(maps[0], x1);
  }
  if (!found) {
    report.tally("equality_skipped_no_x1");
    return report;
  }
  StackedVector x = y;
  x.block(0) = x1;
  x.block(1) = x2;
  const double lhs = pinf_distance(apply_stacked(maps, x), y, p);
  const double rhs = pinf_distance(x, y, p);
  const double gap = std::abs(lhs - rhs);
  report.record(gap <= 1e-12, lhs, rhs, 1e-12 - gap, "equality configuration not attained");
  report.tally("equality_configurations");
  return report;
}

// ---------------------------------------------------------------------------

CheckReport check_dbl_stochastic_pc(const Mat& S, std::span<const Vec> samples) {
  if (!is_doubly_stochastic(S) || !has_positive_diagonal(S))
    throw PreconditionError("check_dbl_stochastic_pc: S must be doubly stochastic with positive diagonal");
  CheckReport report;
  report.name = "check_dbl_stochastic_pc";
  for (const Vec& x : samples) {
    const Vec sx = S * x;
    if ((sx - x).norm() <= kFixedPointTolerance) continue;
    const double lhs = sx.norm();
    const double rhs = x.norm();
    report.record(lhs < rhs - kStrictTolerance, lhs, rhs, rhs - lhs, "||Sx|| not below ||x|| at " + vec_str(x));
  }
  return report;
}

CheckReport check_S_I_pc_infty(const Mat& S, std::span<const StackedVector> samples, NormIndex p) {
  if (!is_positive_matrix(S) || !is_row_stochastic(S))
    throw PreconditionError("check_S_I_pc_infty: S must be positive and stochastic");
  CheckReport report;
  report.name = "check_S_I_pc_infty";
  const MixedNormSpec norm{p, NormIndex::infinity()};
  for (const auto& x : samples) {
    if (disagreement(x, p) <= kFixedPointTolerance) continue;
    const double lhs = mixed_norm(apply_kron(S, x), norm);
    const double rhs = mixed_norm(x, norm);
    report.record(lhs < rhs - kStrictTolerance, lhs, rhs, rhs - lhs, "no strict decrease at p = " + p.to_string());
  }
  return report;
}

CheckReport check_positive_stochastic_necessity(const Mat& S, std::size_t n, NormIndex p, std::mt19937_64& rng) {
  if (!is_row_stochastic(S)) throw PreconditionError("check_positive_stochastic_necessity: S must be stochastic");
  CheckReport report;
  report.name = "check_positive_stochastic_necessity";
  if (!consensus_fixed_set_check(S)) {
    report.tally("skipped_fixed_set_not_consensus");
    return report;
  }
  const auto m = S.rows();
  Eigen::Index zi = -1, zk = -1;
  for (Eigen::Index i = 0; i < m && zi < 0; ++i)
    for (Eigen::Index k = 0; k < m; ++k)
      if (S(i, k) == 0.0) {
        zi = i;
        zk = k;
        break;
      }
  if (zi < 0) {
    report.tally("skipped_positive");
    return report;
  }
  const Vec z = gen::unit_vector(n, rng, p);
  StackedVector x = StackedVector::replicate(z, static_cast<std::size_t>(m));
  x.block(static_cast<std::size_t>(zk)).setZero();
  const MixedNormSpec norm{p, NormIndex::infinity()};
  const StackedVector sx = apply_kron(S, x);
  const double lhs = mixed_norm(sx, norm);
  const double rhs = mixed_norm(x, norm);
  const double gap = std::abs(lhs - rhs);
  const std::string where = "s_" + std::to_string(zi + 1) + std::to_string(zk + 1) + " = 0";
  report.record(gap <= 1e-15, lhs, rhs, 1e-15 - gap, "norm not preserved with " + where);
  const double blk = p_norm(sx.block(static_cast<std::size_t>(zi)) - z, p);
  report.record(blk <= 1e-15, blk, 0.0, 1e-15 - blk, "block " + std::to_string(zi + 1) + " differs from z");
  report.tally("probes");
  return report;
}

CheckReport check_S_I_qne_pinf(const Mat& S, std::span<const StackedVector> samples, NormIndex p) {
  if (!is_row_stochastic(S)) throw PreconditionError("check_S_I_qne_pinf: S must be stochastic");
  CheckReport report;
  report.name = "check_S_I_qne_pinf";
  const MixedNormSpec norm{p, NormIndex::infinity()};
  for (const auto& x : samples) {
    const double lhs = mixed_norm(apply_kron(S, x), norm);
    const double rhs = mixed_norm(x, norm);
    const double bound = rhs * (1.0 + kChainSlack);
    report.record(lhs <= bound, lhs, rhs, bound - lhs, "(p,inf)-norm grew at p = " + p.to_string());
  }
  return report;
}

// ---------------------------------------------------------------------------

VSequence make_v_sequence(std::vector<ParaMap> maps, std::vector<StochasticMatrix> steps, StackedVector v0,
                          Vec y_star) {
  if (maps.size() != v0.agents()) throw DimensionMismatch("make_v_sequence: one map per agent required");
  for (const auto& S : steps)
    if (S.size() != maps.size()) throw DimensionMismatch("make_v_sequence: matrix size differs from agent count");
  VSequence vs{std::move(steps), std::move(maps), std::move(y_star), {}};
  vs.v.push_back(std::move(v0));
  for (const auto& S : vs.steps) vs.v.push_back(apply_kron(S, apply_stacked(vs.maps, vs.v.back())));
  return vs;
}

StackedVector apply_composed(std::span<const ParaMap> maps, std::span<const StochasticMatrix> steps,
                             const StackedVector& x) {
  StackedVector v = x;
  for (const auto& S : steps) v = apply_kron(S, apply_stacked(maps, v));
  return v;
}

CheckReport check_v_inequality(const VSequence& vs, NormIndex p) {
  CheckReport report;
  report.name = "check_v_inequality";
  const std::size_t q = vs.q();
  const std::size_t m = vs.maps.size();
  std::vector<Vec> dist(q + 1);
  for (std::size_t t = 0; t <= q; ++t) {
    dist[t].resize(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) dist[t][static_cast<Eigen::Index>(i)] = p_norm(vs.v[t].block(i) - vs.y_star, p);
  }
  for (std::size_t t = 0; t <= q; ++t)
    for (std::size_t tau = 0; tau <= t; ++tau) {
      const Vec rhs_all = phi_product(vs.steps, tau, t).matrix * dist[tau];
      for (std::size_t i = 0; i < m; ++i) {
        const double lhs = dist[t][static_cast<Eigen::Index>(i)];
        const double rhs = rhs_all[static_cast<Eigen::Index>(i)];
        const std::string where = "i=" + std::to_string(i + 1) + " t=" + std::to_string(t) + " tau=" + std::to_string(tau);
        if (tau == t) {
          const double gap = std::abs(lhs - rhs);
          report.record(gap <= kIdentityTol, lhs, rhs, kIdentityTol - gap, "equality fails at " + where);
        } else {
          report.record(lhs <= rhs + kIdentityTol, lhs, rhs, rhs - lhs, "inequality fails at " + where);
        }
      }
    }
  return report;
}

CheckReport check_phi_inequality(const VSequence& vs, NormIndex p) {
  CheckReport report;
  report.name = "check_phi_inequality";
  const std::size_t q = vs.q();
  const std::size_t m = vs.maps.size();
  std::vector<Mat> phi_q;  // phi_q[t] = Phi(q, t)
  for (std::size_t t = 0; t <= q; ++t) phi_q.push_back(phi_product(vs.steps, t, q).matrix);

  // drop(t, j): how much M_j pulls v_j(t) toward y*; disp(t, j): how far it moves it.
  std::vector<Vec> drop(q), disp(q);
  for (std::size_t t = 0; t < q; ++t) {
    drop[t].resize(static_cast<Eigen::Index>(m));
    disp[t].resize(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
      const Vec vj = vs.v[t].block(j);
      const Vec mj = vs.maps[j](vj);
      drop[t][static_cast<Eigen::Index>(j)] = p_norm(vj - vs.y_star, p) - p_norm(mj - vs.y_star, p);
      disp[t][static_cast<Eigen::Index>(j)] = p_norm(mj - vj, vs.maps[j].contraction_norm());
    }
  }
  Vec d0(static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) d0[static_cast<Eigen::Index>(j)] = p_norm(vs.v[0].block(j) - vs.y_star, p);

  std::size_t strict_cases = 0, weak_cases = 0, identity_cases = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double lhs = p_norm(vs.v[q].block(i) - vs.y_star, p);
    const double rhs = phi_q[0].row(ii).dot(d0);
    const std::string where = "i=" + std::to_string(i + 1);
    report.record(lhs <= rhs + kIdentityTol, lhs, rhs, rhs - lhs, "inequality fails at " + where);

    // The inequality is strict by at least phi_ij(q, t) * drop(t, j) for each
    // reachable non-fixed v_j(t).
    double best = 0.0;
    bool any_moving = false;
    for (std::size_t t = 0; t < q; ++t)
      for (std::size_t j = 0; j < m; ++j) {
        const double w = phi_q[t](ii, static_cast<Eigen::Index>(j));
        if (w <= 0.0) continue;
        if (disp[t][static_cast<Eigen::Index>(j)] > kBoopFixedTol) any_moving = true;
        best = std::max(best, w * drop[t][static_cast<Eigen::Index>(j)]);
      }
    if (best > kStrictTolerance) {
      ++strict_cases;
      report.record(lhs < rhs - kStrictTolerance, lhs, rhs, rhs - lhs, "strict inequality fails at " + where);
    } else if (any_moving) {
      ++weak_cases;
    } else {
      ++identity_cases;
      Vec mix = Vec::Zero(static_cast<Eigen::Index>(vs.v[0].dimension()));
      for (std::size_t j = 0; j < m; ++j) mix += phi_q[0](ii, static_cast<Eigen::Index>(j)) * vs.v[0].block(j);
      const double gap = p_norm(vs.v[q].block(i) - mix, p);
      report.record(gap <= kIdentityTol, gap, 0.0, kIdentityTol - gap, "linear identity fails at " + where);
    }
  }
  report.tally("strict_cases", strict_cases);
  report.tally("identity_cases", identity_cases);
  report.tally("below_resolution_cases", weak_cases);
  return report;
}

StackedVector find_composed_fixed_point(std::span<const ParaMap> maps, std::span<const StochasticMatrix> steps,
                                        StackedVector x) {
  for (int k = 0; k < 100000; ++k) {
    const StackedVector tx = apply_composed(maps, steps, x);
    if ((tx.flat() - x.flat()).lpNorm<Eigen::Infinity>() <= 1e-10) return x;
    x.flat() = 0.5 * (x.flat() + tx.flat());
  }
  return x;
}

namespace {

// Located fixed points of the composed map must be consensus vectors of a
// common fixed point.
void check_located_fixed_points(CheckReport& report, std::span<const ParaMap> maps,
                                std::span<const StochasticMatrix> steps, std::span<const StackedVector> starts,
                                const Vec& y_star) {
  const StackedVector ybar = StackedVector::replicate(y_star, maps.size());
  const double at_y = (apply_composed(maps, steps, ybar).flat() - ybar.flat()).lpNorm<Eigen::Infinity>();
  report.record(at_y <= 1e-12, at_y, 1e-12, 1e-12 - at_y, "stacked y* is not fixed");

  const double tol = 1e-6;
  for (const auto& start : starts) {
    const StackedVector z = find_composed_fixed_point(maps, steps, start);
    double worst = disagreement(z, NormIndex::infinity());
    for (std::size_t i = 0; i < maps.size(); ++i)
      for (std::size_t j = 0; j < maps.size(); ++j) worst = std::max(worst, displacement(maps[i], Vec(z.block(j))));
    report.record(worst <= tol, worst, tol, tol - worst, "located fixed point is not in F(M) n C");
  }
}

}  // namespace

CheckReport check_composed_map_pc(std::span<const ParaMap> maps, std::span<const StochasticMatrix> steps,
                                  std::span<const StackedVector> samples, const Vec& y_star, NormIndex p) {
  if (steps.empty() || !is_positive_matrix(phi_product(steps, 0, steps.size()).matrix))
    throw PreconditionError("check_composed_map_pc: the product S(q)...S(1) must be positive");
  CheckReport report;
  report.name = "check_composed_map_pc";
  const StackedVector ybar = StackedVector::replicate(y_star, maps.size());
  std::size_t vacuous = 0;
  for (const auto& x : samples) {
    const StackedVector tx = apply_composed(maps, steps, x);
    if ((tx.flat() - x.flat()).lpNorm<Eigen::Infinity>() <= kFixedPointTolerance) {
      ++vacuous;
      continue;
    }
    const double lhs = pinf_distance(tx, ybar, p);
    const double rhs = pinf_distance(x, ybar, p);
    report.record(lhs < rhs - kStrictTolerance, lhs, rhs, rhs - lhs, "composed map did not strictly decrease");
  }
  check_located_fixed_points(report, maps, steps, samples.first(std::min<std::size_t>(2, samples.size())), y_star);
  report.tally("vacuous_samples", vacuous);
  return report;
}

CheckReport check_class_lemma(std::span<const ParaMap> maps, std::span<const StochasticMatrix> steps,
                              std::span<const StackedVector> samples, const Vec& y_star) {
  if (steps.empty() || !is_strongly_connected(graph_of_matrix(phi_product(steps, 0, steps.size()).matrix)))
    throw PreconditionError("check_class_lemma: the product graph must be strongly connected");
  CheckReport report;
  report.name = "check_class_lemma";
  check_located_fixed_points(report, maps, steps, samples, y_star);
  return report;
}

// ---------------------------------------------------------------------------

CheckReport check_fejer_chain(const Trace& trace, const StackedVector& x_star, NormIndex p) {
  CheckReport report;
  report.name = "check_fejer_chain";
  for (std::size_t k = 0; k + 1 < trace.steps.size(); ++k) {
    const auto& rec = trace.steps[k];
    if (!rec.xbar) continue;
    const double next = pinf_distance(trace.steps[k + 1].x, x_star, p);
    const double mixed = pinf_distance(*rec.xbar, x_star, p);
    const double here = pinf_distance(rec.x, x_star, p);
    const std::string t = std::to_string(rec.t);
    report.record(next <= mixed + kChainSlack, next, mixed, mixed - next, "map step moved away at t=" + t);
    report.record(mixed <= here + kChainSlack, mixed, here, here - mixed, "mixing step moved away at t=" + t);
  }
  return report;
}

CheckReport check_subsequence_lemma(const Trace& trace, std::size_t l, std::size_t rho0, std::size_t q,
                                    const StackedVector& x_star, NormIndex p) {
  CheckReport report;
  report.name = "check_subsequence_lemma";
  const std::size_t T = trace.final_time();
  // suffix[t] = max_{s >= t} ||x(s) - x*||, 1-based.
  std::vector<double> suffix(T + 2, 0.0);
  for (std::size_t t = T; t >= 1; --t) suffix[t] = std::max(suffix[t + 1], pinf_distance(trace.at(t).x, x_star, p));
  for (std::size_t rho : z_subsequence_times(trace, l, rho0, q)) {
    if (rho + 1 > T) continue;
    const double bound = pinf_distance(*trace.at(rho).xbar, x_star, p);
    const double later = suffix[rho + 1];
    report.record(later <= bound + kChainSlack, later, bound, bound - later,
                  "trajectory left the ball after rho=" + std::to_string(rho));
  }
  return report;
}

Scenario counterexample_scenario(bool reverse_arc, bool start_in_intersection, std::size_t horizon) {
  Scenario sc;
  sc.maps.push_back(ParaMap::projector(ConvexSet::halfspace(Vec::Unit(2, 0), 1.0)));
  sc.maps.push_back(ParaMap::projector(ConvexSet::halfspace(-Vec::Unit(2, 0), 0.0)));
  std::vector<Arc> arcs{{0, 1}};
  Mat W(2, 2);
  if (reverse_arc) {
    arcs.push_back({1, 0});
    W << 0.5, 0.5, 0.5, 0.5;
  } else {
    W << 1.0, 0.0, 0.5, 0.5;
  }
  sc.schedule = GraphSchedule::constant(DirectedGraph::from_arcs(2, arcs, true));
  sc.weights = std::vector<Mat>{W};
  Vec x1(2), x2(2);
  x1 << (start_in_intersection ? 0.5 : -3.0), 0.5;
  x2 << 4.0, -2.0;
  const std::vector<Vec> blocks{x1, x2};
  sc.x0 = StackedVector::from_blocks(blocks);
  sc.horizon = horizon;
  Vec w(2);
  w << 0.5, 0.0;
  sc.witness = w;
  return sc;
}

CheckReport check_counterexample() {
  CheckReport report;
  report.name = "check_counterexample";
  const Scenario sc = counterexample_scenario(false, false, 1000);
  const ConvexSet c2 = ConvexSet::halfspace(-Vec::Unit(2, 0), 0.0);
  const Trace trace = run(sc);
  const Vec x1_start = sc.x0.block(0);
  const double d0 = c2.distance(x1_start);
  const double floor = d0 * (1.0 - kFixedPointTolerance);
  for (const auto& rec : trace.steps) {
    const Vec x1 = rec.x.block(0);
    const double drift = (x1 - x1_start).lpNorm<Eigen::Infinity>();
    const std::string t = std::to_string(rec.t);
    report.record(drift <= 1e-12, drift, 1e-12, 1e-12 - drift, "agent 1 moved at t=" + t);
    const double d = c2.distance(x1);
    report.record(d >= floor, d, floor, d - floor, "agent 1 approached the second set at t=" + t);
  }
  report.record(!trace.converged, trace.converged, 0.0, trace.converged ? -1.0 : 0.0, "the rooted run converged");

  const Trace control = run(counterexample_scenario(false, true, 10000));
  report.record(control.converged, control.converged, 1.0, control.converged ? 0.0 : -1.0,
                "control run from the intersection did not converge");
  const Trace contrast = run(counterexample_scenario(true, false, 10000));
  report.record(contrast.converged, contrast.converged, 1.0, contrast.converged ? 0.0 : -1.0,
                "run with the reverse arc did not converge");
  report.note = "initial distance " + fmt(d0) + ", control converged at t=" + std::to_string(control.final_time()) +
                ", reverse arc converged at t=" + std::to_string(contrast.final_time());
  return report;
}

// ---------------------------------------------------------------------------

CheckReport check_graph_homomorphism(std::size_t trials, std::size_t m_max, std::mt19937_64& rng) {
  if (m_max < 1) throw InvalidInput("check_graph_homomorphism: m_max must be positive");
  CheckReport report;
  report.name = "check_graph_homomorphism";
  std::uniform_int_distribution<std::size_t> size(1, m_max);
  std::uniform_real_distribution<double> density(0.1, 0.9);
  for (std::size_t k = 0; k < trials; ++k) {
    const std::size_t m = size(rng);
    const Mat A1 = gen::random_nonnegative(m, density(rng), rng);
    const Mat A2 = gen::random_nonnegative(m, density(rng), rng);
    const bool eq = graph_of_matrix(A2 * A1) == compose_graphs(graph_of_matrix(A1), graph_of_matrix(A2));
    report.record(eq, eq, 1.0, eq ? 0.0 : -1.0, "gamma(A2 A1) differs at trial " + std::to_string(k + 1));
  }
  return report;
}

namespace {

DirectedGraph graph_from_mask(std::size_t m, std::uint64_t mask) {
  DirectedGraph g = DirectedGraph::self_arcs(m);
  std::size_t bit = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      if (mask >> bit & 1U) g.add_arc(i, j);
      ++bit;
    }
  return g;
}

std::uint64_t mask_of(const DirectedGraph& g) {
  const std::size_t m = g.vertex_count();
  std::uint64_t mask = 0;
  std::size_t bit = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      if (g.has_arc(i, j)) mask |= std::uint64_t{1} << bit;
      ++bit;
    }
  return mask;
}

}  // namespace

CheckReport check_graph_composition_complete(std::size_t exhaustive_m_max, std::size_t random_m_max,
                                             std::size_t random_trials, std::mt19937_64& rng) {
  if (exhaustive_m_max > 5) throw InvalidInput("check_graph_composition_complete: exhaustive search limited to m <= 5");
  CheckReport report;
  report.name = "check_graph_composition_complete";
  std::ostringstream note;
  for (std::size_t m = 2; m <= exhaustive_m_max; ++m) {
    const std::size_t bits = m * (m - 1);
    std::vector<DirectedGraph> sc;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
      DirectedGraph g = graph_from_mask(m, mask);
      if (is_strongly_connected(g)) sc.push_back(std::move(g));
    }
    // layer[k]: distinct compositions of k + 1 graphs from sc.
    std::vector<DirectedGraph> layer = sc;
    for (std::size_t k = 2; k <= m - 1; ++k) {
      std::unordered_set<std::uint64_t> seen;
      std::vector<DirectedGraph> next;
      for (const auto& r : layer)
        for (const auto& g : sc) {
          DirectedGraph c = compose_graphs(r, g);
          if (seen.insert(mask_of(c)).second) next.push_back(std::move(c));
        }
      layer = std::move(next);
    }
    for (const auto& r : layer) {
      const bool ok = is_complete(r);
      report.record(ok, ok, 1.0, ok ? 0.0 : -1.0, "incomplete composition for m=" + std::to_string(m));
    }
    note << "m=" << m << ": " << sc.size() << " strongly connected graphs, " << layer.size()
         << " distinct compositions; ";
  }
  std::uniform_real_distribution<double> extra(0.0, 0.3);
  for (std::size_t m = std::max<std::size_t>(exhaustive_m_max + 1, 2); m <= random_m_max; ++m) {
    for (std::size_t k = 0; k < random_trials; ++k) {
      DirectedGraph r = gen::random_strongly_connected_graph(m, extra(rng), rng);
      for (std::size_t s = 2; s <= m - 1; ++s) r = compose_graphs(r, gen::random_strongly_connected_graph(m, extra(rng), rng));
      const bool ok = is_complete(r);
      report.record(ok, ok, 1.0, ok ? 0.0 : -1.0, "incomplete random composition for m=" + std::to_string(m));
    }
    note << "m=" << m << ": " << random_trials << " random tuples; ";
  }
  report.note = note.str();
  if (report.note.size() >= 2) report.note.resize(report.note.size() - 2);
  return report;
}

// ---------------------------------------------------------------------------

LinearCase linear_equation_case(bool time_varying, std::uint64_t seed) {
  gen::Rng rng(seed);
  LinearCase out{Scenario{}, gen::random_consistent_system(4, 4, rng)};
  Scenario& sc = out.scenario;
  sc.maps = gen::split_rows(out.system, 3);
  if (time_varying) {
    std::vector<DirectedGraph> cycle;
    for (std::size_t i = 0; i < 3; ++i) cycle.push_back(DirectedGraph::from_arcs(3, std::vector<Arc>{{i, (i + 1) % 3}}, true));
    sc.schedule = GraphSchedule::periodic(std::move(cycle));
    sc.horizon = 20000;
  } else {
    sc.schedule = GraphSchedule::constant(DirectedGraph::complete(3));
    sc.horizon = 5000;
  }
  sc.x0 = StackedVector(3, 4, kDefaultSampleRadius * gen::gaussian_vector(12, rng) / std::sqrt(12.0));
  sc.witness = out.system.solution;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Random v-sequence instance: common fixed point y*, projectors containing it,
// and q stochastic steps over strongly connected or arbitrary graphs.
struct VInstance {
  std::vector<ParaMap> maps;
  std::vector<StochasticMatrix> steps;
  Vec y_star;
};

VInstance random_v_instance(std::size_t m, std::size_t q, std::size_t n, bool strongly_connected, gen::Rng& rng) {
  VInstance inst;
  inst.y_star = gen::gaussian_vector(n, rng);
  inst.maps = gen::random_projectors_containing(m, inst.y_star, rng);
  std::uniform_real_distribution<double> extra(0.0, 0.5);
  for (std::size_t t = 0; t < q; ++t) {
    const DirectedGraph g = strongly_connected ? gen::random_strongly_connected_graph(m, extra(rng), rng)
                                               : gen::random_self_arced_graph(m, extra(rng), rng);
    inst.steps.push_back(gen::random_stochastic(g, rng));
  }
  return inst;
}

// Initial blocks: mostly random, some at y* or at other points fixed by their
// agent so that the identity case occurs.
StackedVector random_v0(const VInstance& inst, std::size_t n, gen::Rng& rng) {
  const std::size_t m = inst.maps.size();
  StackedVector v0(m, n);
  std::uniform_int_distribution<int> mode(0, 3);
  const int how = mode(rng);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec r = inst.y_star + 3.0 * gen::gaussian_vector(n, rng);
    switch (how) {
      case 0: v0.block(i) = inst.y_star; break;
      case 1: v0.block(i) = inst.maps[i](r); break;
      default: v0.block(i) = r; break;
    }
  }
  return v0;
}

std::vector<SuiteEntry> build_suite() {
  std::vector<SuiteEntry> s;
  s.push_back({"check_elsner", "paracontraction iterates settle on common fixed points", [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_elsner";
                 for (int trial = 0; trial < 20; ++trial) {
                   const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
                   const Vec anchor = gen::gaussian_vector(n, rng);
                   const auto pool = gen::random_projectors_containing(3, anchor, rng);
                   const Vec x0 = 10.0 * gen::gaussian_vector(n, rng);
                   std::vector<std::size_t> picks(3000);
                   std::uniform_int_distribution<std::size_t> pick(0, 2);
                   for (auto& k : picks) k = pick(rng);
                   r.merge(check_elsner(pool, [&](std::size_t t) { return picks[t - 1]; }, x0, picks.size()));
                   r.merge(check_elsner(pool, [](std::size_t t) { return t % 3; }, x0, 3000));
                 }
                 return r;
               }});
  s.push_back({"check_composition_fixed_sets", "fixed set of a composite is the intersection", [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_composition_fixed_sets";
                 for (int trial = 0; trial < 20; ++trial) {
                   const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
                   const Vec anchor = gen::gaussian_vector(n, rng);
                   const auto maps = gen::random_projectors_containing(2, anchor, rng);
                   auto samples = sample_ball(anchor, kDefaultSampleRadius, 20, rng);
                   samples.push_back(anchor);
                   samples.push_back(maps[0](samples[0]));
                   samples.push_back(maps[1](samples[1]));
                   r.merge(check_composition_fixed_sets(maps[0], maps[1], samples, anchor));
                 }
                 return r;
               }});
  s.push_back({"check_linear_qne_iff_ne", "linear maps: quasi-nonexpansive iff nonexpansive", [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_linear_qne_iff_ne";
                 const auto samples = sample_ball(Vec::Zero(3), kDefaultSampleRadius, 60, rng);
                 Mat proj = Mat::Zero(3, 3);
                 proj(0, 0) = proj(1, 1) = 1.0;
                 Mat rot(3, 3);
                 rot << 0, -1, 0, 1, 0, 0, 0, 0, 1;
                 const Mat avg = gen::random_doubly_stochastic(3, rng);
                 const Mat shear = (Mat(3, 3) << 1, 1, 0, 0, 1, 0, 0, 0, 1).finished();
                 for (const Mat& P : {proj, rot, avg, shear, Mat(2.0 * Mat::Identity(3, 3)), Mat(0.5 * avg)})
                   for (double p : {1.5, 2.0, 3.0}) r.merge(check_linear_qne_iff_ne(P, samples, NormIndex::finite(p)));
                 return r;
               }});
  s.push_back({"check_M_pc_22", "stacked map strictly decreases the (2,2)-distance", [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_M_pc_22";
                 for (int trial = 0; trial < 20; ++trial) {
                   const std::size_t m = 2 + static_cast<std::size_t>(trial % 3), n = 3;
                   const Vec y = gen::gaussian_vector(n, rng);
                   const auto maps = gen::random_projectors_containing(m, y, rng);
                   const auto xs = sample_stacked(m, n, 25, kDefaultSampleRadius, rng);
                   std::vector<StackedVector> ys{StackedVector::replicate(y, m)};
                   ys.push_back(apply_stacked(maps, xs[0]));
                   r.merge(check_M_pc_22(maps, xs, ys));
                 }
                 return r;
               }});
  s.push_back({"check_M_qne_pinf", "stacked map is quasi-nonexpansive in (p,inf), equality attained",
               [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_M_qne_pinf";
                 for (int trial = 0; trial < 15; ++trial) {
                   const std::size_t m = 2 + static_cast<std::size_t>(trial % 3), n = 3;
                   const NormIndex p = NormIndex::finite(std::array{1.5, 2.0, 3.0}[static_cast<std::size_t>(trial % 3)]);
                   const Vec y = gen::gaussian_vector(n, rng);
                   // Euclidean projectors are paracontractions only for p = 2; box
                   // projectors (coordinatewise clamps) are for every p.
                   std::vector<ParaMap> maps;
                   if (p == kTwo) {
                     maps = gen::random_halfspace_projectors(m, y, 1.0, rng);
                   } else {
                     std::uniform_real_distribution<double> half(0.2, 3.0);
                     for (std::size_t i = 0; i < m; ++i) {
                       Vec w(n);
                       for (auto& c : w) c = half(rng);
                       maps.push_back(ParaMap::projector(ConvexSet::box(y - w, y + w)));
                     }
                   }
                   const auto xs = sample_stacked(m, n, 25, kDefaultSampleRadius, rng);
                   const std::vector<StackedVector> ys{StackedVector::replicate(y, m)};
                   r.merge(check_M_qne_pinf(maps, xs, ys, p, rng));
                 }
                 return r;
               }});
  s.push_back({"check_v_inequality", "distance bound through transition products", [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_v_inequality";
                 std::uniform_int_distribution<std::size_t> ms(2, 4), qs(1, 6);
                 for (int trial = 0; trial < 200; ++trial) {
                   const std::size_t m = ms(rng), q = qs(rng), n = 3;
                   auto inst = random_v_instance(m, q, n, trial % 2 == 0, rng);
                   auto v0 = random_v0(inst, n, rng);
                   r.merge(check_v_inequality(make_v_sequence(inst.maps, inst.steps, v0, inst.y_star), kTwo));
                 }
                 return r;
               }});
  s.push_back({"check_phi_inequality", "strict and identity cases of the transition bound", [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_phi_inequality";
                 std::uniform_int_distribution<std::size_t> ms(2, 4), qs(1, 6);
                 for (int trial = 0; trial < 200; ++trial) {
                   const std::size_t m = ms(rng), q = qs(rng), n = 3;
                   auto inst = random_v_instance(m, q, n, trial % 2 == 0, rng);
                   auto v0 = random_v0(inst, n, rng);
                   r.merge(check_phi_inequality(make_v_sequence(inst.maps, inst.steps, v0, inst.y_star), kTwo));
                 }
                 return r;
               }});
  s.push_back({"check_composed_map_pc", "composed map with positive product is a (p,inf) paracontraction",
               [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_composed_map_pc";
                 std::uniform_int_distribution<std::size_t> ms(2, 4);
                 for (int trial = 0; trial < 40; ++trial) {
                   const std::size_t m = ms(rng), n = 3;
                   std::uniform_int_distribution<std::size_t> qs(m - 1, 6);
                   auto inst = random_v_instance(m, qs(rng), n, true, rng);
                   const auto xs = sample_stacked(m, n, 20, kDefaultSampleRadius, rng);
                   r.merge(check_composed_map_pc(inst.maps, inst.steps, xs, inst.y_star, kTwo));
                 }
                 return r;
               }});
  s.push_back({"check_class_lemma", "fixed points of the composed map are consensus common fixed points",
               [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_class_lemma";
                 std::uniform_int_distribution<std::size_t> ms(2, 4), qs(1, 6);
                 for (int trial = 0; trial < 40; ++trial) {
                   const std::size_t m = ms(rng), n = 3;
                   auto inst = random_v_instance(m, qs(rng), n, true, rng);
                   const auto xs = sample_stacked(m, n, 3, kDefaultSampleRadius, rng);
                   r.merge(check_class_lemma(inst.maps, inst.steps, xs, inst.y_star));
                 }
                 return r;
               }});
  s.push_back({"check_counterexample", "rooted but not strongly connected graphs can fail",
               [](std::uint64_t) { return check_counterexample(); }});
  s.push_back({"check_dbl_stochastic_pc", "doubly stochastic matrices strictly shrink non-fixed vectors",
               [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_dbl_stochastic_pc";
                 std::uniform_int_distribution<std::size_t> ms(2, 6);
                 for (int trial = 0; trial < 100; ++trial) {
                   const std::size_t m = ms(rng);
                   const Mat S = gen::random_doubly_stochastic(m, rng);
                   r.merge(check_dbl_stochastic_pc(S, sample_ball(Vec::Zero(static_cast<Eigen::Index>(m)),
                                                                  kDefaultSampleRadius, 100, rng)));
                 }
                 return r;
               }});
  s.push_back({"check_S_I_pc_infty", "positive stochastic S kron I strictly shrinks off consensus",
               [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_S_I_pc_infty";
                 for (double p : {1.5, 2.0, 3.0}) {
                   const Mat S = gen::random_positive_stochastic(4, rng);
                   r.merge(check_S_I_pc_infty(S, sample_stacked(4, 3, 500, kDefaultSampleRadius, rng),
                                              NormIndex::finite(p)));
                 }
                 return r;
               }});
  s.push_back({"check_S_I_qne_pinf", "stochastic S kron I never grows the (p,inf)-norm", [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_S_I_qne_pinf";
                 for (double p : {1.5, 2.0, 3.0}) {
                   const auto S = gen::random_stochastic(gen::random_self_arced_graph(4, 0.3, rng), rng);
                   r.merge(check_S_I_qne_pinf(S.entries(), sample_stacked(4, 3, 200, kDefaultSampleRadius, rng),
                                              NormIndex::finite(p)));
                 }
                 return r;
               }});
  s.push_back({"check_positive_stochastic_necessity", "a zero entry admits a norm-preserving vector",
               [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_positive_stochastic_necessity";
                 for (double p : {1.5, 2.0, 3.0}) {
                   for (std::size_t m = 2; m <= 5; ++m) {
                     const auto S = gen::random_stochastic(gen::random_strongly_connected_graph(m, 0.0, rng), rng);
                     r.merge(check_positive_stochastic_necessity(S.entries(), 3, NormIndex::finite(p), rng));
                   }
                 }
                 return r;
               }});
  s.push_back({"check_closed_convex", "fixed sets are closed under convex combination", [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_closed_convex";
                 for (int trial = 0; trial < 10; ++trial) {
                   const Vec anchor = gen::gaussian_vector(3, rng);
                   const ParaMap map = gen::random_projector_containing(anchor, rng);
                   std::vector<Vec> fixed{anchor};
                   for (auto& x : sample_ball(anchor, kDefaultSampleRadius, 20, rng)) fixed.push_back(settle(map, x));
                   r.merge(check_closed_convex(map, fixed, 50, rng));
                 }
                 return r;
               }});
  s.push_back({"check_map_library", "every map kind is a paracontraction", [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 CheckReport r;
                 r.name = "check_map_library";
                 const std::size_t n = 3;
                 Mat Q = gen::gaussian_vector(9, rng).reshaped(3, 3);
                 Q = Q.transpose() * Q + Mat::Identity(3, 3);
                 const QuadraticObjective f{Q, gen::gaussian_vector(n, rng)};
                 const double lmax = Eigen::SelfAdjointEigenSolver<Mat>(Q).eigenvalues().maxCoeff();
                 const Vec anchor = gen::gaussian_vector(n, rng);
                 Mat A = gen::gaussian_vector(6, rng).reshaped(2, 3);
                 Mat P = Mat::Zero(3, 3);
                 P(0, 0) = P(1, 1) = 1.0;
                 std::vector<ParaMap> maps{
                     ParaMap::affine_linear_solve(A, A * anchor),
                     ParaMap::projector(ConvexSet::ball(anchor, 2.0)),
                     ParaMap::projector(ConvexSet::box(anchor - Vec::Ones(3), anchor + Vec::Ones(3))),
                     ParaMap::gradient_descent(f, 1.0 / lmax, lmax),
                     ParaMap::proximal(ProxFunction::weighted_l1(n, 0.5)),
                     ParaMap::proximal(ProxFunction::quadratic(f)),
                     ParaMap::averaged(NonexpansiveMap::reflection(ConvexSet::halfspace(Vec::Unit(3, 0), 1.0)), 0.5),
                     ParaMap::linear(P),
                 };
                 for (const auto& map : maps) {
                   const auto xs = sample_ball(map.witness(), kDefaultSampleRadius, 100, rng);
                   std::vector<Vec> ys{map.witness()};
                   for (std::size_t k = 0; k < 4; ++k) ys.push_back(settle(map, xs[k]));
                   r.merge(check_map_properties(to_string(map.kind()), map, xs, ys));
                   std::vector<Vec> fixed = ys;
                   r.merge(check_closed_convex(map, fixed, 50, rng));
                 }
                 return r;
               }});
  s.push_back({"check_graph_homomorphism", "gamma(A2 A1) is the composition of the graphs", [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 return check_graph_homomorphism(200, 6, rng);
               }});
  s.push_back({"check_graph_composition_complete", "m - 1 strongly connected graphs compose to a complete one",
               [](std::uint64_t seed) {
                 gen::Rng rng(seed);
                 return check_graph_composition_complete(4, 7, 100, rng);
               }});
  s.push_back({"check_fejer_chain", "distance to a common fixed point never grows along runs", [](std::uint64_t seed) {
                 CheckReport r;
                 r.name = "check_fejer_chain";
                 for (bool tv : {false, true}) {
                   const LinearCase lc = linear_equation_case(tv, seed);
                   r.merge(check_fejer_chain(run(lc.scenario), StackedVector::replicate(lc.system.solution, 3), kTwo));
                 }
                 const Scenario ce = counterexample_scenario(false, false, 200);
                 r.merge(check_fejer_chain(run(ce), StackedVector::replicate(*ce.witness, 2), kTwo));
                 return r;
               }});
  s.push_back({"check_subsequence_lemma", "later states stay in the ball around each z point",
               [](std::uint64_t seed) {
                 CheckReport r;
                 r.name = "check_subsequence_lemma";
                 for (bool tv : {false, true}) {
                   const LinearCase lc = linear_equation_case(tv, seed);
                   const auto cert = search_rjsc(lc.scenario.schedule, 6, 50);
                   if (!std::holds_alternative<RjscCertificate>(cert)) {
                     r.record(false, 0.0, 1.0, -1.0, "no certificate for the regression schedule");
                     continue;
                   }
                   const auto& c = std::get<RjscCertificate>(cert);
                   r.merge(check_subsequence_lemma(run(lc.scenario), c.window_length, c.offset, 2,
                                                   StackedVector::replicate(lc.system.solution, 3), kTwo));
                 }
                 return r;
               }});
  return s;
}

}  // namespace

const std::vector<SuiteEntry>& default_suite() {
  static const std::vector<SuiteEntry> suite = build_suite();
  return suite;
}

std::vector<CheckReport> run_suite(std::span<const std::string> names, std::uint64_t seed) {
  const auto& suite = default_suite();
  std::vector<const SuiteEntry*> chosen;
  for (const auto& name : names) {
    if (name == "all") {
      for (const auto& e : suite) chosen.push_back(&e);
      continue;
    }
    const auto it = std::find_if(suite.begin(), suite.end(), [&](const SuiteEntry& e) { return e.name == name; });
    if (it == suite.end()) throw InvalidInput("unknown check: " + name);
    chosen.push_back(&*it);
  }
  std::vector<CheckReport> reports;
  for (const auto* e : chosen) {
    CheckReport r = e->run(seed);
    r.name = e->name;
    reports.push_back(std::move(r));
  }
  return reports;
}

void write_report_text(std::ostream& os, std::span<const CheckReport> reports) {
  std::size_t failed = 0;
  for (const auto& r : reports) {
    os << r.name << ": " << (r.passed() ? "PASS" : "FAIL") << "  trials=" << r.trials
       << "  violations=" << r.violations.size() << "  worst_margin=" << fmt(r.worst_margin) << '\n';
    if (!r.note.empty()) os << "  note: " << r.note << '\n';
    if (!r.counts.empty()) {
      os << "  counts:";
      for (const auto& [key, k] : r.counts) os << ' ' << key << '=' << k;
      os << '\n';
    }
    for (const auto& v : r.violations)
      os << "  violation: " << v.what << "  lhs=" << fmt(v.lhs) << "  rhs=" << fmt(v.rhs) << '\n';
    if (!r.passed()) ++failed;
  }
  os << reports.size() - failed << "/" << reports.size() << " checks passed\n";
}

void write_report_csv(std::ostream& os, std::span<const CheckReport> reports) {
  os << "check,trials,violations,worst_margin\n";
  for (const auto& r : reports)
    os << r.name << ',' << r.trials << ',' << r.violations.size() << ',' << fmt(r.worst_margin) << '\n';
}

}  // namespace paracon
