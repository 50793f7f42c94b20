#include "paracon/generators.hpp"

#include <algorithm>
#include <numeric>

#include "paracon/errors.hpp"

namespace paracon::gen {

Vec gaussian_vector(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = normal(rng);
  return v;
}

Vec unit_vector(std::size_t n, Rng& rng, NormIndex p) {
  Vec v;
  double len = 0.0;
  do {
    v = gaussian_vector(n, rng);
    len = p_norm(v, p);
  } while (len < 1e-6);
  return v / len;
}

ParaMap random_projector_containing(const Vec& anchor, Rng& rng) {
  const auto n = static_cast<std::size_t>(anchor.size());
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (pick(rng)) {
    case 0: {
      const Vec a = unit_vector(n, rng);
      return ParaMap::projector(ConvexSet::halfspace(a, a.dot(anchor) + 2.0 * u(rng)));
    }
    case 1: {
      const Vec center = anchor + 3.0 * u(rng) * unit_vector(n, rng);
      const double radius = (center - anchor).norm() + 0.5 + 2.0 * u(rng);
      return ParaMap::projector(ConvexSet::ball(center, radius));
    }
    default: {
      Vec lo(anchor.size()), hi(anchor.size());
      for (Eigen::Index i = 0; i < anchor.size(); ++i) {
        lo[i] = anchor[i] - 2.0 * u(rng);
        hi[i] = anchor[i] + 2.0 * u(rng);
      }
      return ParaMap::projector(ConvexSet::box(lo, hi));
    }
  }
}

std::vector<ParaMap> random_projectors_containing(std::size_t m, const Vec& anchor, Rng& rng) {
  std::vector<ParaMap> maps;
  maps.reserve(m);
  for (std::size_t i = 0; i < m; ++i) maps.push_back(random_projector_containing(anchor, rng));
  return maps;
}

std::vector<ParaMap> random_halfspace_projectors(std::size_t m, const Vec& anchor, double slack, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, slack);
  std::vector<ParaMap> maps;
  maps.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec a = unit_vector(static_cast<std::size_t>(anchor.size()), rng);
    maps.push_back(ParaMap::projector(ConvexSet::halfspace(a, a.dot(anchor) + u(rng))));
  }
  return maps;
}

DirectedGraph random_self_arced_graph(std::size_t m, double arc_probability, Rng& rng) {
  std::bernoulli_distribution coin(arc_probability);
  DirectedGraph g = DirectedGraph::self_arcs(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && coin(rng)) g.add_arc(i, j);
  return g;
}

DirectedGraph random_strongly_connected_graph(std::size_t m, double extra_arc_probability, Rng& rng) {
  DirectedGraph g = random_self_arced_graph(m, extra_arc_probability, rng);
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t k = 0; k < m && m > 1; ++k) g.add_arc(order[k], order[(k + 1) % m]);
  return g;
}

StochasticMatrix random_stochastic(const DirectedGraph& g, Rng& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  const auto m = static_cast<Eigen::Index>(g.vertex_count());
  Mat W = Mat::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto nbrs = g.neighbors_of(static_cast<std::size_t>(i));
    double total = 0.0;
    for (std::size_t j : nbrs) total += (W(i, static_cast<Eigen::Index>(j)) = u(rng));
    for (std::size_t j : nbrs) W(i, static_cast<Eigen::Index>(j)) /= total;
    // Put the rounding remainder on the diagonal so the row sums to 1 tightly.
    W(i, i) += 1.0 - W.row(i).sum();
  }
  return stochastic_from_weights(g, W);
}

Mat random_doubly_stochastic(std::size_t m, Rng& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::uniform_int_distribution<int> count(0, 3);
  const auto mm = static_cast<Eigen::Index>(m);
  const int k = count(rng);
  std::vector<double> w(static_cast<std::size_t>(k) + 1);
  for (auto& x : w) x = u(rng);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  Mat S = (w[0] / total) * Mat::Identity(mm, mm);
  std::vector<Eigen::Index> perm(m);
  for (int p = 1; p <= k; ++p) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (Eigen::Index i = 0; i < mm; ++i) S(i, perm[static_cast<std::size_t>(i)]) += w[static_cast<std::size_t>(p)] / total;
  }
  return S;
}

Mat random_positive_stochastic(std::size_t m, Rng& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const auto mm = static_cast<Eigen::Index>(m);
  Mat S(mm, mm);
  for (Eigen::Index i = 0; i < mm; ++i) {
    for (Eigen::Index j = 0; j < mm; ++j) S(i, j) = u(rng);
    S.row(i) /= S.row(i).sum();
  }
  return S;
}

Mat random_nonnegative(std::size_t m, double density, Rng& rng) {
  std::bernoulli_distribution coin(density);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  const auto mm = static_cast<Eigen::Index>(m);
  Mat A = Mat::Zero(mm, mm);
  for (Eigen::Index i = 0; i < mm; ++i)
    for (Eigen::Index j = 0; j < mm; ++j)
      if (coin(rng)) A(i, j) = u(rng);
  return A;
}

LinearSystem random_consistent_system(std::size_t rows, std::size_t n, Rng& rng) {
  LinearSystem sys;
  sys.A = Mat(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < sys.A.rows(); ++i)
    for (Eigen::Index j = 0; j < sys.A.cols(); ++j) sys.A(i, j) = normal(rng);
  sys.solution = gaussian_vector(n, rng);
  sys.b = sys.A * sys.solution;
  return sys;
}

std::vector<ParaMap> split_rows(const LinearSystem& system, std::size_t agents) {
  const auto rows = static_cast<std::size_t>(system.A.rows());
  if (agents == 0 || agents > rows) throw InvalidInput("split_rows: need 1 <= agents <= rows");
  std::vector<ParaMap> maps;
  std::size_t start = 0;
  for (std::size_t i = 0; i < agents; ++i) {
    const std::size_t count = rows / agents + (i < rows % agents ? 1 : 0);
    const auto s = static_cast<Eigen::Index>(start), c = static_cast<Eigen::Index>(count);
    maps.push_back(ParaMap::affine_linear_solve(system.A.middleRows(s, c), system.b.segment(s, c)));
    start += count;
  }
  return maps;
}

}  // namespace paracon::gen
