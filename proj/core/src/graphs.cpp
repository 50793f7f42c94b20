#include "paracon/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "paracon/errors.hpp"

namespace paracon {

DirectedGraph::DirectedGraph(std::size_t vertices) : m_(vertices), adj_(vertices * vertices, 0) {
  if (vertices == 0) throw InvalidInput("graph needs at least one vertex");
}

DirectedGraph DirectedGraph::self_arcs(std::size_t vertices) {
  DirectedGraph g(vertices);
  for (std::size_t i = 0; i < vertices; ++i) g.add_arc(i, i);
  return g;
}

DirectedGraph DirectedGraph::complete(std::size_t vertices) {
  DirectedGraph g(vertices);
  std::fill(g.adj_.begin(), g.adj_.end(), 1);
  return g;
}

DirectedGraph DirectedGraph::from_arcs(std::size_t vertices, std::span<const Arc> arcs, bool add_self_arcs) {
  DirectedGraph g = add_self_arcs ? self_arcs(vertices) : DirectedGraph(vertices);
  for (const Arc& a : arcs) g.add_arc(a.from, a.to);
  return g;
}

std::size_t DirectedGraph::arc_count() const noexcept {
  return static_cast<std::size_t>(std::count(adj_.begin(), adj_.end(), std::uint8_t{1}));
}

void DirectedGraph::add_arc(std::size_t from, std::size_t to) {
  if (from >= m_ || to >= m_)
    throw InvalidInput("arc (" + std::to_string(from) + ", " + std::to_string(to) + ") outside a graph on " +
                       std::to_string(m_) + " vertices");
  adj_[from * m_ + to] = 1;
}

bool DirectedGraph::has_arc(std::size_t from, std::size_t to) const {
  if (from >= m_ || to >= m_) throw std::out_of_range("has_arc: vertex out of range");
  return adj_[from * m_ + to] != 0;
}

bool DirectedGraph::has_all_self_arcs() const noexcept {
  for (std::size_t i = 0; i < m_; ++i)
    if (!adj_[i * m_ + i]) return false;
  return true;
}

std::vector<Arc> DirectedGraph::arcs() const {
  std::vector<Arc> out;
  for (std::size_t i = 0; i < m_; ++i)
    for (std::size_t j = 0; j < m_; ++j)
      if (adj_[i * m_ + j]) out.push_back({i, j});
  return out;
}

std::vector<std::size_t> DirectedGraph::neighbors_of(std::size_t i) const {
  if (i >= m_) throw std::out_of_range("neighbors_of: vertex out of range");
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < m_; ++j)
    if (adj_[j * m_ + i]) out.push_back(j);
  return out;
}

DirectedGraph compose_graphs(const DirectedGraph& first, const DirectedGraph& second) {
  const std::size_t m = first.vertex_count();
  if (second.vertex_count() != m) throw DimensionMismatch("compose_graphs: vertex counts differ");
  DirectedGraph out(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      if (!first.has_arc(i, k)) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (second.has_arc(k, j)) out.add_arc(i, j);
    }
  return out;
}

std::vector<std::size_t> strongly_connected_components(const DirectedGraph& g) {
  // Iterative Tarjan.
  const std::size_t m = g.vertex_count();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(m, kUnvisited), low(m, 0), component(m, kUnvisited);
  std::vector<bool> on_stack(m, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0;
  std::size_t next_component = 0;

  struct Frame {
    std::size_t v;
    std::size_t next_w;
  };
  for (std::size_t root = 0; root < m; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next_w < m) {
        const std::size_t w = f.next_w++;
        if (!g.has_arc(f.v, w)) continue;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::size_t v = f.v;
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = next_component;
        } while (w != v);
        ++next_component;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  return component;
}

bool is_strongly_connected(const DirectedGraph& g) {
  const auto comp = strongly_connected_components(g);
  return std::all_of(comp.begin(), comp.end(), [&](std::size_t c) { return c == comp.front(); });
}

bool is_complete(const DirectedGraph& g) { return g.arc_count() == g.vertex_count() * g.vertex_count(); }

DirectedGraph graph_of_matrix(const Mat& A) {
  if (A.rows() == 0 || A.rows() != A.cols()) throw InvalidInput("graph_of_matrix: matrix must be square and nonempty");
  DirectedGraph g(static_cast<std::size_t>(A.rows()));
  for (Eigen::Index j = 0; j < A.rows(); ++j)
    for (Eigen::Index i = 0; i < A.cols(); ++i) {
      const double a = A(j, i);
      if (!std::isfinite(a) || a < 0.0) throw InvalidInput("graph_of_matrix: entries must be finite and nonnegative");
      if (a > 0.0) g.add_arc(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  return g;
}

namespace {

void require_neighbor_pool(const std::vector<DirectedGraph>& pool) {
  if (pool.empty()) throw InvalidInput("graph schedule: empty graph list");
  const std::size_t m = pool.front().vertex_count();
  for (const auto& g : pool) {
    if (g.vertex_count() != m) throw DimensionMismatch("graph schedule: graphs differ in vertex count");
    if (!g.has_all_self_arcs()) throw InvalidInput("graph schedule: neighbor graphs must carry every self-arc");
  }
}

}  // namespace

GraphSchedule GraphSchedule::constant(DirectedGraph g) {
  GraphSchedule s;
  s.kind_ = Kind::Constant;
  s.pool_.push_back(std::move(g));
  require_neighbor_pool(s.pool_);
  return s;
}

GraphSchedule GraphSchedule::periodic(std::vector<DirectedGraph> graphs, std::optional<std::size_t> horizon) {
  GraphSchedule s;
  s.kind_ = Kind::PeriodicList;
  s.pool_ = std::move(graphs);
  s.horizon_ = horizon;
  require_neighbor_pool(s.pool_);
  return s;
}

GraphSchedule GraphSchedule::seeded_random(std::vector<DirectedGraph> pool, std::uint64_t seed, std::size_t horizon) {
  GraphSchedule s;
  s.kind_ = Kind::SeededRandom;
  s.pool_ = std::move(pool);
  s.horizon_ = horizon;
  require_neighbor_pool(s.pool_);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, s.pool_.size() - 1);
  s.drawn_.resize(horizon);
  for (auto& idx : s.drawn_) idx = pick(rng);
  return s;
}

std::size_t GraphSchedule::pool_index(std::size_t t) const {
  if (t == 0) throw std::out_of_range("graph schedule: times start at 1");
  if (horizon_ && t > *horizon_)
    throw std::out_of_range("graph schedule exhausted: t = " + std::to_string(t) + " exceeds horizon " +
                            std::to_string(*horizon_));
  switch (kind_) {
    case Kind::Constant: return 0;
    case Kind::PeriodicList: return (t - 1) % pool_.size();
    case Kind::SeededRandom: return drawn_[t - 1];
  }
  return 0;
}

DirectedGraph compose_window(const GraphSchedule& schedule, std::size_t first_time, std::size_t last_time) {
  if (first_time == 0 || last_time < first_time) throw InvalidInput("compose_window: invalid time range");
  DirectedGraph acc = schedule.at(first_time);
  for (std::size_t t = first_time + 1; t <= last_time; ++t) acc = compose_graphs(acc, schedule.at(t));
  return acc;
}

RjscResult certify_rjsc(const GraphSchedule& schedule, std::size_t l, std::size_t rho0, std::size_t k_max) {
  if (l == 0 || rho0 == 0 || k_max == 0) throw InvalidInput("certify_rjsc: l, rho0 and k_max must be positive");
  const std::size_t needed = k_max * l + rho0 - 1;
  if (schedule.horizon() && *schedule.horizon() < needed)
    throw std::out_of_range("certify_rjsc: schedule horizon " + std::to_string(*schedule.horizon()) +
                            " shorter than the " + std::to_string(needed) + " steps required");
  for (std::size_t k = 1; k <= k_max; ++k) {
    const std::size_t first = (k - 1) * l + rho0;
    const std::size_t last = k * l + rho0 - 1;
    if (!is_strongly_connected(compose_window(schedule, first, last))) return RjscFailure{l, rho0, k, first, last};
  }
  return RjscCertificate{l, rho0, k_max};
}

RjscResult search_rjsc(const GraphSchedule& schedule, std::size_t l_max, std::size_t k_max) {
  if (l_max == 0 || k_max == 0) throw InvalidInput("search_rjsc: l_max and k_max must be positive");
  std::optional<RjscResult> last_failure;
  for (std::size_t l = 1; l <= l_max; ++l)
    for (std::size_t rho0 = 1; rho0 <= l; ++rho0) {
      if (schedule.horizon() && *schedule.horizon() < k_max * l + rho0 - 1) continue;
      RjscResult r = certify_rjsc(schedule, l, rho0, k_max);
      if (std::holds_alternative<RjscCertificate>(r)) return r;
      last_failure = r;
    }
  if (!last_failure) throw std::out_of_range("search_rjsc: schedule horizon too short for any window");
  return *last_failure;
}

std::string describe(const RjscResult& result) {
  std::ostringstream os;
  if (const auto* c = std::get_if<RjscCertificate>(&result)) {
    os << "certified: l=" << c->window_length << " rho0=" << c->offset << " windows=" << c->verified_windows;
  } else {
    const auto& f = std::get<RjscFailure>(result);
    os << "not certified: l=" << f.window_length << " rho0=" << f.offset << " window k=" << f.failing_window
       << " (t=" << f.first_time << ".." << f.last_time << ") is not strongly connected";
  }
  return os.str();
}

}  // namespace paracon
