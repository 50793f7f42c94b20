#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "paracon/vectorspace.hpp"

namespace paracon {

/// Arc j -> i: agent `from` is a neighbor of agent `to` (information flows
/// from -> to). Vertices are 0-based.
struct Arc {
  std::size_t from;
  std::size_t to;

  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

class DirectedGraph {
 public:
  /// m vertices, no arcs.
  explicit DirectedGraph(std::size_t vertices);

  static DirectedGraph self_arcs(std::size_t vertices);
  static DirectedGraph complete(std::size_t vertices);
  /// Arcs from the list; self-arcs added at every vertex when requested.
  static DirectedGraph from_arcs(std::size_t vertices, std::span<const Arc> arcs, bool add_self_arcs);

  std::size_t vertex_count() const noexcept { return m_; }
  std::size_t arc_count() const noexcept;

  void add_arc(std::size_t from, std::size_t to);
  /// Vertex indices past m() throw std::out_of_range.
  bool has_arc(std::size_t from, std::size_t to) const;
  bool has_all_self_arcs() const noexcept;

  /// Arcs in (from, to) lexicographic order.
  std::vector<Arc> arcs() const;
  /// N_i: every j with an arc j -> i, ascending.
  std::vector<std::size_t> neighbors_of(std::size_t i) const;

  friend bool operator==(const DirectedGraph&, const DirectedGraph&) = default;

 private:
  std::size_t m_;
  std::vector<std::uint8_t> adj_;  // adj_[from * m + to]
};

/// Composition "second o first": arc (i, j) whenever some k has (i, k) in
/// `first` and (k, j) in `second`. Matches matrix products through
/// graph_of_matrix(A2 * A1) == compose_graphs(graph_of_matrix(A1), graph_of_matrix(A2)).
DirectedGraph compose_graphs(const DirectedGraph& first, const DirectedGraph& second);

/// Component label per vertex (labels are 0..count-1, in Tarjan finishing order).
std::vector<std::size_t> strongly_connected_components(const DirectedGraph& g);
bool is_strongly_connected(const DirectedGraph& g);
bool is_complete(const DirectedGraph& g);

/// gamma(A): arc i -> j iff A(j, i) > 0. Throws InvalidInput on a negative
/// or non-finite entry, or a non-square matrix.
DirectedGraph graph_of_matrix(const Mat& A);

/// A time-varying sequence N(1), N(2), ... drawn from a finite pool of
/// neighbor graphs. Times are 1-based.
class GraphSchedule {
 public:
  enum class Kind { Constant, PeriodicList, SeededRandom };

  static GraphSchedule constant(DirectedGraph g);
  /// N(t) = graphs[(t - 1) mod L]. A horizon, if given, bounds t.
  static GraphSchedule periodic(std::vector<DirectedGraph> graphs, std::optional<std::size_t> horizon = std::nullopt);
  /// N(t) drawn uniformly from `pool` with std::mt19937_64(seed), for t <= horizon.
  static GraphSchedule seeded_random(std::vector<DirectedGraph> pool, std::uint64_t seed, std::size_t horizon);

  Kind kind() const noexcept { return kind_; }
  std::size_t vertex_count() const noexcept { return pool_.front().vertex_count(); }
  /// nullopt: unbounded.
  std::optional<std::size_t> horizon() const noexcept { return horizon_; }
  std::span<const DirectedGraph> pool() const noexcept { return pool_; }

  /// Index into pool() of N(t). Throws std::out_of_range when t == 0 or t
  /// exceeds the horizon.
  std::size_t pool_index(std::size_t t) const;
  const DirectedGraph& at(std::size_t t) const { return pool_[pool_index(t)]; }

 private:
  GraphSchedule() = default;
  Kind kind_ = Kind::Constant;
  std::vector<DirectedGraph> pool_;
  std::vector<std::size_t> drawn_;  // SeededRandom only
  std::optional<std::size_t> horizon_;
};

struct RjscCertificate {
  std::size_t window_length;  // l
  std::size_t offset;         // rho_0
  std::size_t verified_windows;
};

struct RjscFailure {
  std::size_t window_length;
  std::size_t offset;
  std::size_t failing_window;  // k
  std::size_t first_time;      // (k - 1) l + rho_0
  std::size_t last_time;       // k l + rho_0 - 1
};

using RjscResult = std::variant<RjscCertificate, RjscFailure>;

/// Composition of N(first_time), ..., N(last_time) (earliest applied first).
DirectedGraph compose_window(const GraphSchedule& schedule, std::size_t first_time, std::size_t last_time);

/// Checks that for k = 1..k_max the window N((k-1)l + rho0), ..., N(kl + rho0 - 1)
/// composes to a strongly connected graph. Throws InvalidInput for l, rho0 or
/// k_max of zero and std::out_of_range if the schedule horizon is shorter than
/// k_max * l + rho0 - 1.
RjscResult certify_rjsc(const GraphSchedule& schedule, std::size_t l, std::size_t rho0, std::size_t k_max);

/// Scans l = 1..l_max and rho0 = 1..l, returning the first certificate, or the
/// failure of the last pair tried if none exists. Pairs whose windows run past a
/// finite horizon are skipped; throws std::out_of_range if every pair does.
RjscResult search_rjsc(const GraphSchedule& schedule, std::size_t l_max, std::size_t k_max);

std::string describe(const RjscResult& result);

}  // namespace paracon
