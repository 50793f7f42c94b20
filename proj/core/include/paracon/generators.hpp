#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "paracon/graphs.hpp"
#include "paracon/maps.hpp"
#include "paracon/matrices.hpp"

// Seeded random instances for property checks, benchmarks and the
// regression scenarios.

namespace paracon::gen {

using Rng = std::mt19937_64;

Vec gaussian_vector(std::size_t n, Rng& rng);
Vec unit_vector(std::size_t n, Rng& rng, NormIndex p = NormIndex::finite(2.0));

/// Projector onto a random halfspace, ball or box that contains `anchor`.
ParaMap random_projector_containing(const Vec& anchor, Rng& rng);
/// m projectors whose sets all contain `anchor`.
std::vector<ParaMap> random_projectors_containing(std::size_t m, const Vec& anchor, Rng& rng);
/// m halfspace projectors whose boundaries pass within `slack` of `anchor`
/// (anchor inside every halfspace).
std::vector<ParaMap> random_halfspace_projectors(std::size_t m, const Vec& anchor, double slack, Rng& rng);

/// Self-arced graph with each non-self arc present with probability p.
DirectedGraph random_self_arced_graph(std::size_t m, double arc_probability, Rng& rng);
/// Self-arced strongly connected graph: a random Hamiltonian cycle plus
/// extra arcs with the given probability.
DirectedGraph random_strongly_connected_graph(std::size_t m, double extra_arc_probability, Rng& rng);

/// Stochastic matrix with random positive weights on the arcs of g.
StochasticMatrix random_stochastic(const DirectedGraph& g, Rng& rng);
/// Convex combination of I and a few permutation matrices; positive diagonal.
Mat random_doubly_stochastic(std::size_t m, Rng& rng);
Mat random_positive_stochastic(std::size_t m, Rng& rng);
/// Nonnegative matrix with each entry positive with probability `density`.
Mat random_nonnegative(std::size_t m, double density, Rng& rng);

struct LinearSystem {
  Mat A;
  Vec b;
  Vec solution;  // one solution of Ax = b
};

/// Random consistent system: A Gaussian (rows x n), b = A * solution.
LinearSystem random_consistent_system(std::size_t rows, std::size_t n, Rng& rng);

/// Splits the rows of A as evenly as possible across `agents` affine solve
/// maps (earlier agents get the extra rows).
std::vector<ParaMap> split_rows(const LinearSystem& system, std::size_t agents);

}  // namespace paracon::gen
