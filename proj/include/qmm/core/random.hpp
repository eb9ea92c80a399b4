#pragma once

// Seeded random density operators.

#include <random>

#include "qmm/core/local_state.hpp"

namespace qmm {

using Rng = std::mt19937_64;

inline Matrix ginibre(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  return g;
}

/// G G† / Tr with G a dim×rank Ginibre matrix. rank == dim gives full-rank
/// states almost surely.
inline Matrix random_density_matrix(Rng& rng, Index dim, Index rank = -1) {
  if (rank < 0) rank = dim;
  const Matrix g = ginibre(rng, dim, rank);
  Matrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho / rho.trace().real();
}

/// Haar-random pure state |ψ⟩⟨ψ|.
inline Matrix random_pure_density_matrix(Rng& rng, Index dim) { return random_density_matrix(rng, dim, 1); }

/// Random state on `sites` with per-site `dims` in canonical order.
inline LocalState random_state(Rng& rng, const SiteSet& sites, const std::vector<int>& dims, Index rank = -1) {
  Index total = 1;
  for (int d : dims) total *= d;
  return LocalState::unchecked(sites.ids(), dims, random_density_matrix(rng, total, rank));
}

/// Diagonal state from a probability vector.
inline Matrix diagonal_state(const RealVector& p) {
  return p.cast<Complex>().asDiagonal();
}

}  // namespace qmm
