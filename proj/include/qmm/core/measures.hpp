#pragma once

// Entropies and distances between density operators. Natural logarithms
// throughout; `to_log_base` rescales when another unit is wanted.

#include <cmath>

#include "qmm/core/local_state.hpp"

namespace qmm {

/// Von Neumann entropy −Tr ρ ln ρ in nats. Eigenvalues at or below
/// cutoff·λ_max contribute nothing.
inline double entropy(const LocalState& s, double rel_cutoff = kSpectralCutoff) {
  if (s.is_scalar()) return 0.0;
  const RealVector lam = eigenvalues_hermitian(s.matrix());
  const double thr = rel_cutoff * std::max(lam.maxCoeff(), 0.0);
  double h = 0.0;
  for (Index k = 0; k < lam.size(); ++k)
    if (lam(k) > thr) h -= lam(k) * std::log(lam(k));
  return std::max(h, 0.0);
}

/// Converts a quantity in nats to `base` (e.g. 2 for bits).
inline double to_log_base(double nats, double base) { return nats / std::log(base); }

/// I(A:C|B) = S(AB) + S(BC) − S(B) − S(ABC) on reductions of `s`.
/// `b` may be empty, which gives the mutual information I(A:C).
inline double cmi(const LocalState& s, const SiteSet& a, const SiteSet& b, const SiteSet& c,
                  double rel_cutoff = kSpectralCutoff) {
  if (a.empty() || c.empty()) throw DomainError("cmi: A and C must be nonempty");
  if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c)) throw DomainError("cmi: A, B, C must be disjoint");
  if (!s.support().includes(a | b | c)) throw DomainError("cmi: sets not within support");
  auto h = [&](const SiteSet& keep) { return entropy(reduce(s, keep), rel_cutoff); };
  return h(a | b) + h(b | c) - h(b) - h(a | b | c);
}

inline void require_same_support(const LocalState& a, const LocalState& b, const char* what) {
  if (a.support() != b.support())
    throw SupportError(fmt::format("{}: supports {} and {} differ", what, to_string(a.support()), to_string(b.support())));
}

/// ‖a − b‖₁, the Schatten-1 norm of the difference (no factor ½).
inline double trace_distance(const LocalState& a, const LocalState& b) {
  require_same_support(a, b, "trace_distance");
  const Matrix diff = canonical(a).matrix() - canonical(b).matrix();
  return eigenvalues_hermitian(diff).cwiseAbs().sum();
}

/// F(a, b) = ‖√a √b‖₁, the sum of singular values. Going through the SVD
/// rather than Tr √(√a b √a) keeps rank-deficient inputs from contributing
/// square roots of roundoff.
inline double fidelity(const LocalState& a, const LocalState& b, double rel_cutoff = kSpectralCutoff) {
  require_same_support(a, b, "fidelity");
  auto root = [&](const LocalState& s) {
    return matrix_function(eigh(canonical(s).matrix()), [](double x) { return std::sqrt(x); }, rel_cutoff);
  };
  const Matrix x = root(a) * root(b);
  return Eigen::JacobiSVD<Matrix>(x).singularValues().sum();
}

}  // namespace qmm
