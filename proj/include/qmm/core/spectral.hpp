#pragma once

// Hermitian eigendecomposition and spectral matrix functions.

#include <cmath>
#include <utility>

#include "qmm/core/types.hpp"

namespace qmm {

/// Default relative threshold below which eigenvalues count as zero.
inline constexpr double kSpectralCutoff = 1e-12;

/// Eigenvalues sorted descending with matching eigenvector columns.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;

  [[nodiscard]] double max_eigenvalue() const {
    return eigenvalues.size() == 0 ? 0.0 : eigenvalues(0);
  }
  [[nodiscard]] double min_eigenvalue() const {
    return eigenvalues.size() == 0 ? 0.0 : eigenvalues(eigenvalues.size() - 1);
  }
  /// Absolute threshold for "zero" eigenvalues given a relative cutoff.
  [[nodiscard]] double threshold(double rel_cutoff) const {
    return rel_cutoff * std::max(max_eigenvalue(), 0.0);
  }
};

/// Largest |m(i,j) - conj(m(j,i))|.
inline double hermiticity_defect(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Eigendecomposition of the Hermitian part of `m`. Deterministic for fixed input bits.
inline SpectralDecomposition eigh(const Matrix& m) {
  if (m.rows() != m.cols()) throw DomainError("eigh: matrix must be square");
  SpectralDecomposition out;
  if (m.rows() == 0) return out;
  Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw Error("eigh: eigensolver did not converge");
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

inline RealVector eigenvalues_hermitian(const Matrix& m) {
  if (m.rows() == 0) return {};
  Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("eigenvalues: eigensolver did not converge");
  return solver.eigenvalues().reverse();
}

/// U f(Λ) U†, where eigenvalues at or below `rel_cutoff`·λ_max map to zero.
///
/// `f` may return real or complex values; complex results are needed for the
/// imaginary powers used by rotated recovery maps.
template <class F>
Matrix matrix_function(const SpectralDecomposition& sd, F&& f, double rel_cutoff = kSpectralCutoff) {
  const Index n = sd.eigenvalues.size();
  const double thr = sd.threshold(rel_cutoff);
  Eigen::VectorXcd diag(n);
  for (Index k = 0; k < n; ++k) {
    const double lam = sd.eigenvalues(k);
    diag(k) = lam > thr ? Complex(f(lam)) : Complex(0.0);
  }
  return sd.eigenvectors * diag.asDiagonal() * sd.eigenvectors.adjoint();
}

/// Spectral transform of a Hermitian matrix.
template <class F>
Matrix spectral_transform(const Matrix& m, F&& f, double rel_cutoff = kSpectralCutoff,
                          double hermitian_tol = 1e-10) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (m.rows() > 0 && hermiticity_defect(m) > hermitian_tol * scale)
    throw InvalidStateError(
        fmt::format("spectral_transform: matrix not Hermitian (defect {:.3e})", hermiticity_defect(m)));
  return matrix_function(eigh(m), std::forward<F>(f), rel_cutoff);
}

/// λ^{(s + i t)}, the complex power used for rotated Petz maps. With t == 0
/// this is exactly λ^s.
inline Complex complex_power(double lambda, double s, double t) {
  const double mag = std::pow(lambda, s);
  if (t == 0.0) return {mag, 0.0};
  const double phase = t * std::log(lambda);
  return {mag * std::cos(phase), mag * std::sin(phase)};
}

/// Projector onto the eigenvectors whose eigenvalues exceed the cutoff.
inline Matrix support_projector(const SpectralDecomposition& sd, double rel_cutoff = kSpectralCutoff) {
  return matrix_function(sd, [](double) { return 1.0; }, rel_cutoff);
}

}  // namespace qmm
