#pragma once

// Density operators on multi-site registers and the structural operations on
// them: tensor products, partial traces and site reordering.

#include <cmath>
#include <numeric>
#include <optional>
#include <utility>

#include "qmm/core/spectral.hpp"
#include "qmm/core/types.hpp"

namespace qmm {

/// Tolerance of the LocalState invariants (Hermiticity, unit trace, positivity).
inline constexpr double kStateTolerance = 1e-10;

/// Density operator together with the sites it lives on.
///
/// The matrix is indexed in row-major site order over `sites()`: the first
/// site is the most significant digit. States produced by the library are in
/// canonical (ascending) order unless explicitly `align`ed elsewhere.
class LocalState {
 public:
  /// Scalar state 1 on the empty support.
  LocalState() : matrix_(Matrix::Ones(1, 1)) {}

  /// Builds a state and validates every invariant; throws InvalidStateError.
  static LocalState checked(std::vector<SiteId> sites, std::vector<int> dims, Matrix m,
                            double tol = kStateTolerance) {
    LocalState s = unchecked(std::move(sites), std::move(dims), std::move(m));
    if (auto why = s.violation(tol)) throw InvalidStateError(*why);
    return s;
  }

  /// Builds a state checking only the shape. Intended for results of
  /// operations that preserve the invariants mathematically.
  static LocalState unchecked(std::vector<SiteId> sites, std::vector<int> dims, Matrix m) {
    if (sites.size() != dims.size()) throw DomainError("LocalState: sites/dims length mismatch");
    Index total = 1;
    for (int d : dims) {
      if (d < 1) throw DomainError("LocalState: site dimension must be positive");
      total *= d;
    }
    if (m.rows() != total || m.cols() != total)
      throw DomainError(fmt::format("LocalState: matrix is {}x{}, expected side {}", m.rows(), m.cols(), total));
    if (SiteSet(sites).size() != sites.size()) throw SupportError("LocalState: repeated site");
    LocalState s;
    s.sites_ = std::move(sites);
    s.dims_ = std::move(dims);
    s.matrix_ = std::move(m);
    return s;
  }

  [[nodiscard]] const std::vector<SiteId>& sites() const { return sites_; }
  [[nodiscard]] const std::vector<int>& dims() const { return dims_; }
  [[nodiscard]] const Matrix& matrix() const { return matrix_; }
  [[nodiscard]] Index dim() const { return matrix_.rows(); }
  [[nodiscard]] SiteSet support() const { return SiteSet(sites_); }
  [[nodiscard]] bool is_scalar() const { return sites_.empty(); }

  [[nodiscard]] bool is_canonical() const { return std::is_sorted(sites_.begin(), sites_.end()); }

  [[nodiscard]] int dim_of(SiteId s) const {
    for (std::size_t k = 0; k < sites_.size(); ++k)
      if (sites_[k] == s) return dims_[k];
    throw DomainError(fmt::format("site {} not in support", to_int(s)));
  }

  /// Product of the local dimensions of `set` (all of which must be in the support).
  [[nodiscard]] Index dim_of(const SiteSet& set) const {
    Index d = 1;
    for (SiteId s : set) d *= dim_of(s);
    return d;
  }

  /// First violated invariant, if any.
  [[nodiscard]] std::optional<std::string> violation(double tol = kStateTolerance) const {
    if (!matrix_.allFinite()) return "matrix has non-finite entries";
    const double herm = hermiticity_defect(matrix_);
    if (herm > tol) return fmt::format("not Hermitian (max defect {:.3e})", herm);
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > tol) return fmt::format("trace {:.12g} differs from 1", tr);
    const double lmin = eigenvalues_hermitian(matrix_).minCoeff();
    if (lmin < -tol) return fmt::format("negative eigenvalue {:.3e}", lmin);
    return std::nullopt;
  }

 private:
  std::vector<SiteId> sites_;
  std::vector<int> dims_;
  Matrix matrix_;
};

namespace detail {

inline std::vector<Index> strides_of(const std::vector<int>& dims) {
  std::vector<Index> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

/// For every index of the register described by (`dims`, `strides`), the sum
/// of digit·stride. Enumerates digits in row-major order over `dims`.
inline std::vector<Index> offsets(const std::vector<int>& dims, const std::vector<Index>& strides) {
  Index total = 1;
  for (int d : dims) total *= d;
  std::vector<Index> out(static_cast<std::size_t>(total));
  std::vector<int> digit(dims.size(), 0);
  Index off = 0;
  for (Index i = 0; i < total; ++i) {
    out[static_cast<std::size_t>(i)] = off;
    for (std::size_t k = dims.size(); k-- > 0;) {
      if (++digit[k] < dims[k]) {
        off += strides[k];
        break;
      }
      off -= strides[k] * (dims[k] - 1);
      digit[k] = 0;
    }
  }
  return out;
}

inline std::size_t position_of(const std::vector<SiteId>& sites, SiteId s) {
  auto it = std::find(sites.begin(), sites.end(), s);
  if (it == sites.end()) throw DomainError(fmt::format("site {} not in support", to_int(s)));
  return static_cast<std::size_t>(it - sites.begin());
}

}  // namespace detail

/// Reorders the matrix of `s` so that its sites appear in `order`.
inline LocalState align(const LocalState& s, const std::vector<SiteId>& order) {
  if (order.size() != s.sites().size() || SiteSet(order) != s.support())
    throw DomainError("align: order is not a permutation of the support");
  if (order == s.sites()) return s;
  const auto old_strides = detail::strides_of(s.dims());
  std::vector<int> new_dims;
  std::vector<Index> mapped_strides;
  for (SiteId id : order) {
    const auto pos = detail::position_of(s.sites(), id);
    new_dims.push_back(s.dims()[pos]);
    mapped_strides.push_back(old_strides[pos]);
  }
  const auto src = detail::offsets(new_dims, mapped_strides);
  const Index n = s.dim();
  Matrix out(n, n);
  const Matrix& m = s.matrix();
  for (Index c = 0; c < n; ++c) {
    const Index sc = src[static_cast<std::size_t>(c)];
    for (Index r = 0; r < n; ++r) out(r, c) = m(src[static_cast<std::size_t>(r)], sc);
  }
  return LocalState::unchecked(order, std::move(new_dims), std::move(out));
}

/// Same state in ascending site order.
inline LocalState canonical(const LocalState& s) {
  if (s.is_canonical()) return s;
  return align(s, s.support().ids());
}

/// Partial trace onto `keep` (a subset of the support, possibly empty). The
/// result is canonical.
inline LocalState reduce(const LocalState& s, const SiteSet& keep) {
  const SiteSet support = s.support();
  if (!support.includes(keep)) throw DomainError("reduce: kept sites not in support");
  if (keep == support) return canonical(s);
  const SiteSet drop = support - keep;
  const auto strides = detail::strides_of(s.dims());
  std::vector<int> keep_dims, drop_dims;
  std::vector<Index> keep_strides, drop_strides;
  for (SiteId id : keep) {
    const auto pos = detail::position_of(s.sites(), id);
    keep_dims.push_back(s.dims()[pos]);
    keep_strides.push_back(strides[pos]);
  }
  for (SiteId id : drop) {
    const auto pos = detail::position_of(s.sites(), id);
    drop_dims.push_back(s.dims()[pos]);
    drop_strides.push_back(strides[pos]);
  }
  const auto kept = detail::offsets(keep_dims, keep_strides);
  const auto traced = detail::offsets(drop_dims, drop_strides);
  const Index k = static_cast<Index>(kept.size());
  Matrix out = Matrix::Zero(k, k);
  const Matrix& m = s.matrix();
  for (Index c = 0; c < k; ++c) {
    const Index bc = kept[static_cast<std::size_t>(c)];
    for (Index r = 0; r < k; ++r) {
      const Index br = kept[static_cast<std::size_t>(r)];
      Complex acc = 0.0;
      for (Index t : traced) acc += m(br + t, bc + t);
      out(r, c) = acc;
    }
  }
  return LocalState::unchecked(keep.ids(), std::move(keep_dims), std::move(out));
}

/// Traces out `drop`. `drop` must be a nonempty proper subset of the support;
/// a full trace is the scalar path (`reduce(s, {})`).
inline LocalState partial_trace(const LocalState& s, const SiteSet& drop) {
  const SiteSet support = s.support();
  if (!support.includes(drop)) throw DomainError(fmt::format("partial_trace: {} not within support {}", to_string(drop), to_string(support)));
  if (drop == support) throw DomainError("partial_trace: dropping the whole support; use the scalar trace");
  return reduce(s, support - drop);
}

/// Kronecker product of two matrices.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// a ⊗ b on the union of the supports, in canonical order.
inline LocalState tensor(const LocalState& a, const LocalState& b) {
  if (!a.support().disjoint(b.support()))
    throw SupportError(fmt::format("tensor: supports {} and {} overlap", to_string(a.support()), to_string(b.support())));
  std::vector<SiteId> sites = a.sites();
  sites.insert(sites.end(), b.sites().begin(), b.sites().end());
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return canonical(LocalState::unchecked(std::move(sites), std::move(dims), kron(a.matrix(), b.matrix())));
}

/// Symmetrizes, clips negative eigenvalues and renormalizes a nearly valid
/// density matrix. Violations larger than `tol` are rejected, never repaired.
inline LocalState sanitize(std::vector<SiteId> sites, std::vector<int> dims, const Matrix& m, double tol = 1e-8) {
  if (m.rows() != m.cols()) throw InvalidStateError("sanitize: matrix not square");
  if (!m.allFinite()) throw InvalidStateError("sanitize: non-finite entries");
  const double herm = m.rows() ? hermiticity_defect(m) : 0.0;
  if (herm > tol) throw InvalidStateError(fmt::format("sanitize: Hermiticity defect {:.3e} beyond tolerance", herm));
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol) throw InvalidStateError(fmt::format("sanitize: trace {:.12g} beyond tolerance", tr));
  Matrix h = 0.5 * (m + m.adjoint());
  SpectralDecomposition sd = eigh(h);
  if (sd.min_eigenvalue() < -tol)
    throw InvalidStateError(fmt::format("sanitize: eigenvalue {:.3e} beyond tolerance", sd.min_eigenvalue()));
  Matrix out = h;
  if (sd.min_eigenvalue() < 0.0) {
    Eigen::VectorXcd clipped(sd.eigenvalues.size());
    for (Index k = 0; k < clipped.size(); ++k) clipped(k) = std::max(sd.eigenvalues(k), 0.0);
    out = sd.eigenvectors * clipped.asDiagonal() * sd.eigenvectors.adjoint();
    out = 0.5 * (out + out.adjoint()).eval();
  }
  out /= out.trace().real();
  return canonical(LocalState::unchecked(std::move(sites), std::move(dims), std::move(out)));
}

/// Convenience: single-site state.
inline LocalState site_state(int site, const Matrix& m) {
  return LocalState::checked({SiteId{site}}, {static_cast<int>(m.rows())}, m);
}

}  // namespace qmm
