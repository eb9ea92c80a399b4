#pragma once

// Kernels acting on the trailing (least significant) tensor factor of a
// matrix. Callers `align` a state so the sites of interest come last; every
// kernel then reduces to one dense product on a reshaped view.

#include "qmm/core/types.hpp"

namespace qmm::ops {

/// (I_R ⊗ op) · x, where op acts on the trailing factor of dimension op.rows().
inline Matrix left_apply_trailing(const Matrix& op, const Matrix& x) {
  const Index k = op.rows();
  if (op.cols() != k || x.rows() % k != 0) throw DomainError("left_apply_trailing: shape mismatch");
  const Index blocks = (x.rows() / k) * x.cols();
  Matrix y(x.rows(), x.cols());
  Eigen::Map<Matrix>(y.data(), k, blocks).noalias() = op * Eigen::Map<const Matrix>(x.data(), k, blocks);
  return y;
}

/// x · (I_R ⊗ op), op acting on the trailing factor of the column index.
inline Matrix right_apply_trailing(const Matrix& x, const Matrix& op) {
  const Matrix xt = x.adjoint();
  return left_apply_trailing(op.adjoint(), xt).adjoint();
}

/// op · x · op†, op acting on the trailing factor.
inline Matrix sandwich_trailing(const Matrix& op, const Matrix& x) {
  return right_apply_trailing(left_apply_trailing(op, x), op.adjoint());
}

/// x ⊗ I_d with the identity as the new trailing factor.
inline Matrix kron_identity_trailing(const Matrix& x, Index d) {
  Matrix out = Matrix::Zero(x.rows() * d, x.cols() * d);
  for (Index j = 0; j < x.cols(); ++j)
    for (Index i = 0; i < x.rows(); ++i) {
      const Complex v = x(i, j);
      if (v == Complex(0.0)) continue;
      for (Index c = 0; c < d; ++c) out(i * d + c, j * d + c) = v;
    }
  return out;
}

/// Partial trace over the trailing factor of dimension d.
inline Matrix trace_trailing(const Matrix& x, Index d) {
  const Index r = x.rows() / d;
  const Index c = x.cols() / d;
  Matrix out = Matrix::Zero(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) {
      Complex acc = 0.0;
      for (Index t = 0; t < d; ++t) acc += x(i * d + t, j * d + t);
      out(i, j) = acc;
    }
  return out;
}

}  // namespace qmm::ops
