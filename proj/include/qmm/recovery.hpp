#pragma once

// Petz-family recovery channels Φ: B → BC built from a bipartite state ρ_BC.
//
//   rotated:  R_t(X) = ρ_BC^{(1+it)/2} (ρ_B^{-(1+it)/2} X ρ_B^{-(1-it)/2} ⊗ I_C) ρ_BC^{(1-it)/2}
//   petz:     R_0
//   averaged: ∫ β₀(t) R_t(X) dt,  β₀(t) = (π/2) / (cosh(πt) + 1)
//
// Every variant adds Tr[(I − P_B) X] ρ_BC, P_B the support projector of ρ_B,
// so that inputs with weight off the support of ρ_B are still mapped
// trace-preservingly.

#include <charconv>
#include <cmath>
#include <numbers>
#include <string_view>

#include "qmm/core/local_state.hpp"
#include "qmm/core/measures.hpp"
#include "qmm/core/operators.hpp"

namespace qmm {

struct RecoveryConfig {
  enum class Kind { petz, rotated, averaged };

  Kind kind = Kind::petz;
  double t = 0.0;            // rotated
  int nodes = 201;           // averaged: quadrature nodes K (odd, >= 3)
  double truncation = 10.0;  // averaged: integration window [-T, T]
  double cutoff = kSpectralCutoff;

  static RecoveryConfig petz() { return {}; }
  static RecoveryConfig rotated(double t) {
    RecoveryConfig c;
    c.kind = Kind::rotated;
    c.t = t;
    return c;
  }
  static RecoveryConfig averaged(int nodes = 201, double truncation = 10.0) {
    RecoveryConfig c;
    c.kind = Kind::averaged;
    c.nodes = nodes;
    c.truncation = truncation;
    return c;
  }

  void validate() const {
    if (kind == Kind::averaged) {
      if (nodes < 3 || nodes % 2 == 0) throw DomainError("averaged recovery: node count must be odd and >= 3");
      if (!(truncation > 0.0)) throw DomainError("averaged recovery: truncation must be positive");
    }
    if (!(cutoff >= 0.0 && cutoff < 1.0)) throw DomainError("recovery: cutoff must lie in [0, 1)");
  }

  /// "petz", "rotated:<t>" or "averaged:<K>,<T>".
  [[nodiscard]] std::string to_string() const {
    switch (kind) {
      case Kind::petz: return "petz";
      case Kind::rotated: return fmt::format("rotated:{}", t);
      case Kind::averaged: return fmt::format("averaged:{},{}", nodes, truncation);
    }
    return "petz";
  }

  static RecoveryConfig parse(std::string_view text) {
    auto number = [&](std::string_view s) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size())
        throw FormatError(fmt::format("bad number '{}' in map spec '{}'", s, text));
      return v;
    };
    if (text == "petz") return petz();
    if (text.starts_with("rotated:")) return rotated(number(text.substr(8)));
    if (text == "averaged") return averaged();
    if (text.starts_with("averaged:")) {
      const auto rest = text.substr(9);
      const auto comma = rest.find(',');
      if (comma == std::string_view::npos) throw FormatError(fmt::format("map spec '{}' needs K,T", text));
      const double k = number(rest.substr(0, comma));
      if (k != std::floor(k)) throw FormatError("averaged node count must be an integer");
      RecoveryConfig c = averaged(static_cast<int>(k), number(rest.substr(comma + 1)));
      c.validate();
      return c;
    }
    throw FormatError(fmt::format("unknown map spec '{}'", text));
  }
};

/// β₀(t) = (π/2) / (cosh(πt) + 1), a probability density on ℝ.
inline double rotation_density(double t) {
  return (std::numbers::pi / 2.0) / (std::cosh(std::numbers::pi * t) + 1.0);
}

/// (t, weight) pairs of the rotation mixture; weights sum to 1.
inline std::vector<std::pair<double, double>> rotation_nodes(const RecoveryConfig& cfg) {
  switch (cfg.kind) {
    case RecoveryConfig::Kind::petz: return {{0.0, 1.0}};
    case RecoveryConfig::Kind::rotated: return {{cfg.t, 1.0}};
    case RecoveryConfig::Kind::averaged: break;
  }
  cfg.validate();
  const int k = cfg.nodes;
  const double h = 2.0 * cfg.truncation / (k - 1);
  std::vector<std::pair<double, double>> out;
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    const double t = -cfg.truncation + h * i;
    const double w = h * rotation_density(t) * ((i == 0 || i == k - 1) ? 0.5 : 1.0);
    out.emplace_back(t, w);
    total += w;
  }
  for (auto& [t, w] : out) w /= total;
  return out;
}

struct CptpReport {
  double choi_min_eigenvalue = 0.0;
  double trace_deviation = 0.0;
};

/// Recovery channel from operators on `b` to operators on `b ∪ c`, defined by
/// a state on `b ∪ c`. Immutable; `apply` may be called concurrently.
class RecoveryMap {
 public:
  RecoveryMap(const LocalState& rho_bc, SiteSet b, SiteSet c, RecoveryConfig cfg = {})
      : b_(std::move(b)), c_(std::move(c)), cfg_(cfg) {
    cfg_.validate();
    if (c_.empty()) throw DomainError("build_recovery: C must be nonempty");
    if (!b_.disjoint(c_) || (b_ | c_) != rho_bc.support())
      throw DomainError(fmt::format("build_recovery: B {} and C {} do not partition the support {}",
                                    to_string(b_), to_string(c_), to_string(rho_bc.support())));
    if (rho_bc.matrix().trace().real() <= 0.0 || rho_bc.matrix().cwiseAbs().maxCoeff() == 0.0)
      throw InvalidStateError("build_recovery: rank-0 base state");

    base_ = canonical(rho_bc);
    std::vector<SiteId> order = b_.ids();
    order.insert(order.end(), c_.ids().begin(), c_.ids().end());
    const LocalState aligned = align(base_, order);
    rho_bc_ = aligned.matrix();
    for (SiteId s : b_) b_dims_.push_back(base_.dim_of(s));
    for (SiteId s : c_) c_dims_.push_back(base_.dim_of(s));
    db_ = base_.dim_of(b_);
    dc_ = base_.dim_of(c_);

    const Matrix rho_b = ops::trace_trailing(rho_bc_, dc_);
    const SpectralDecomposition sd_b = eigh(rho_b);
    const SpectralDecomposition sd_bc = eigh(rho_bc_);
    const Matrix proj = support_projector(sd_b, cfg_.cutoff);
    off_support_ = Matrix::Identity(db_, db_) - proj;
    rank_deficient_ = off_support_.cwiseAbs().maxCoeff() > 1e-14;

    for (const auto& [t, w] : rotation_nodes(cfg_)) {
      Branch br;
      br.weight = w;
      br.inner = matrix_function(sd_b, [t = t](double x) { return complex_power(x, -0.5, -0.5 * t); }, cfg_.cutoff);
      br.outer = matrix_function(sd_bc, [t = t](double x) { return complex_power(x, 0.5, 0.5 * t); }, cfg_.cutoff);
      branches_.push_back(std::move(br));
    }
  }

  [[nodiscard]] const SiteSet& b_sites() const { return b_; }
  [[nodiscard]] const SiteSet& c_sites() const { return c_; }
  [[nodiscard]] const LocalState& base_state() const { return base_; }
  [[nodiscard]] const RecoveryConfig& config() const { return cfg_; }

  /// Extends `s` from B to B ∪ C, acting as the identity on the rest of its support.
  [[nodiscard]] LocalState apply(const LocalState& s) const {
    const SiteSet support = s.support();
    if (!support.includes(b_))
      throw DomainError(fmt::format("apply_recovery: B {} not within support {}", to_string(b_), to_string(support)));
    if (!support.disjoint(c_))
      throw DomainError(fmt::format("apply_recovery: C {} overlaps support {}", to_string(c_), to_string(support)));
    for (SiteId id : b_)
      if (s.dim_of(id) != base_.dim_of(id)) throw DomainError("apply_recovery: dimension mismatch on B");

    const SiteSet rest = support - b_;
    std::vector<SiteId> order = rest.ids();
    order.insert(order.end(), b_.ids().begin(), b_.ids().end());
    const LocalState aligned = align(s, order);
    const Index rest_dim = aligned.dim() / db_;

    Matrix out = core(aligned.matrix(), rest_dim);
    out = 0.5 * (out + out.adjoint()).eval();

    std::vector<int> dims;
    for (SiteId id : rest) dims.push_back(s.dim_of(id));
    dims.insert(dims.end(), b_dims_.begin(), b_dims_.end());
    dims.insert(dims.end(), c_dims_.begin(), c_dims_.end());
    order.insert(order.end(), c_.ids().begin(), c_.ids().end());
    return canonical(LocalState::unchecked(std::move(order), std::move(dims), std::move(out)));
  }

  /// Φ on an arbitrary operator of B (ascending site order); the result is
  /// indexed over B followed by C.
  [[nodiscard]] Matrix apply_operator(const Matrix& x) const {
    if (x.rows() != db_ || x.cols() != db_) throw DomainError("apply_operator: operator dimension mismatch");
    return core(x, 1);
  }

  /// Choi matrix Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|).
  [[nodiscard]] Matrix choi() const {
    const Index out_dim = db_ * dc_;
    Matrix j = Matrix::Zero(db_ * out_dim, db_ * out_dim);
    for (Index r = 0; r < db_; ++r)
      for (Index c = 0; c < db_; ++c) {
        Matrix e = Matrix::Zero(db_, db_);
        e(r, c) = 1.0;
        j.block(r * out_dim, c * out_dim, out_dim, out_dim) = apply_operator(e);
      }
    return j;
  }

  /// Complete positivity and trace preservation, measured on the Choi matrix.
  [[nodiscard]] CptpReport certify() const {
    CptpReport rep;
    const Matrix j = choi();
    rep.choi_min_eigenvalue = eigenvalues_hermitian(j).minCoeff();
    const Index out_dim = db_ * dc_;
    double dev = hermiticity_defect(j);
    for (Index r = 0; r < db_; ++r)
      for (Index c = 0; c < db_; ++c) {
        const Complex tr = j.block(r * out_dim, c * out_dim, out_dim, out_dim).trace();
        dev = std::max(dev, std::abs(tr - Complex(r == c ? 1.0 : 0.0)));
      }
    rep.trace_deviation = dev;
    return rep;
  }

 private:
  struct Branch {
    double weight = 1.0;
    Matrix inner;  // ρ_B^{-(1+it)/2}
    Matrix outer;  // ρ_BC^{(1+it)/2}
  };

  // x is indexed over (rest, B); the result over (rest, B, C).
  [[nodiscard]] Matrix core(const Matrix& x, Index rest_dim) const {
    const Index n_out = rest_dim * db_ * dc_;
    Matrix total = Matrix::Zero(n_out, n_out);
    for (const Branch& br : branches_) {
      Matrix y = ops::right_apply_trailing(ops::left_apply_trailing(br.inner, x), br.inner.adjoint());
      Matrix z = ops::kron_identity_trailing(y, dc_);
      z = ops::right_apply_trailing(ops::left_apply_trailing(br.outer, z), br.outer.adjoint());
      if (branches_.size() == 1)
        total = std::move(z);
      else
        total += br.weight * z;
    }
    if (rank_deficient_) {
      const Matrix leak = ops::trace_trailing(ops::left_apply_trailing(off_support_, x), db_);
      total += kron(leak, rho_bc_);
    }
    return total;
  }

  SiteSet b_;
  SiteSet c_;
  RecoveryConfig cfg_;
  LocalState base_;
  Matrix rho_bc_;  // ordered (B, C)
  std::vector<int> b_dims_;
  std::vector<int> c_dims_;
  Index db_ = 1;
  Index dc_ = 1;
  Matrix off_support_;
  bool rank_deficient_ = false;
  std::vector<Branch> branches_;
};

inline RecoveryMap build_recovery(const LocalState& rho_bc, const SiteSet& b, const SiteSet& c,
                                  const RecoveryConfig& cfg = {}) {
  return RecoveryMap(rho_bc, b, c, cfg);
}

inline LocalState apply_recovery(const RecoveryMap& m, const LocalState& s) { return m.apply(s); }

struct FidelityGap {
  double bound_lhs = 0.0;  // −2 ln F(ρ_ABC, (id_A ⊗ Φ)(ρ_AB))
  double cmi = 0.0;        // I(A:C|B)
};

/// Compares the recovery fidelity of the map built from ρ_BC with I(A:C|B).
inline FidelityGap recovery_fidelity_gap(const LocalState& rho_abc, const SiteSet& a, const SiteSet& b,
                                         const SiteSet& c, const RecoveryConfig& cfg = {}) {
  if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c) || (a | b | c) != rho_abc.support())
    throw DomainError("recovery_fidelity_gap: A, B, C must partition the support");
  const RecoveryMap map(reduce(rho_abc, b | c), b, c, cfg);
  const LocalState recovered = map.apply(reduce(rho_abc, a | b));
  const double f = fidelity(rho_abc, recovered, cfg.cutoff);
  FidelityGap out;
  out.bound_lhs = -2.0 * std::log(f);
  out.cmi = cmi(rho_abc, a, b, c, cfg.cutoff);
  return out;
}

}  // namespace qmm
