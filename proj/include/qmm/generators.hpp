#pragma once

// Seeded instances with known ground truth.

#include <cstdint>

#include "qmm/core/random.hpp"
#include "qmm/reconstruct.hpp"

namespace qmm {

enum class InstanceKind { classical_chain, ghz, cluster_state_1d, sequential, product };

inline std::string_view to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::classical_chain: return "classical-chain";
    case InstanceKind::ghz: return "ghz";
    case InstanceKind::cluster_state_1d: return "cluster-state-1d";
    case InstanceKind::sequential: return "sequential";
    case InstanceKind::product: return "product";
  }
  return "?";
}

inline InstanceKind parse_instance_kind(std::string_view s) {
  std::string t(s);
  std::replace(t.begin(), t.end(), '_', '-');
  for (auto k : {InstanceKind::classical_chain, InstanceKind::ghz, InstanceKind::cluster_state_1d,
                 InstanceKind::sequential, InstanceKind::product})
    if (t == to_string(k)) return k;
  throw FormatError(fmt::format("unknown instance kind '{}'", s));
}

struct InstanceSpec {
  InstanceKind kind = InstanceKind::product;
  LayoutKind layout = LayoutKind::chain;
  int n = 8;            // vertices (chain) or cells per side (hex grid)
  int d = 2;
  int granularity = 1;  // hex grid only
  std::uint64_t seed = 0;
  double p = 0.0;       // depolarizing strength on stored marginals

  void validate() const {
    if (!(p >= 0.0 && p < 1.0)) throw DomainError(fmt::format("perturbation must lie in [0,1) (got {})", p));
    if (layout == LayoutKind::custom) throw LayoutError("generators need a chain or hexgrid layout");
    if (layout == LayoutKind::hexgrid &&
        (kind == InstanceKind::classical_chain || kind == InstanceKind::cluster_state_1d))
      throw LayoutError(fmt::format("{} instances are defined on chains only", to_string(kind)));
    if (kind == InstanceKind::cluster_state_1d && d != 2) throw DomainError("cluster-state-1d needs d = 2");
  }
};

struct Instance {
  std::optional<LocalState> global;  // the unperturbed source state
  MarginalSet ms;
};

/// Largest global dimension the generators will build densely.
inline constexpr Index kMaxGlobalDim = Index{1} << 14;

inline Geometry instance_geometry(const InstanceSpec& spec) {
  return spec.layout == LayoutKind::chain ? chain_geometry(spec.n, spec.d)
                                          : hex_geometry(spec.n, spec.d, spec.granularity);
}

/// ρ ↦ (1−p)ρ + p·I/dim on every stored marginal.
inline MarginalSet depolarize(const MarginalSet& ms, double p) {
  if (p == 0.0) return ms;
  std::vector<LocalState> out;
  for (const LocalState& s : ms.entries()) {
    const Index dim = s.dim();
    Matrix m = (1.0 - p) * s.matrix() + (p / static_cast<double>(dim)) * Matrix::Identity(dim, dim);
    out.push_back(LocalState::unchecked(s.sites(), s.dims(), std::move(m)));
  }
  return MarginalSet(ms.geometry(), std::move(out));
}

namespace detail {

inline Index global_dim(const Geometry& g) {
  double total = 1.0;
  for (const Vertex& v : g.vertices()) total *= v.dim;
  if (total > static_cast<double>(kMaxGlobalDim))
    throw DomainError(fmt::format("global dimension {} exceeds the dense limit {}", total, kMaxGlobalDim));
  return static_cast<Index>(total);
}

inline LocalState from_vector(const Geometry& g, const Eigen::VectorXcd& psi) {
  const SiteSet& v = g.vertex_set();
  return LocalState::unchecked(v.ids(), g.dims_of(v), psi * psi.adjoint());
}

/// p(x₁) Π p(x_{i+1}|x_i) on the vertices in order, embedded diagonally.
inline LocalState classical_chain(const Geometry& g, Rng& rng) {
  const Index dim = global_dim(g);
  const int n = static_cast<int>(g.vertices().size());
  const int d = g.vertices().front().dim;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  RealVector p0(d);
  for (int a = 0; a < d; ++a) p0(a) = unif(rng);
  p0 /= p0.sum();
  std::vector<Eigen::MatrixXd> steps;
  for (int k = 0; k + 1 < n; ++k) {
    Eigen::MatrixXd t(d, d);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) t(a, b) = unif(rng);
      t.row(a) /= t.row(a).sum();
    }
    steps.push_back(std::move(t));
  }
  RealVector prob(dim);
  std::vector<int> x(n, 0);
  for (Index idx = 0; idx < dim; ++idx) {
    Index r = idx;
    for (int k = n - 1; k >= 0; --k) {
      x[k] = static_cast<int>(r % d);
      r /= d;
    }
    double q = p0(x[0]);
    for (int k = 0; k + 1 < n; ++k) q *= steps[k](x[k], x[k + 1]);
    prob(idx) = q;
  }
  const SiteSet& v = g.vertex_set();
  return LocalState::unchecked(v.ids(), g.dims_of(v), diagonal_state(prob));
}

/// (|0…0⟩ + |1…1⟩)/√2.
inline LocalState ghz(const Geometry& g) {
  const Index dim = global_dim(g);
  Index ones = 0;
  for (const Vertex& v : g.vertices()) ones = ones * v.dim + 1;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(0) = psi(ones) = 1.0 / std::sqrt(2.0);
  return from_vector(g, psi);
}

/// Graph state with CZ on the cell-boundary edges (2i, 2i+1).
inline LocalState cluster_state_1d(const Geometry& g) {
  const Index dim = global_dim(g);
  const int n = static_cast<int>(g.vertices().size());
  Eigen::VectorXcd psi(dim);
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Index idx = 0; idx < dim; ++idx) {
    // vertex v (1-based) is bit n−v of idx
    auto bit = [&](int v) { return static_cast<int>((idx >> (n - v)) & 1); };
    int parity = 0;
    for (int v = 2; v + 1 <= n; v += 2) parity ^= bit(v) & bit(v + 1);
    psi(idx) = parity ? -amp : amp;
  }
  return from_vector(g, psi);
}

inline LocalState product(const Geometry& g, Rng& rng) {
  global_dim(g);
  LocalState out;
  for (const Cell& c : g.cells()) out = tensor(out, random_state(rng, c.sites, g.dims_of(c.sites)));
  return out;
}

/// Random marginals on every stored cluster, glued by the layout's proposed
/// string with Petz maps; the result is consistent by construction.
inline LocalState sequential(const Geometry& g, Rng& rng) {
  global_dim(g);
  std::vector<LocalState> seeds;
  for (std::size_t k : g.stored_clusters()) {
    const SiteSet s = g.cluster_sites(k);
    seeds.push_back(random_state(rng, s, g.dims_of(s)));
  }
  const MarginalSet raw(g, std::move(seeds));
  return evaluate(proposed_string(g), raw, RecoveryConfig::petz());
}

}  // namespace detail

inline Instance gen(const InstanceSpec& spec) {
  spec.validate();
  const Geometry g = instance_geometry(spec);
  Rng rng(spec.seed);
  LocalState global;
  switch (spec.kind) {
    case InstanceKind::classical_chain: global = detail::classical_chain(g, rng); break;
    case InstanceKind::ghz: global = detail::ghz(g); break;
    case InstanceKind::cluster_state_1d: global = detail::cluster_state_1d(g); break;
    case InstanceKind::sequential: global = detail::sequential(g, rng); break;
    case InstanceKind::product: global = detail::product(g, rng); break;
  }
  MarginalSet ms = depolarize(extract_marginals(global, g), spec.p);
  return {std::move(global), std::move(ms)};
}

inline MarginalSet replace_marginal(const MarginalSet& ms, std::size_t cluster, LocalState s) {
  return ms.with_marginal(cluster, std::move(s));
}

/// Classical chain (n = 8, d = 2) whose last cluster {[3],[4]} is replaced by
/// ψ ⊗ τ: a Haar-random pure state on the shared cell [3] and a random mixed
/// state on [4]. The Petz step that adds [4] then acts as X ↦ X ⊗ τ, so the
/// reconstruction carries the full overlap gap into that cluster's distance.
inline MarginalSet gen_inconsistent(std::uint64_t seed) {
  InstanceSpec spec;
  spec.kind = InstanceKind::classical_chain;
  spec.n = 8;
  spec.d = 2;
  spec.seed = seed;
  const MarginalSet base = gen(spec).ms;
  const Geometry& g = base.geometry();
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const std::size_t last = g.stored_clusters().back();
  const auto& cells = g.clusters()[last].cells;
  const SiteSet shared = g.cell_sites(cells.front());
  const SiteSet fresh = g.cell_sites(cells.back());
  const LocalState psi = LocalState::unchecked(shared.ids(), g.dims_of(shared),
                                               random_pure_density_matrix(rng, base.stored(last).dim_of(shared)));
  const LocalState tau = random_state(rng, fresh, g.dims_of(fresh));
  return replace_marginal(base, last, tensor(psi, tau));
}

}  // namespace qmm
