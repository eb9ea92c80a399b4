#pragma once

// The proposed global states of the 1D and 2D constructions and the
// δ-consistency report comparing their cluster reductions with the inputs.

#include "qmm/strings.hpp"

namespace qmm {

/// [1]^R [2]^L … [k]^L on a chain geometry.
inline MarginalString string_1d(const Geometry& g, int num_cells) {
  if (num_cells < 2) throw LayoutError(fmt::format("string_1d: need at least 2 cells (got {})", num_cells));
  MarginalString s{chain::R(g, 1)};
  for (int i = 2; i <= num_cells; ++i) s += chain::L(g, i);
  return s;
}

inline MarginalString string_1d(const Geometry& g) { return string_1d(g, static_cast<int>(g.cells().size())); }

namespace rows {

/// [:,j]^U = [1,j]^UR [2,j]^UL … [n,j]^UL, defined for j ≤ n−1.
inline MarginalString up(const Geometry& g, int j) {
  const int n = g.layout().n;
  MarginalString s{hex::UR(g, 1, j)};
  for (int i = 2; i <= n; ++i) s += hex::UL(g, i, j);
  return s;
}

/// [:,j]^D = [1,j]^DR [2,j]^DL … [n,j]^DL, defined for j ≥ 2.
inline MarginalString down(const Geometry& g, int j) {
  const int n = g.layout().n;
  MarginalString s{hex::DR(g, 1, j)};
  for (int i = 2; i <= n; ++i) s += hex::DL(g, i, j);
  return s;
}

/// Reversed row [:̄,j]^U = [n,j]^UL [n−1,j]^UR … [1,j]^UR.
inline MarginalString up_reversed(const Geometry& g, int j) {
  const int n = g.layout().n;
  MarginalString s{hex::UL(g, n, j)};
  for (int i = n - 1; i >= 1; --i) s += hex::UR(g, i, j);
  return s;
}

/// Reversed row [:̄,j]^D = [n,j]^DL [n−1,j]^DR … [1,j]^DR.
inline MarginalString down_reversed(const Geometry& g, int j) {
  const int n = g.layout().n;
  MarginalString s{hex::DL(g, n, j)};
  for (int i = n - 1; i >= 1; --i) s += hex::DR(g, i, j);
  return s;
}

/// [:,j]^{-1}: every cell of row j traced out.
inline MarginalString contract(const Geometry& g, int j) {
  MarginalString s;
  for (int i = 1; i <= g.layout().n; ++i) s += hex::C(g, i, j);
  return s;
}

}  // namespace rows

/// [:,1]^U [:,2]^D … [:,n]^D on a hex geometry, built from the bottom row up.
inline MarginalString string_2d(const Geometry& g) {
  const int n = g.layout().n;
  MarginalString s = rows::up(g, 1);
  for (int j = 2; j <= n; ++j) s += rows::down(g, j);
  return s;
}

/// The layout's proposed string.
inline MarginalString proposed_string(const Geometry& g) {
  switch (g.layout().kind) {
    case LayoutKind::chain: return string_1d(g);
    case LayoutKind::hexgrid: return string_2d(g);
    case LayoutKind::custom: break;
  }
  throw LayoutError("no proposed string for a custom layout; supply one explicitly");
}

/// Size parameter of the δ bounds: vertex count n (chain) or n² (hex grid);
/// the vertex count for custom layouts.
inline double size_parameter(const Geometry& g) {
  switch (g.layout().kind) {
    case LayoutKind::chain: return g.layout().n;
    case LayoutKind::hexgrid: return static_cast<double>(g.layout().n) * g.layout().n;
    case LayoutKind::custom: break;
  }
  return static_cast<double>(g.vertices().size());
}

/// Below this ε the ratio δ/(nε) is reported as absent.
inline constexpr double kEpsilonFloor = 1e-12;

struct ConsistencyReport {
  std::vector<std::pair<std::size_t, double>> per_cluster_distance;  // stored cluster → ‖ρ^Ā − σ^Ā‖₁
  double delta = 0.0;
  double epsilon = 0.0;
  double size_param = 0.0;
  std::optional<double> ratio;  // δ / (size_param · ε)
  std::string string_text;
  std::string map;
};

struct Reconstruction {
  LocalState global;
  ConsistencyReport report;
  MarkovReport markov;
};

/// Compares the stored-cluster reductions of `global` with `ms`.
inline ConsistencyReport compare_marginals(const LocalState& global, const MarginalSet& ms, double epsilon) {
  ConsistencyReport rep;
  const Geometry& g = ms.geometry();
  for (std::size_t k : g.stored_clusters()) {
    const double d = trace_distance(reduce(global, g.cluster_sites(k)), ms.stored(k));
    rep.per_cluster_distance.emplace_back(k, d);
    rep.delta = std::max(rep.delta, d);
  }
  rep.epsilon = epsilon;
  rep.size_param = size_parameter(g);
  if (epsilon > kEpsilonFloor) rep.ratio = rep.delta / (rep.size_param * epsilon);
  return rep;
}

inline Reconstruction reconstruct(const MarginalSet& ms, const RecoveryConfig& cfg = {},
                                  const std::optional<MarginalString>& custom = std::nullopt,
                                  double log_base = std::exp(1.0)) {
  const Geometry& g = ms.geometry();
  const MarginalString str = custom ? *custom : proposed_string(g);
  LocalState global = evaluate(str, ms, cfg);
  if (global.support() != g.vertex_set())
    throw StringError(fmt::format("reconstruction string ends on {} instead of the vertex set",
                                  to_string(global.support())));
  MarkovReport markov = check(ms, log_base);
  ConsistencyReport rep = compare_marginals(global, ms, markov.epsilon);
  rep.string_text = format_string(str, g);
  rep.map = cfg.to_string();
  return {std::move(global), std::move(rep), std::move(markov)};
}

}  // namespace qmm
