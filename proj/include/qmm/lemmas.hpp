#pragma once

// Numerical check of the derived string relations behind the 1D and 2D
// constructions. Each relation is evaluated at every valid index and the
// largest trace-distance gap is kept.

#include "qmm/reconstruct.hpp"

namespace qmm {

enum class Suite { oneD, twoD };

inline std::string_view to_string(Suite s) { return s == Suite::oneD ? "1d" : "2d"; }

struct LemmaResult {
  std::string id;
  std::string relation;  // the relation at its first index, for display
  double max_gap = 0.0;
  std::size_t instances = 0;
  std::optional<double> ratio;  // max_gap / ε
};

struct LemmaReport {
  Suite suite = Suite::oneD;
  double epsilon = 0.0;
  std::string map;
  std::vector<LemmaResult> lemmas;

  [[nodiscard]] double max_gap() const {
    double m = 0.0;
    for (const auto& l : lemmas) m = std::max(m, l.max_gap);
    return m;
  }
};

namespace detail {

struct LemmaRunner {
  const MarginalSet& ms;
  const RecoveryConfig& cfg;
  double epsilon;
  std::vector<LemmaResult> out;

  void begin(std::string id) { out.push_back(LemmaResult{std::move(id), {}, 0.0, 0, std::nullopt}); }

  void instance(const MarginalString& lhs, const MarginalString& rhs) {
    LemmaResult& r = out.back();
    if (r.instances == 0)
      r.relation = format_string(lhs, ms.geometry()) + "  ~  " + format_string(rhs, ms.geometry());
    r.max_gap = std::max(r.max_gap, relation_gap(lhs, rhs, ms, cfg));
    ++r.instances;
    if (epsilon > kEpsilonFloor) r.ratio = r.max_gap / epsilon;
  }
};

inline void suite_1d(LemmaRunner& run) {
  const Geometry& g = run.ms.geometry();
  const int k = static_cast<int>(g.cells().size());
  using namespace chain;
  run.begin("cell_consistency");
  for (int i = 2; i <= k - 1; ++i) run.instance({L(g, i)}, {R(g, i)});
  run.begin("forward_contraction");
  for (int i = 1; i <= k - 1; ++i) run.instance({R(g, i), L(g, i + 1), C(g, i)}, {L(g, i + 1)});
  run.begin("cell_exchange");
  for (int i = 1; i <= k - 1; ++i) run.instance({R(g, i), L(g, i + 1)}, {L(g, i + 1), R(g, i)});
  run.begin("backward_contraction");
  for (int i = 3; i <= k; ++i) run.instance({L(g, i), R(g, i - 1), C(g, i)}, {R(g, i - 1)});
}

inline void suite_2d(LemmaRunner& run) {
  const Geometry& g = run.ms.geometry();
  const int n = g.layout().n;
  using namespace hex;

  run.begin("inheritance_horizontal");
  for (int j = 2; j <= n - 1; ++j)
    for (int i = 1; i <= n - 1; ++i) run.instance({UR(g, i, j), UL(g, i + 1, j)}, {DL(g, i + 1, j), DR(g, i, j)});

  run.begin("inheritance_vertical");
  for (int j = 1; j <= n - 1; ++j)
    for (int i = 2; i <= n - 1; ++i) run.instance({UR(g, i, j), DR(g, i, j + 1)}, {DL(g, i, j + 1), UL(g, i, j)});

  for (int which = 0; which < 3; ++which) {
    run.begin(which == 0 ? "four_cell_permutation" : which == 1 ? "contraction_ld" : "contraction_ur");
    for (int j = 1; j <= n - 1; ++j)
      for (int i = 1; i <= n - 1; ++i) {
        const MarginalString fwd{UR(g, i, j), UL(g, i + 1, j), DR(g, i, j + 1), DL(g, i + 1, j + 1)};
        const MarginalString bwd{DL(g, i + 1, j + 1), DR(g, i, j + 1), UL(g, i + 1, j), UR(g, i, j)};
        if (which == 0) run.instance(fwd, bwd);
        if (which == 1)
          run.instance(fwd + C(g, i, j), {DL(g, i + 1, j + 1), UL(g, i + 1, j), DR(g, i, j + 1)});
        if (which == 2) run.instance(bwd + C(g, i + 1, j + 1), {UR(g, i, j), DR(g, i, j + 1), UL(g, i + 1, j)});
      }
  }

  run.begin("internal_reversal");
  for (int j = 2; j <= n - 1; ++j) run.instance(rows::up(g, j), rows::down_reversed(g, j));

  run.begin("forward_row_contraction");
  for (int j = 1; j <= n - 2; ++j)
    run.instance(rows::up(g, j) + rows::down(g, j + 1) + rows::contract(g, j), rows::up(g, j + 1));

  run.begin("row_exchange");
  for (int j = 1; j <= n - 1; ++j)
    run.instance(rows::up(g, j) + rows::down(g, j + 1), rows::down_reversed(g, j + 1) + rows::up_reversed(g, j));

  run.begin("backward_row_contraction");
  for (int j = 2; j <= n - 1; ++j)
    run.instance(rows::down_reversed(g, j + 1) + rows::up_reversed(g, j) + rows::contract(g, j + 1),
                 rows::down_reversed(g, j));

  run.begin("two_row");
  const MarginalString full = string_2d(g);
  for (int m = 1; m <= n - 1; ++m) {
    MarginalString lhs = full;
    for (int j = 1; j <= n; ++j)
      if (j != m && j != m + 1) lhs += rows::contract(g, j);
    run.instance(lhs, rows::up(g, m) + rows::down(g, m + 1));
  }

  run.begin("forward_supercell_contraction");
  for (int m = 1; m <= n - 1; ++m)
    for (int i = 1; i <= n - 2; ++i)
      run.instance({UR(g, i, m), DR(g, i, m + 1), UL(g, i + 1, m), DL(g, i + 1, m + 1), C(g, i, m), C(g, i, m + 1)},
                   {UR(g, i + 1, m), DR(g, i + 1, m + 1)});

  run.begin("supercell_exchange");
  for (int m = 1; m <= n - 1; ++m)
    for (int i = 1; i <= n - 2; ++i)
      run.instance({UR(g, i, m), DR(g, i, m + 1), UL(g, i + 1, m), DL(g, i + 1, m + 1)},
                   {UR(g, i + 1, m), DR(g, i + 1, m + 1), DR(g, i, m + 1), UR(g, i, m)});

  run.begin("backward_supercell_contraction");
  for (int m = 1; m <= n - 1; ++m)
    for (int i = 2; i <= n - 1; ++i)
      run.instance({DL(g, i + 1, m + 1), UL(g, i + 1, m), DR(g, i, m + 1), UR(g, i, m), C(g, i + 1, m + 1),
                    C(g, i + 1, m)},
                   {DL(g, i, m + 1), UL(g, i, m)});
}

}  // namespace detail

inline LemmaReport lemma_suite(const MarginalSet& ms, Suite suite, const RecoveryConfig& cfg = {}) {
  const LayoutKind want = suite == Suite::oneD ? LayoutKind::chain : LayoutKind::hexgrid;
  if (ms.geometry().layout().kind != want)
    throw LayoutError(fmt::format("{} suite needs a {} layout, got {}", to_string(suite), to_string(want),
                                  to_string(ms.geometry().layout().kind)));
  const double eps = check(ms).epsilon;
  detail::LemmaRunner run{ms, cfg, eps, {}};
  if (suite == Suite::oneD)
    detail::suite_1d(run);
  else
    detail::suite_2d(run);
  return LemmaReport{suite, eps, cfg.to_string(), std::move(run.out)};
}

}  // namespace qmm
