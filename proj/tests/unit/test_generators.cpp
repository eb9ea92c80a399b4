#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qmm/generators.hpp"

using namespace qmm;

namespace {

InstanceSpec spec_of(InstanceKind kind, int n, std::uint64_t seed = 1, double p = 0.0,
                     LayoutKind layout = LayoutKind::chain) {
  InstanceSpec s;
  s.kind = kind;
  s.layout = layout;
  s.n = n;
  s.seed = seed;
  s.p = p;
  return s;
}

// Graph state |G⟩ = Π CZ_e |+⟩^n over the given edges, built gate by gate.
Eigen::VectorXcd graph_state(int n, const std::vector<std::pair<int, int>>& edges) {
  const Index dim = Index{1} << n;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  for (const auto& [a, b] : edges)
    for (Index idx = 0; idx < dim; ++idx)
      if (((idx >> (n - a)) & 1) && ((idx >> (n - b)) & 1)) psi(idx) = -psi(idx);
  return psi;
}

}  // namespace

TEST(InstanceKind, Names) {
  EXPECT_EQ(parse_instance_kind("classical-chain"), InstanceKind::classical_chain);
  EXPECT_EQ(parse_instance_kind("cluster_state_1d"), InstanceKind::cluster_state_1d);
  EXPECT_EQ(to_string(InstanceKind::sequential), "sequential");
  EXPECT_THROW(parse_instance_kind("toric"), FormatError);
}

TEST(InstanceSpec, Validation) {
  EXPECT_THROW(gen(spec_of(InstanceKind::ghz, 8, 1, 1.0)), DomainError);
  EXPECT_THROW(gen(spec_of(InstanceKind::ghz, 8, 1, -0.1)), DomainError);
  EXPECT_THROW(gen(spec_of(InstanceKind::classical_chain, 3, 1, 0.0, LayoutKind::hexgrid)), LayoutError);
  EXPECT_THROW(gen(spec_of(InstanceKind::ghz, 16)), DomainError);
  EXPECT_THROW(gen(spec_of(InstanceKind::ghz, 7)), LayoutError);
  InstanceSpec qutrit = spec_of(InstanceKind::cluster_state_1d, 8);
  qutrit.d = 3;
  EXPECT_THROW(gen(qutrit), DomainError);
}

TEST(Generators, Deterministic) {
  for (auto kind : {InstanceKind::classical_chain, InstanceKind::sequential, InstanceKind::product}) {
    const Instance a = gen(spec_of(kind, 8, 99, 0.01));
    const Instance b = gen(spec_of(kind, 8, 99, 0.01));
    ASSERT_EQ(a.ms.entries().size(), b.ms.entries().size());
    for (std::size_t k = 0; k < a.ms.entries().size(); ++k)
      EXPECT_TRUE(a.ms.entries()[k].matrix() == b.ms.entries()[k].matrix());
    EXPECT_TRUE(a.global->matrix() == b.global->matrix());
    EXPECT_FALSE(gen(spec_of(kind, 8, 100)).global->matrix() == a.global->matrix());
  }
}

TEST(Generators, ClassicalChainIsVertexMarkov) {
  const Instance inst = gen(spec_of(InstanceKind::classical_chain, 8, 5));
  const Matrix& m = inst.global->matrix();
  EXPECT_LE((m - Matrix(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
  // Brute force: p(x_{k+1} | x₁…x_k) = p(x_{k+1} | x_k) for every prefix.
  const Eigen::VectorXd p = m.diagonal().real();
  const int n = 8;
  for (int k = 1; k < n; ++k) {
    // prefix marginals over the first k and k+1 bits
    auto marg = [&](int len) {
      Eigen::VectorXd q = Eigen::VectorXd::Zero(Index{1} << len);
      for (Index idx = 0; idx < p.size(); ++idx) q(idx >> (n - len)) += p(idx);
      return q;
    };
    const Eigen::VectorXd pk = marg(k), pk1 = marg(k + 1);
    // pair marginal of bits k and k+1
    Eigen::Matrix2d pair = Eigen::Matrix2d::Zero();
    for (Index idx = 0; idx < p.size(); ++idx) pair((idx >> (n - k)) & 1, (idx >> (n - k - 1)) & 1) += p(idx);
    for (Index prefix = 0; prefix < pk.size(); ++prefix)
      for (int next = 0; next < 2; ++next) {
        const int last = static_cast<int>(prefix & 1);
        const double cond_full = pk1(2 * prefix + next) / pk(prefix);
        const double cond_last = pair(last, next) / pair.row(last).sum();
        EXPECT_NEAR(cond_full, cond_last, 1e-12);
      }
  }
  for (const auto& c : check(inst.ms).cmi_values) EXPECT_LE(std::abs(c.value), 1e-12);
}

TEST(Generators, GhzMarginalsAndEntropies) {
  const Instance inst = gen(spec_of(InstanceKind::ghz, 8));
  EXPECT_LE((inst.global->matrix() - oracle::ghz_pure(8)).cwiseAbs().maxCoeff(), 1e-15);
  for (const LocalState& m : inst.ms.entries())
    EXPECT_LE((m.matrix() - oracle::ghz_mixture(4)).cwiseAbs().maxCoeff(), 1e-15);
  for (const auto& c : check(inst.ms).cmi_values) EXPECT_NEAR(c.value, 0.0, 1e-12);
}

TEST(Generators, GhzHexgridCmis) {
  const Instance inst = gen(spec_of(InstanceKind::ghz, 3, 1, 0.0, LayoutKind::hexgrid));
  EXPECT_EQ(inst.global->dim(), 512);
  for (const auto& c : check(inst.ms).cmi_values)
    if (!c.condition.b.empty()) EXPECT_NEAR(c.value, 0.0, 1e-9);
}

TEST(Generators, ClusterStateMatchesGraphStateOracle) {
  const Instance inst = gen(spec_of(InstanceKind::cluster_state_1d, 8));
  const Matrix want = oracle::proj(graph_state(8, {{2, 3}, {4, 5}, {6, 7}}));
  EXPECT_LE((inst.global->matrix() - want).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE(check(inst.ms).epsilon, 1e-7);
}

TEST(Generators, ExactKindsAreMarkovAtZeroNoise) {
  for (auto kind : {InstanceKind::classical_chain, InstanceKind::ghz, InstanceKind::cluster_state_1d,
                    InstanceKind::product})
    for (int n : {6, 8, 12}) {
      const Instance inst = gen(spec_of(kind, n, 3));
      EXPECT_LE(check(inst.ms).epsilon, 1e-7) << to_string(kind) << " n=" << n;
    }
  const Instance hex = gen(spec_of(InstanceKind::product, 3, 2, 0.0, LayoutKind::hexgrid));
  EXPECT_LE(check(hex.ms).epsilon, 1e-7);
}

TEST(Generators, ZeroNoiseMatchesExtraction) {
  for (auto layout : {LayoutKind::chain, LayoutKind::hexgrid}) {
    const Instance inst = gen(spec_of(InstanceKind::sequential, layout == LayoutKind::chain ? 8 : 2, 4, 0.0, layout));
    const MarginalSet again = extract_marginals(*inst.global, inst.ms.geometry());
    for (std::size_t k = 0; k < again.entries().size(); ++k)
      EXPECT_LE(trace_distance(again.entries()[k], inst.ms.entries()[k]), 1e-12);
    EXPECT_LE(check(inst.ms).max_gap(), 1e-12);
  }
}

TEST(Generators, DepolarizationActsOnStoredMarginals) {
  const double p = 0.2;
  const Instance clean = gen(spec_of(InstanceKind::sequential, 2, 6, 0.0, LayoutKind::hexgrid));
  const Instance noisy = gen(spec_of(InstanceKind::sequential, 2, 6, p, LayoutKind::hexgrid));
  const Matrix& c = clean.ms.stored(0).matrix();
  const Matrix want = (1 - p) * c + p * Matrix::Identity(c.rows(), c.cols()) / static_cast<double>(c.rows());
  EXPECT_LE((noisy.ms.stored(0).matrix() - want).cwiseAbs().maxCoeff(), 1e-15);
  const Geometry& g = noisy.ms.geometry();
  for (std::size_t k = 1; k < g.clusters().size(); ++k)
    EXPECT_LE(trace_distance(noisy.ms.marginal(k), reduce(noisy.ms.stored(0), g.cluster_sites(k))), 1e-15);
}

TEST(Generators, EpsilonMonotoneInNoise) {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    double prev = 0.0;
    for (double p : {1e-3, 3e-3, 1e-2, 3e-2}) {
      const double eps = check(gen(spec_of(InstanceKind::classical_chain, 8, seed, p)).ms).epsilon;
      EXPECT_GE(eps, prev) << "seed " << seed << " p=" << p;
      prev = eps;
    }
  }
}

TEST(GenInconsistent, Controls) {
  const MarginalSet base = gen(spec_of(InstanceKind::classical_chain, 8, 3)).ms;
  EXPECT_LE(check(replace_marginal(base, 2, base.stored(2))).max_gap(), 1e-12);
  const Geometry& g = base.geometry();
  const MarginalSet ortho(g, {oracle::qubits(1, 4, oracle::proj("0000")), oracle::qubits(3, 4, oracle::proj("0000")),
                              oracle::qubits(5, 4, oracle::proj("1111"))});
  EXPECT_NEAR(check(ortho).max_gap(), 2.0, 1e-14);
}

TEST(GenInconsistent, GapAndDeltaOverSeeds) {
  int large = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const MarginalSet ms = gen_inconsistent(seed);
    const Reconstruction r = reconstruct(ms);
    ASSERT_EQ(r.markov.consistency_gaps.size(), 2u);
    const ConsistencyGap& gap = r.markov.consistency_gaps.back();
    EXPECT_EQ(gap.second, ms.geometry().stored_clusters().back());
    if (gap.distance > 0.1) ++large;
    double affected = 0.0;
    for (const auto& [k, d] : r.report.per_cluster_distance)
      if (k == gap.first || k == gap.second) affected = std::max(affected, d);
    EXPECT_GE(affected, gap.distance - 1e-9) << "seed " << seed;
    EXPECT_TRUE(gen_inconsistent(seed).stored(2).matrix() == ms.stored(2).matrix());
  }
  EXPECT_GE(large, 99);
}
