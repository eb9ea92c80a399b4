#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qmm/core/measures.hpp"
#include "qmm/core/random.hpp"

using namespace qmm;
using oracle::proj;

namespace {

LocalState q(int site, const Matrix& m) { return site_state(site, m); }

Matrix maxmixed(Index d) { return Matrix::Identity(d, d) / static_cast<double>(d); }

double maxabs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Tensor, ProductBasisState) {
  const LocalState s = tensor(q(1, proj("0")), q(2, proj("1")));
  EXPECT_EQ(s.support(), (SiteSet{1, 2}));
  EXPECT_LT(maxabs(s.matrix() - proj("01")), 1e-15);
}

TEST(Tensor, CanonicalOrderAfterReversedArguments) {
  const LocalState s = tensor(q(3, maxmixed(2)), q(1, maxmixed(2)));
  EXPECT_EQ(s.sites(), (std::vector<SiteId>{SiteId{1}, SiteId{3}}));
  EXPECT_LT(maxabs(s.matrix() - maxmixed(4)), 1e-15);
}

TEST(Tensor, CanonicalOrderPermutesFactors) {
  // |1⟩ on site 5 ⊗ |0⟩ on site 2 must read |01⟩ in the order (2,5).
  const LocalState s = tensor(q(5, proj("1")), q(2, proj("0")));
  EXPECT_LT(maxabs(s.matrix() - proj("01")), 1e-15);
}

TEST(Tensor, RoundTripThroughPartialTrace) {
  Rng rng(1);
  const LocalState a = random_state(rng, SiteSet{1, 2}, {2, 3});
  const LocalState b = random_state(rng, SiteSet{4}, {2});
  EXPECT_LE(trace_distance(partial_trace(tensor(a, b), SiteSet{4}), a), 1e-12);
}

TEST(Tensor, OverlapIsRejected) {
  EXPECT_THROW(tensor(q(1, proj("0")), q(1, proj("1"))), SupportError);
}

TEST(PartialTrace, BellPairGivesMaximallyMixed) {
  const Eigen::VectorXcd bell = (oracle::ket("00") + oracle::ket("11")) / std::sqrt(2.0);
  const LocalState s = oracle::qubits(1, 2, proj(bell));
  EXPECT_LT(maxabs(partial_trace(s, SiteSet{2}).matrix() - maxmixed(2)), 1e-15);
}

TEST(PartialTrace, ProductDropsFactorExactly) {
  Rng rng(2);
  const LocalState a = random_state(rng, SiteSet{1}, {3});
  const LocalState b = random_state(rng, SiteSet{2}, {2});
  EXPECT_LT(maxabs(partial_trace(tensor(a, b), SiteSet{1}).matrix() - b.matrix()), 1e-15);
}

TEST(PartialTrace, GhzThreeDropLast) {
  const LocalState s = oracle::qubits(1, 3, oracle::ghz_pure(3));
  const Matrix expect = 0.5 * (proj("00") + proj("11"));
  EXPECT_LT(maxabs(partial_trace(s, SiteSet{3}).matrix() - expect), 1e-15);
}

TEST(PartialTrace, Errors) {
  const LocalState s = oracle::qubits(1, 2, proj("00"));
  EXPECT_THROW(partial_trace(s, SiteSet{3}), DomainError);
  EXPECT_THROW(partial_trace(s, SiteSet{1, 2}), DomainError);
  EXPECT_TRUE(reduce(s, SiteSet{}).is_scalar());
}

TEST(PartialTrace, CommutesOnRandomStates) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const LocalState s = random_state(rng, SiteSet{1, 2, 3, 4}, {2, 2, 2, 2});
    const LocalState ab = partial_trace(partial_trace(s, SiteSet{1}), SiteSet{3});
    const LocalState ba = partial_trace(partial_trace(s, SiteSet{3}), SiteSet{1});
    ASSERT_LE(trace_distance(ab, ba), 1e-12);
  }
}

TEST(Align, SwapsTwoQubits) {
  const LocalState s = oracle::qubits(1, 2, proj("01"));
  const LocalState t = align(s, {SiteId{2}, SiteId{1}});
  EXPECT_LT(maxabs(t.matrix() - proj("10")), 1e-15);
}

TEST(Align, IdentityAndInvolution) {
  Rng rng(4);
  const LocalState s = random_state(rng, SiteSet{1, 2, 3}, {2, 3, 2});
  EXPECT_EQ(align(s, s.sites()).matrix(), s.matrix());
  const std::vector<SiteId> swap{SiteId{3}, SiteId{2}, SiteId{1}};
  EXPECT_EQ(align(align(s, swap), s.sites()).matrix(), s.matrix());
  EXPECT_THROW(align(s, {SiteId{1}, SiteId{2}}), DomainError);
}

TEST(Align, PreservesMeasures) {
  Rng rng(5);
  const LocalState a = random_state(rng, SiteSet{1, 2, 3}, {2, 3, 2});
  const LocalState b = random_state(rng, SiteSet{1, 2, 3}, {2, 3, 2});
  const std::vector<SiteId> order{SiteId{2}, SiteId{3}, SiteId{1}};
  const LocalState pa = align(a, order);
  EXPECT_NEAR(entropy(pa), entropy(a), 1e-12);
  EXPECT_NEAR(trace_distance(pa, b), trace_distance(a, b), 1e-12);
  EXPECT_NEAR(fidelity(pa, b), fidelity(a, b), 1e-12);
}

TEST(Spectral, TransformExamples) {
  Rng rng(6);
  const Matrix m = random_density_matrix(rng, 5);
  EXPECT_LT(maxabs(spectral_transform(m, [](double x) { return x; }) - m), 1e-10);
  Matrix d41 = Matrix::Zero(2, 2);
  d41(0, 0) = 4.0;
  d41(1, 1) = 1.0;
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = 2.0;
  expect(1, 1) = 1.0;
  EXPECT_LT(maxabs(spectral_transform(d41, [](double x) { return std::sqrt(x); }) - expect), 1e-14);
  Matrix d40 = Matrix::Zero(2, 2);
  d40(0, 0) = 4.0;
  expect.setZero();
  expect(0, 0) = 0.5;
  EXPECT_LT(maxabs(spectral_transform(d40, [](double x) { return 1.0 / std::sqrt(x); }) - expect), 1e-14);
}

TEST(Spectral, RejectsNonHermitian) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(spectral_transform(m, [](double x) { return x; }), InvalidStateError);
}

TEST(Spectral, DecompositionInvariants) {
  Rng rng(7);
  for (Index dim : {1, 2, 7, 16}) {
    const Matrix g = ginibre(rng, dim, dim);
    const Matrix h = g + g.adjoint();
    const SpectralDecomposition sd = eigh(h);
    const Matrix u = sd.eigenvectors;
    const Matrix back = u * sd.eigenvalues.cast<Complex>().asDiagonal() * u.adjoint();
    EXPECT_LE(maxabs(back - h), 1e-10 * maxabs(h));
    EXPECT_LE(maxabs(u.adjoint() * u - Matrix::Identity(dim, dim)), 1e-10);
    for (Index k = 1; k < dim; ++k) EXPECT_GE(sd.eigenvalues(k - 1), sd.eigenvalues(k));
  }
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(entropy(q(1, proj("0"))), 0.0, 1e-15);
  EXPECT_NEAR(entropy(oracle::qubits(1, 2, maxmixed(4))), std::log(4.0), 1e-12);
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 0.75;
  m(1, 1) = 0.25;
  EXPECT_NEAR(entropy(q(1, m)), 0.562335, 1e-6);
  EXPECT_NEAR(to_log_base(std::log(4.0), 2.0), 2.0, 1e-14);
}

TEST(Entropy, AdditiveOverTensorProducts) {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const LocalState a = random_state(rng, SiteSet{1, 2}, {2, 2});
    const LocalState b = random_state(rng, SiteSet{3}, {3});
    EXPECT_NEAR(entropy(tensor(a, b)), entropy(a) + entropy(b), 1e-9);
  }
}

TEST(Cmi, Examples) {
  Rng rng(9);
  const SiteSet a{1}, b{2}, c{3};
  LocalState prod = tensor(tensor(random_state(rng, a, {2}), random_state(rng, b, {2})), random_state(rng, c, {2}));
  EXPECT_NEAR(cmi(prod, a, b, c), 0.0, 1e-12);
  const LocalState ghz3 = oracle::qubits(1, 3, oracle::ghz_pure(3));
  EXPECT_NEAR(cmi(ghz3, a, b, c), std::log(2.0), 1e-12);
  const LocalState ghz4 = reduce(oracle::qubits(1, 4, oracle::ghz_pure(4)), SiteSet{1, 2, 3});
  EXPECT_NEAR(cmi(ghz4, a, b, c), 0.0, 1e-12);
  EXPECT_NEAR(cmi(ghz3, a, SiteSet{}, c), std::log(2.0), 1e-12);  // mutual information
  EXPECT_THROW(cmi(ghz3, a, a, c), DomainError);
  EXPECT_THROW(cmi(ghz3, SiteSet{}, b, c), DomainError);
}

TEST(Cmi, StrongSubadditivity) {
  Rng rng(10);
  const SiteSet a{1}, b{2}, c{3};
  double low = 1.0;
  for (const auto& dims : {std::vector<int>{2, 2, 2}, std::vector<int>{2, 3, 2}})
    for (int t = 0; t < 500; ++t) {
      const Index rank = 1 + static_cast<Index>(t % 12);
      low = std::min(low, cmi(random_state(rng, a | b | c, dims, rank), a, b, c));
    }
  EXPECT_GE(low, -1e-10);
}

TEST(TraceDistance, Examples) {
  const LocalState zero = q(1, proj("0"));
  EXPECT_EQ(trace_distance(zero, zero), 0.0);
  EXPECT_NEAR(trace_distance(zero, q(1, proj("1"))), 2.0, 1e-14);
  EXPECT_NEAR(trace_distance(zero, q(1, maxmixed(2))), 1.0, 1e-14);
  EXPECT_THROW(trace_distance(zero, q(2, proj("0"))), SupportError);
}

TEST(Fidelity, Examples) {
  const LocalState zero = q(1, proj("0"));
  EXPECT_NEAR(fidelity(zero, zero), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(zero, q(1, proj("1"))), 0.0, 1e-12);
  EXPECT_NEAR(fidelity(zero, q(1, maxmixed(2))), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Fidelity, SymmetricAndSandwiched) {
  Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    const Index rank = 1 + t % 4;
    const LocalState a = random_state(rng, SiteSet{1, 2}, {2, 2}, rank);
    const LocalState b = random_state(rng, SiteSet{1, 2}, {2, 2});
    const double f = fidelity(a, b);
    const double d = trace_distance(a, b);
    EXPECT_NEAR(f, fidelity(b, a), 1e-10);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-12);
    EXPECT_LE(2.0 * (1.0 - f), d + 1e-9);
    EXPECT_LE(d, 2.0 * std::sqrt(std::max(0.0, 1.0 - f * f)) + 1e-9);
  }
}

TEST(Sanitize, Examples) {
  Rng rng(12);
  const Matrix m = random_density_matrix(rng, 4);
  const LocalState s = sanitize({SiteId{1}, SiteId{2}}, {2, 2}, m);
  EXPECT_LT(maxabs(s.matrix() - m), 1e-12);

  Matrix near = Matrix::Zero(2, 2);
  near(0, 0) = 1.0 + 1e-10;
  near(1, 1) = -1e-10;
  Matrix clipped = Matrix::Zero(2, 2);
  clipped(0, 0) = 1.0;
  EXPECT_LT(maxabs(sanitize({SiteId{1}}, {2}, near).matrix() - clipped), 1e-15);

  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = 0.6;
  bad(1, 1) = 0.5;
  EXPECT_THROW(sanitize({SiteId{1}}, {2}, bad), InvalidStateError);
}

TEST(LocalState, CheckedRejectsInvalidMatrices) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 2.0;
  EXPECT_THROW(LocalState::checked({SiteId{1}}, {2}, m), InvalidStateError);
  EXPECT_THROW(LocalState::checked({SiteId{1}}, {3}, proj("0")), DomainError);
  EXPECT_THROW(LocalState::checked({SiteId{1}, SiteId{1}}, {2, 2}, proj("00")), SupportError);
}

TEST(SiteSet, Algebra) {
  const SiteSet a{3, 1, 2, 2};
  EXPECT_EQ(a.size(), 3u);
  EXPECT_EQ(to_string(a), "{1,2,3}");
  EXPECT_EQ((a | SiteSet{5}), (SiteSet{1, 2, 3, 5}));
  EXPECT_EQ((a & SiteSet{2, 5}), (SiteSet{2}));
  EXPECT_EQ((a - SiteSet{2}), (SiteSet{1, 3}));
  EXPECT_TRUE(a.includes(SiteSet{1, 3}));
  EXPECT_TRUE(a.disjoint(SiteSet{4}));
}
