#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sepauto/hermitian.hpp"
#include "sepauto/random.hpp"

using namespace sepauto;

namespace {

CMatrix random_matrix(int n, Rng& rng) { return complex_gaussian(n, n, rng); }

CMatrix diag(std::initializer_list<double> d) {
  CMatrix m = CMatrix::Zero(static_cast<int>(d.size()), static_cast<int>(d.size()));
  int i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return m;
}

}  // namespace

TEST(TensorShape, RejectsDegenerateFactors) {
  EXPECT_THROW(TensorShape({}), ShapeError);
  EXPECT_THROW(TensorShape({2, 1}), ShapeError);
  EXPECT_THROW(TensorShape::parse("2xx3"), ShapeError);
  EXPECT_EQ(TensorShape::parse("2x2x3").total(), 12);
  EXPECT_EQ(TensorShape::parse("3x2").str(), "3x2");
}

TEST(TensorShape, EncodeDecodeAreInverse) {
  for (const auto& shape : {TensorShape{2}, TensorShape{3, 2}, TensorShape{2, 3, 4}, TensorShape{2, 2, 2, 2}}) {
    for (int i = 0; i < shape.total(); ++i) EXPECT_EQ(shape.encode(shape.decode(i)), i);
  }
  // slot 0 is the most significant digit
  EXPECT_EQ(TensorShape({2, 3}).decode(4), (std::vector<int>{1, 1}));
}

TEST(Kron, Examples) {
  EXPECT_TRUE(kron(oracle::unit(2, 0, 0), oracle::unit(2, 0, 0)).isApprox(oracle::unit(4, 0, 0)));
  EXPECT_TRUE(kron(CMatrix(CMatrix::Identity(2, 2)), CMatrix(CMatrix::Identity(2, 2))).isApprox(CMatrix::Identity(4, 4)));
  EXPECT_TRUE(kron(diag({1, 2}), diag({3, 4})).isApprox(diag({3, 4, 6, 8})));
}

TEST(Kron, MatchesDefinitionAndIsAssociative) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const CMatrix a = random_matrix(2, rng), b = random_matrix(3, rng), c = random_matrix(2, rng);
    EXPECT_LT((kron(a, b) - oracle::kron(a, b)).norm(), 1e-14);
    EXPECT_LT((kron(kron(a, b), c) - kron(a, kron(b, c))).norm(), 1e-13);
  }
}

TEST(PartialTrace, ProductInputGivesScaledFactor) {
  Rng rng(5);
  const CMatrix a = random_hermitian_matrix(2, rng), b = random_hermitian_matrix(2, rng);
  const TensorShape s{2, 2};
  EXPECT_LT((partial_trace(kron(a, b), s, {0}) - b.trace() * a).norm(), 1e-13);
  EXPECT_LT((partial_trace(kron(a, b), s, {1}) - a.trace() * b).norm(), 1e-13);
}

TEST(PartialTrace, MaximallyMixedAndBell) {
  const TensorShape s{2, 2};
  EXPECT_TRUE(partial_trace(CMatrix(CMatrix::Identity(4, 4) / 4.0), s, {1}).isApprox(CMatrix::Identity(2, 2) / 2.0));
  const CMatrix bell = oracle::bell_projector();
  const CMatrix expected = oracle::trace_out_second(bell, 2, 2);
  EXPECT_TRUE(expected.isApprox(CMatrix::Identity(2, 2) / 2.0));
  EXPECT_LT((partial_trace(bell, s, {0}) - expected).norm(), 1e-15);
}

TEST(PartialTrace, MatchesIndexSummationOracle) {
  Rng rng(11);
  const CMatrix x = random_matrix(6, rng);
  const TensorShape s{2, 3};
  EXPECT_LT((partial_trace(x, s, {0}) - oracle::trace_out_second(x, 2, 3)).norm(), 1e-13);
  EXPECT_LT((partial_trace(x, s, {1}) - oracle::trace_out_first(x, 2, 3)).norm(), 1e-13);
  EXPECT_NEAR(std::abs(partial_trace(x, s, {0, 1}).trace() - x.trace()), 0.0, 1e-13);
}

TEST(PartialTrace, AdjointToEmbedding) {
  Rng rng(13);
  const TensorShape s{2, 3, 2};
  for (const Slots keep : {Slots{0}, Slots{1}, Slots{0, 2}, Slots{1, 2}}) {
    const CMatrix x = random_hermitian_matrix(s.total(), rng);
    const TensorShape sub = s.sub(keep);
    const CMatrix a = random_hermitian_matrix(sub.total(), rng);
    const cplx lhs = (partial_trace(x, s, keep) * a).trace();
    const cplx rhs = (x * embed(a, s, keep)).trace();
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10);
  }
}

TEST(PartialTrace, RejectsBadInput) {
  const TensorShape s{2, 2};
  EXPECT_THROW(partial_trace(CMatrix(CMatrix::Identity(3, 3)), s, {0}), ShapeError);
  EXPECT_THROW(partial_trace(CMatrix(CMatrix::Identity(4, 4)), s, {1, 0}), ShapeError);
  EXPECT_THROW(partial_trace(CMatrix(CMatrix::Identity(4, 4)), s, {2}), ShapeError);
}

TEST(PartialTranspose, ProductAndEmpty) {
  Rng rng(17);
  const CMatrix a = random_matrix(2, rng), b = random_matrix(2, rng);
  const TensorShape s{2, 2};
  EXPECT_LT((partial_transpose(kron(a, b), s, {1}) - kron(a, CMatrix(b.transpose()))).norm(), 1e-14);
  const CMatrix x = random_matrix(4, rng);
  EXPECT_EQ(partial_transpose(x, s, {}), x);
  EXPECT_LT((partial_transpose(x, s, {1}) - oracle::transpose_second(x, 2, 2)).norm(), 1e-15);
}

TEST(PartialTranspose, BellSpectrum) {
  const CMatrix pt = partial_transpose(oracle::bell_projector(), TensorShape{2, 2}, {1});
  // The summed matrix is the swap operator / 2, eigenvalues {-1/2, 1/2, 1/2, 1/2}.
  CMatrix swap = CMatrix::Zero(4, 4);
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 0.5;
  EXPECT_TRUE(pt.isApprox(swap));
  const RVector ev = HermitianOperator(pt).eigenvalues();
  EXPECT_NEAR(ev(0), -0.5, 1e-14);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(ev(i), 0.5, 1e-14);
}

TEST(PartialTranspose, InvolutionIsometryTrace) {
  Rng rng(19);
  const TensorShape s{2, 3, 2};
  for (const Slots slots : {Slots{0}, Slots{1}, Slots{2, 0}, Slots{0, 1, 2}}) {
    const CMatrix x = random_hermitian_matrix(s.total(), rng);
    const CMatrix y = partial_transpose(x, s, slots);
    EXPECT_LT((partial_transpose(y, s, slots) - x).norm(), 1e-13);
    EXPECT_NEAR(y.norm(), x.norm(), 1e-10);
    EXPECT_NEAR(std::abs(y.trace() - x.trace()), 0.0, 1e-12);
    EXPECT_LT((y - y.adjoint()).norm(), 1e-13);
  }
  EXPECT_THROW(partial_transpose(CMatrix(CMatrix::Identity(12, 12)), s, {1, 1}), ShapeError);
}

TEST(PermuteFactors, SwapOnProducts) {
  Rng rng(23);
  const CMatrix a = random_matrix(2, rng), b = random_matrix(3, rng);
  const TensorShape s{2, 3};
  EXPECT_EQ(permuted_shape(s, {1, 0}), (TensorShape{3, 2}));
  EXPECT_LT((permute_factors(kron(a, b), s, {1, 0}) - kron(b, a)).norm(), 1e-14);
  EXPECT_TRUE(permute_factors(CMatrix(CMatrix::Identity(6, 6)), s, {1, 0}).isApprox(CMatrix::Identity(6, 6)));
}

TEST(PermuteFactors, CyclicOnThreeQubits) {
  const TensorShape s{2, 2, 2};
  const CMatrix z = oracle::unit(2, 0, 0) - oracle::unit(2, 1, 1);
  const CMatrix x = kron(kron(z, oracle::unit(2, 0, 0)), CMatrix(CMatrix::Identity(2, 2))) / 2.0;
  const CMatrix got = permute_factors(x, s, {1, 2, 0});
  EXPECT_LT((got - oracle::cycle_three(x, 2)).norm(), 1e-15);
  // factors cycled: I ⊗ Z ⊗ E00 / 2
  EXPECT_LT((got - kron(kron(CMatrix(CMatrix::Identity(2, 2)), z), oracle::unit(2, 0, 0)) / 2.0).norm(), 1e-15);
}

TEST(PermuteFactors, PreservesSpectrumAndRejectsBadPermutations) {
  Rng rng(29);
  const TensorShape s{2, 3, 2};
  const CMatrix x = random_hermitian_matrix(12, rng);
  const RVector before = HermitianOperator(x).eigenvalues();
  const RVector after = HermitianOperator(permute_factors(x, s, {2, 0, 1})).eigenvalues();
  EXPECT_LT((before - after).norm(), 1e-12);
  EXPECT_THROW(permute_factors(x, s, {0, 0, 1}), ShapeError);
  EXPECT_THROW(permute_factors(x, s, {0, 1}), ShapeError);
}
