#include <gtest/gtest.h>

#include "clusterlab/hamiltonians.hpp"
#include "oracle.hpp"

using namespace clusterlab;

TEST(PauliMul, XTimesZIsMinusIY) {
  auto x = PauliString::parse("X");
  auto z = PauliString::parse("Z");
  auto p = pauli_mul(x, z);
  EXPECT_EQ(p.letters(), "Y");
  EXPECT_EQ(p.phase(), cplx(0, -1));
}

TEST(PauliMul, RightHandedConvention) {
  auto p = pauli_mul(PauliString::parse("X"), PauliString::parse("Y"));
  EXPECT_EQ(p, PauliString::parse("+iZ"));
}

TEST(PauliMul, IdentityIsNeutral) {
  auto p = PauliString::parse("-iXYZI");
  EXPECT_EQ(pauli_mul(PauliString(4), p), p);
  EXPECT_EQ(pauli_mul(p, PauliString(4)), p);
}

TEST(PauliMul, DualPairProductMatchesDenseOracle) {
  // i * mu_1^x * mu_1^z on two sites, mu_1^x = Z_1 and mu_1^z = X_1 X_2.
  auto mux = PauliString::parse("ZI");
  auto muz = PauliString::parse("XX");
  auto p = pauli_mul(mux, muz).times_i(1);
  Eigen::MatrixXcd expect = cplx(0, 1) * oracle::dense("ZI") * oracle::dense("XX");
  EXPECT_LT((oracle::dense(p) - expect).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(p, PauliString::parse("-YX"));
}

TEST(PauliMul, LengthMismatchRejected) {
  EXPECT_THROW(pauli_mul(PauliString(2), PauliString(3)), std::invalid_argument);
  EXPECT_THROW(commutation_class(PauliString(2), PauliString(3)), std::invalid_argument);
  EXPECT_THROW(apply_pauli(PauliString(2), StateVector(3)), std::invalid_argument);
}

TEST(ApplyPauli, SingleSiteActions) {
  auto zero = StateVector::basis(1, 0);
  auto z = apply_pauli(PauliString::parse("Z"), zero);
  EXPECT_EQ(z[0], cplx(1, 0));
  auto x = apply_pauli(PauliString::parse("X"), zero);
  EXPECT_EQ(x[1], cplx(1, 0));
  EXPECT_EQ(x[0], cplx(0, 0));
  auto y = apply_pauli(PauliString::parse("Y"), zero);
  EXPECT_EQ(y[1], cplx(0, 1));
}

TEST(ApplyPauli, FirstSiteIsLeastSignificantBit) {
  auto v = apply_pauli(PauliString::parse("XII"), StateVector::basis(3, 0));
  EXPECT_EQ(v[1], cplx(1, 0));
  v = apply_pauli(PauliString::parse("IIX"), StateVector::basis(3, 0));
  EXPECT_EQ(v[4], cplx(1, 0));
}

TEST(ApplyPauli, MatchesKroneckerOracle) {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 10; ++rep) {
      auto p = oracle::random_string(rng, n);
      auto v = oracle::random_state(rng, n);
      auto got = oracle::to_eigen(apply_pauli(p, v));
      Eigen::VectorXcd want = oracle::dense(p) * oracle::to_eigen(v);
      EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(Commutation, Basics) {
  EXPECT_EQ(commutation_class(PauliString::parse("X"), PauliString::parse("Z")), Commutation::anticommuting);
  EXPECT_EQ(commutation_class(PauliString::parse("XI"), PauliString::parse("IX")), Commutation::commuting);
}

TEST(Commutation, NeighbouringStabilizersMatchDenseCommutator) {
  const auto ks = stabilizer_list(ChainSpec::chain(5, 0.0, Boundary::periodic));
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const auto& a = ks[i];
    const auto& b = ks[(i + 1) % ks.size()];
    EXPECT_EQ(commutation_class(a, b), Commutation::commuting);
    Eigen::MatrixXcd c = oracle::dense(a) * oracle::dense(b) - oracle::dense(b) * oracle::dense(a);
    EXPECT_LT(c.cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(PauliProperties, ProductOrderAndCommutation) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 500; ++rep) {
    const int n = 1 + rep % 12;
    auto a = oracle::random_string(rng, n);
    auto b = oracle::random_string(rng, n);
    auto ab = pauli_mul(a, b);
    auto ba = pauli_mul(b, a);
    EXPECT_EQ(ab.letters(), ba.letters());
    if (commutation_class(a, b) == Commutation::commuting) EXPECT_EQ(ab.phase(), ba.phase());
    else EXPECT_EQ(ab.phase(), -ba.phase());
  }
}

TEST(PauliProperties, ApplyIsAHomomorphism) {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 1 + rep % 10;
    auto a = oracle::random_string(rng, n);
    auto b = oracle::random_string(rng, n);
    auto v = oracle::random_state(rng, n);
    auto lhs = apply_pauli(pauli_mul(a, b), v);
    auto rhs = apply_pauli(a, apply_pauli(b, v));
    double dev = 0.0;
    for (std::size_t i = 0; i < v.dimension(); ++i) dev = std::max(dev, std::abs(lhs[i] - rhs[i]));
    EXPECT_LT(dev, 1e-12);
    EXPECT_NEAR(lhs.norm(), 1.0, 1e-12);
  }
}

TEST(PauliProperties, SquaresAreRealMultiplesOfIdentity) {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 200; ++rep) {
    auto p = oracle::random_string(rng, 1 + rep % 20);
    auto sq = pauli_mul(p, p);
    EXPECT_TRUE(sq.is_identity());
    EXPECT_TRUE(sq.phase_exponent() == 0 || sq.phase_exponent() == 2);
  }
}
