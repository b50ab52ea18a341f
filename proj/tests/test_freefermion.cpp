#include <gtest/gtest.h>

#include "clusterlab/freefermion.hpp"

using namespace clusterlab;

namespace {

std::vector<double> lambdas_of(const std::vector<BogoliubovMode>& modes) {
  std::vector<double> out;
  for (const auto& m : modes) out.push_back(m.Lambda);
  std::sort(out.begin(), out.end());
  return out;
}

OperatorMatrix periodic_h(int n, double lambda) { return build_hamiltonian(ChainSpec::chain(n, lambda, Boundary::periodic)); }

}  // namespace

TEST(Dispersion, LambdaZeroIsFlat) {
  for (auto s : {FermionSector::periodic, FermionSector::antiperiodic})
    for (const auto& m : dispersion(0.0, 10, s)) EXPECT_NEAR(m.Lambda, 1.0, 1e-14);
}

TEST(Dispersion, CriticalModeCloses) {
  const auto modes = dispersion(1.0, 12, FermionSector::periodic);
  int closed = 0;
  for (const auto& m : modes) {
    if (std::abs(std::remainder(3.0 * m.theta, 2.0 * M_PI)) < 1e-12) {
      EXPECT_NEAR(m.Lambda, 0.0, 1e-12);
      ++closed;
    }
  }
  EXPECT_EQ(closed, 3);  // theta = 0, 2pi/3, 4pi/3
  EXPECT_TRUE(modes[0].degenerate);
}

TEST(Dispersion, ThreeThetaPi) {
  // N = 6, periodic, k = 1: theta = pi/3.
  const auto m = bogoliubov_mode(2.0, 6, 1.0);
  EXPECT_NEAR(m.Lambda, 3.0, 1e-12);
}

TEST(Dispersion, ModeInvariants) {
  for (double lambda : {0.0, 0.3, 1.0, 1.7, 4.0})
    for (auto s : {FermionSector::periodic, FermionSector::antiperiodic})
      for (const auto& m : dispersion(lambda, 12, s)) {
        EXPECT_NEAR(m.Lambda * m.Lambda, m.eps * m.eps + m.delta * m.delta, 1e-12);
        EXPECT_NEAR(m.u * m.u + std::norm(m.v), 1.0, 1e-12);
      }
}

TEST(Dispersion, RejectsOddN) { EXPECT_THROW(dispersion(0.5, 7, FermionSector::periodic), std::invalid_argument); }

TEST(Bdg, MatchesDispersionMultiset) {
  for (int n : {6, 8, 10, 12})
    for (double lambda : {0.0, 0.5, 1.0, 2.0})
      for (auto s : {FermionSector::periodic, FermionSector::antiperiodic}) {
        const auto a = bdg_spectrum(lambda, n, s);
        const auto b = lambdas_of(dispersion(lambda, n, s));
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
          EXPECT_NEAR(a[i], b[i], 1e-10) << "N=" << n << " lambda=" << lambda << " " << to_string(s);
      }
}

TEST(Bdg, CriticalZeroMode) {
  EXPECT_NEAR(bdg_spectrum(1.0, 12, FermionSector::periodic).front(), 0.0, 1e-10);
}

TEST(GroundEnergyFf, LambdaZeroIsMinusN) {
  for (int n : {4, 6, 8, 10, 100}) EXPECT_NEAR(ground_energy_ff(0.0, n), -n, 1e-10);
}

TEST(GroundEnergyFf, IsingAsymptote) {
  const double e = ground_energy_ff(4.0, 1000);
  EXPECT_NEAR(e / 4.0 / -1000.0, 1.0, 0.02);
}

TEST(GroundEnergyFf, MatchesEdOnGrid) {
  for (int n : {6, 8, 10, 12}) {
    for (int i = 0; i <= 8; ++i) {
      const double lambda = 0.25 * i;
      const double ed = ground_spectrum(periodic_h(n, lambda), 0.0).energies.front();
      EXPECT_NEAR(ground_energy_ff(lambda, n), ed, 1e-10) << "N=" << n << " lambda=" << lambda;
    }
  }
}

TEST(ManyBody, FullSpectrumMatchesEd) {
  for (double lambda : {0.0, 0.4, 1.0, 1.3, 2.5}) {
    const auto ed = full_spectrum(periodic_h(8, lambda));
    const auto ff = many_body_spectrum(lambda, 8);
    ASSERT_EQ(ed.size(), ff.size());
    for (std::size_t i = 0; i < ed.size(); ++i) EXPECT_NEAR(ed[i], ff[i], 1e-9) << "lambda=" << lambda << " i=" << i;
  }
}

TEST(ManyBody, SectorEnergiesMatchParityBlocks) {
  for (double lambda : {0.6, 1.4}) {
    const auto h = periodic_h(10, lambda);
    EXPECT_NEAR(sector_ground_energy(lambda, 10, FermionSector::antiperiodic),
                ground_spectrum(h, 0.0, ParitySector::even).energies.front(), 1e-10);
    EXPECT_NEAR(sector_ground_energy(lambda, 10, FermionSector::periodic),
                ground_spectrum(h, 0.0, ParitySector::odd).energies.front(), 1e-10);
  }
}

TEST(Gap, Examples) {
  EXPECT_NEAR(gap(1.0), 0.0, 1e-12);
  EXPECT_NEAR(gap(0.0), kEnergyScale, 1e-12);
  EXPECT_NEAR(gap(0.5), kEnergyScale * 0.5, 1e-9);
  EXPECT_THROW(gap(-0.1), std::invalid_argument);
}

TEST(Gap, MatchesAbsoluteDistance) {
  for (double lambda : {0.0, 0.2, 0.77, 1.0, 1.31, 3.0}) EXPECT_NEAR(gap(lambda), kEnergyScale * std::abs(1.0 - lambda), 1e-12);
}

TEST(Gap, SelfDualFingerprint) {
  for (double lambda : {0.25, 0.5, 2.0, 4.0}) EXPECT_NEAR(gap(lambda), gap(1.0 / lambda) * lambda, 1e-9);
}

TEST(Gap, QuasiparticleGapClosesOnlyAtCriticalPoint) {
  EXPECT_NEAR(quasiparticle_gap(1.0, 12), 0.0, 1e-12);
  EXPECT_GT(quasiparticle_gap(0.9, 12), 0.1);
  EXPECT_GT(quasiparticle_gap(1.1, 12), 0.1);
}

TEST(FitExponents, BothSides) {
  EXPECT_NEAR(fit_exponents({0.9, 0.95, 0.99, 0.999}).slope, 1.0, 1e-6);
  EXPECT_NEAR(fit_exponents({1.1, 1.05, 1.01}).slope, 1.0, 1e-6);
}

TEST(FitExponents, ScaleInvariant) {
  const std::vector<double> grid{0.9, 0.95, 0.99, 0.999};
  std::vector<double> g;
  for (double l : grid) g.push_back(37.5 * gap(l));
  EXPECT_NEAR(fit_exponents(grid, g).slope, fit_exponents(grid).slope, 1e-12);
}

TEST(FitExponents, RejectsBadGrids) {
  EXPECT_THROW(fit_exponents({0.9, 1.0, 0.99}), std::invalid_argument);
  EXPECT_THROW(fit_exponents({0.9, 1.1, 0.99}), std::invalid_argument);
  EXPECT_THROW(fit_exponents({0.9, 0.95}), std::invalid_argument);
}

TEST(Bcs, ClusterStateAtLambdaZero) {
  const auto bcs = bcs_state(0.0, 8);
  const auto c0 = build_cluster_state(ChainSpec::chain(8, 0.0, Boundary::periodic));
  EXPECT_NEAR(std::abs(c0.inner(bcs)), 1.0, 1e-8);
}

TEST(Bcs, Normalized) {
  for (double lambda : {0.0, 0.35, 1.0, 1.8, 3.0})
    for (auto s : {FermionSector::periodic, FermionSector::antiperiodic})
      EXPECT_NEAR(bcs_state(lambda, 8, s).norm(), 1.0, 1e-10);
}

TEST(Bcs, OverlapWithSectorGroundState) {
  for (double lambda : {0.2, 0.5, 0.8, 1.2, 2.0}) {
    const auto h = periodic_h(8, lambda);
    for (auto s : {FermionSector::periodic, FermionSector::antiperiodic}) {
      if (bcs_parity(lambda, 8, s) != spin_parity_of(s)) continue;
      const auto ps = spin_parity_of(s) > 0 ? ParitySector::even : ParitySector::odd;
      const auto ed = ground_spectrum(h, 0.0, ps);
      ASSERT_EQ(ed.vectors.size(), 1u);
      EXPECT_NEAR(std::abs(ed.vectors.front().inner(bcs_state(lambda, 8, s))), 1.0, 1e-8)
          << "lambda=" << lambda << " " << to_string(s);
    }
  }
}

TEST(Bcs, ParityMismatchIsFlagged) {
  // Periodic sector below the critical point: the paired state has P = +1.
  EXPECT_NE(bcs_parity(0.5, 8, FermionSector::periodic), spin_parity_of(FermionSector::periodic));
  const auto r = bcs_ground_state(0.5, 8);
  EXPECT_EQ(r.sector, FermionSector::antiperiodic);
  EXPECT_FALSE(r.parity_mismatch);
  EXPECT_LT(r.energy_antiperiodic, r.energy_periodic);
}

TEST(Bcs, PairAmplitude) {
  const int n = 10;
  const double lambda = 0.5;
  const auto psi = bcs_state(lambda, n, FermionSector::antiperiodic);
  for (const auto& m : dispersion(lambda, n, FermionSector::antiperiodic)) {
    if (m.theta >= M_PI) continue;
    const auto pair = apply_mode_creation(m.theta, apply_mode_creation(-m.theta, psi));
    const cplx amp = psi.inner(pair);
    EXPECT_NEAR(std::abs(amp - m.u * std::conj(m.v)), 0.0, 1e-10) << "k=" << m.k;
  }
}
