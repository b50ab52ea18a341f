#include <gtest/gtest.h>

#include "clusterlab/ed.hpp"
#include "oracle.hpp"

using namespace clusterlab;

namespace {

OperatorMatrix chain_h(int n, double lambda, Boundary b) { return build_hamiltonian(ChainSpec::chain(n, lambda, b)); }

}  // namespace

TEST(GroundSpectrum, OpenFourfoldManifold) {
  const auto r = ground_spectrum(chain_h(8, 0.0, Boundary::open), 1e-9);
  ASSERT_EQ(r.energies.size(), 4u);
  for (double e : r.energies) EXPECT_NEAR(e, -6.0, 1e-10);
}

TEST(GroundSpectrum, PeriodicUnique) {
  const auto r = ground_spectrum(chain_h(8, 0.0, Boundary::periodic), 1e-9);
  ASSERT_EQ(r.energies.size(), 1u);
  EXPECT_NEAR(r.energies.front(), -8.0, 1e-10);
}

TEST(GroundSpectrum, VectorsOrthonormalAndEigen) {
  const auto h = chain_h(8, 0.0, Boundary::open);
  const auto r = ground_spectrum(h, 1e-9);
  for (std::size_t a = 0; a < r.vectors.size(); ++a) {
    for (std::size_t b = 0; b < r.vectors.size(); ++b)
      EXPECT_NEAR(std::abs(r.vectors[a].inner(r.vectors[b])), a == b ? 1.0 : 0.0, 1e-10);
    auto hv = h.apply(r.vectors[a]);
    hv += [&] { auto w = r.vectors[a]; w *= -r.energies[a]; return w; }();
    EXPECT_LT(hv.norm(), 1e-9);
  }
}

TEST(GroundSpectrum, LanczosAgreesWithDense) {
  // N = 11 runs the iterative path; the reference is assembled from Kronecker products.
  const auto h = chain_h(11, 0.7, Boundary::open);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2048, 2048);
  for (const auto& t : h.terms()) m += t.coeff * oracle::dense(t.op);
  ASSERT_LT(m.imag().cwiseAbs().maxCoeff(), 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real(), Eigen::EigenvaluesOnly);
  const auto r = ground_spectrum(h, 1e-9);
  EXPECT_NEAR(r.energies.front(), es.eigenvalues()(0), 1e-9);
}

TEST(GroundSpectrum, LanczosOpenManifoldN12) {
  const auto r = ground_spectrum(chain_h(12, 0.0, Boundary::open), 1e-9);
  ASSERT_EQ(r.energies.size(), 4u);
  for (double e : r.energies) EXPECT_NEAR(e, -10.0, 1e-9);
}

TEST(GroundSpectrum, RejectsNonHermitian) {
  OperatorMatrix h(4);
  h.add(cplx(0.0, 1.0), PauliString::parse("XZXI"));
  EXPECT_THROW(ground_spectrum(h), std::invalid_argument);
}

TEST(GroundSpectrum, SectorRestriction) {
  const auto h = chain_h(8, 0.6, Boundary::periodic);
  const auto all = ground_spectrum(h, 0.0).energies.front();
  const auto even = ground_spectrum(h, 0.0, ParitySector::even).energies.front();
  const auto odd = ground_spectrum(h, 0.0, ParitySector::odd).energies.front();
  EXPECT_NEAR(all, std::min(even, odd), 1e-10);
}

TEST(StringOrder, ClusterStateIsOne) {
  const auto c = build_cluster_state(ChainSpec::chain(8, 0.0, Boundary::periodic));
  EXPECT_NEAR(string_order(c), 1.0, 1e-10);
}

TEST(StringOrder, OtherReadingsVanishOnClusterState) {
  const auto c = build_cluster_state(ChainSpec::chain(8, 0.0, Boundary::periodic));
  EXPECT_NEAR(string_order(c, StringOrderConvention::interior), 0.0, 1e-10);
  EXPECT_NEAR(string_order(c, StringOrderConvention::literal), 0.0, 1e-10);
}

TEST(StringOrder, DecoratedEqualsStabilizerProduct) {
  for (int n : {5, 6, 9}) {
    const auto spec = ChainSpec::chain(n, 0.0, Boundary::open);
    PauliString prod(n);
    for (const auto& k : stabilizer_list(spec)) prod = prod * k;
    EXPECT_EQ(prod, string_order_operator(n, StringOrderConvention::decorated)) << n;
  }
}

TEST(StringOrder, ProductStateIsZero) {
  EXPECT_NEAR(string_order(StateVector::basis(8, 0)), 0.0, 1e-14);
}

TEST(StringOrder, DecreasesBeyondCriticalPoint) {
  double prev = 2.0;
  for (double lambda : {1.2, 1.6, 2.0}) {
    const auto g = ground_state(chain_h(12, lambda, Boundary::periodic));
    const double o = string_order(g.vector);
    EXPECT_LT(o, prev) << lambda;
    prev = o;
  }
}

TEST(StaggeredCorrelator, ClusterStateVanishes) {
  const auto c = build_cluster_state(ChainSpec::chain(8, 0.0, Boundary::periodic));
  for (int r = 2; r < 8; ++r) EXPECT_NEAR(staggered_correlator(c, r), 0.0, 1e-10);
}

TEST(StaggeredCorrelator, NeelPairIsOne) {
  // |I0> + |I0bar> with I0 the +y / -y alternating product state.
  const int n = 8;
  StateVector a = StateVector::basis(n, 0), b = StateVector::basis(n, 0);
  const cplx up_a[2] = {1.0 / std::sqrt(2.0), cplx(0, 1) / std::sqrt(2.0)};
  const cplx dn_a[2] = {1.0 / std::sqrt(2.0), cplx(0, -1) / std::sqrt(2.0)};
  for (std::uint64_t s = 0; s < a.dimension(); ++s) {
    cplx x = 1.0, y = 1.0;
    for (int j = 0; j < n; ++j) {
      const int bit = (s >> j) & 1U;
      x *= (j % 2 == 0 ? up_a : dn_a)[bit];
      y *= (j % 2 == 0 ? dn_a : up_a)[bit];
    }
    a[s] = x;
    b[s] = y;
  }
  a += b;
  const auto ghz = a.normalized();
  for (int r = 1; r < n; ++r) EXPECT_NEAR(staggered_correlator(ghz, r), 1.0, 1e-10);
}

TEST(StaggeredCorrelator, GrowsIntoIsingPhase) {
  const auto lo = ground_state(chain_h(12, 0.5, Boundary::periodic));
  const auto hi = ground_state(chain_h(12, 2.0, Boundary::periodic));
  const double clo = staggered_correlator(lo.vector, 6);
  const double chi = staggered_correlator(hi.vector, 6);
  EXPECT_GT(chi, 0.0);
  EXPECT_GT(chi - clo, 0.5);
}

TEST(StaggeredCorrelator, RejectsBadSeparation) {
  EXPECT_THROW(staggered_correlator(StateVector::basis(4, 0), 0), std::invalid_argument);
  EXPECT_THROW(staggered_correlator(StateVector::basis(4, 0), 4), std::invalid_argument);
}

TEST(DegeneracySplit, Unperturbed) {
  const auto spec = ChainSpec::chain(10, 0.0, Boundary::open);
  for (double g : degeneracy_split(spec, build_ising_term(spec), 0.0)) EXPECT_NEAR(g, 0.0, 1e-10);
}

TEST(DegeneracySplit, IsingLiftsDegeneracy) {
  const auto spec = ChainSpec::chain(10, 0.0, Boundary::open);
  const auto g = degeneracy_split(spec, build_ising_term(spec), 0.1);
  EXPECT_GT(*std::max_element(g.begin(), g.end()), 1e-6);
}

TEST(DegeneracySplit, StabilizerPerturbationKeepsDegeneracy) {
  const auto spec = ChainSpec::chain(10, 0.0, Boundary::open);
  OperatorMatrix p(10);
  const auto ks = stabilizer_list(spec);
  for (std::size_t i = 0; i < ks.size(); ++i) p.add(0.3 + 0.1 * static_cast<double>(i), ks[i]);
  for (double g : degeneracy_split(spec, p, 0.1)) EXPECT_LT(g, 1e-10);
}

TEST(DegeneracySplit, RequiresOpenChain) {
  const auto spec = ChainSpec::chain(8, 0.0, Boundary::periodic);
  EXPECT_THROW(degeneracy_split(spec, build_ising_term(spec), 0.1), std::invalid_argument);
}

TEST(Variational, ClusterStateAboveGround) {
  const auto c = build_cluster_state(ChainSpec::chain(8, 0.0, Boundary::periodic));
  for (double lambda : {0.0, 0.5, 1.0, 1.5, 3.0}) {
    const auto h = chain_h(8, lambda, Boundary::periodic);
    EXPECT_GE(h.expectation(c).real(), ground_spectrum(h, 0.0).energies.front() - 1e-10);
  }
}

TEST(Observables, FixedPointsAreExclusive) {
  const auto b = evaluate_observables(ChainSpec::chain(10, 0.0, Boundary::periodic));
  EXPECT_NEAR(b.energy, -10.0, 1e-10);
  EXPECT_NEAR(b.string_order, 1.0, 1e-10);
  EXPECT_NEAR(b.staggered_corr, 0.0, 1e-10);
  EXPECT_EQ(b.ground_degeneracy, 1);
}
