#pragma once

// Free-fermion solution of the cluster-Ising chain.
//
// With the Jordan-Wigner string S_l = prod_{m<l} Z_m the Majorana pairs
// A_l = S_l X_l, B_l = S_l Y_l turn the periodic chain into
//   H = i sum_l ( B_{l-1} A_{l+1} - lambda B_{l+1} A_l ),
// whose single-particle coupling has Fourier eigenvalues
//   T(theta) = e^{2 i theta} - lambda e^{-i theta} = eps + i delta,
// so Lambda(theta) = |T| = sqrt(1 + lambda^2 - 2 lambda cos 3 theta).
// The Z-parity P = prod Z fixes the fermion boundary condition:
// P = +1 is antiperiodic (half-integer k), P = -1 periodic (integer k).
// Physical energies are kEnergyScale * (sum over modes of Lambda (n - 1/2)).

#include <boost/math/constants/constants.hpp>

#include <numeric>

#include "clusterlab/ed.hpp"

namespace clusterlab {

/// Fermion boundary condition c_{N+l} = +c_l (periodic) or -c_l (antiperiodic).
enum class FermionSector { periodic, antiperiodic };

inline const char* to_string(FermionSector s) { return s == FermionSector::periodic ? "periodic" : "antiperiodic"; }

inline FermionSector parse_fermion_sector(std::string_view s) {
  if (s == "periodic") return FermionSector::periodic;
  if (s == "antiperiodic") return FermionSector::antiperiodic;
  throw std::invalid_argument("unknown fermion sector '" + std::string(s) + "'");
}

/// Z-parity of the spin states belonging to a fermion sector.
inline int spin_parity_of(FermionSector s) { return s == FermionSector::antiperiodic ? +1 : -1; }

/// Ratio between physical energies and the Lambda_k units: fixed by requiring
/// E0(lambda = 0) = -N, i.e. -(c/2) sum_k 1 = -N.
inline constexpr double kEnergyScale = 2.0;

struct BogoliubovMode {
  double k = 0.0;  // momentum index (half-integer in the antiperiodic sector)
  double theta = 0.0;
  double Lambda = 0.0;
  double eps = 0.0;
  double delta = 0.0;
  double u = 0.0;
  cplx v;
  bool degenerate = false;  // Lambda = 0; u, v taken from the eps-sign limit
};

namespace detail {

inline void require_even(int n, const char* who) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument(std::string(who) + ": N must be even and >= 2");
}

inline double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

}  // namespace detail

inline std::vector<double> momenta(int n, FermionSector s) {
  detail::require_even(n, "momenta");
  std::vector<double> k(static_cast<std::size_t>(n));
  const double off = s == FermionSector::antiperiodic ? 0.5 : 0.0;
  for (int q = 0; q < n; ++q) k[static_cast<std::size_t>(q)] = q + off;
  return k;
}

inline double lambda_of_theta(double lambda, double theta) {
  return std::sqrt(std::max(0.0, 1.0 + lambda * lambda - 2.0 * lambda * std::cos(3.0 * theta)));
}

inline BogoliubovMode bogoliubov_mode(double lambda, int n, double k) {
  const double two_pi = boost::math::constants::two_pi<double>();
  BogoliubovMode m;
  m.k = k;
  m.theta = two_pi * k / n;
  m.eps = std::cos(2.0 * m.theta) - lambda * std::cos(m.theta);
  m.delta = std::sin(2.0 * m.theta) + lambda * std::sin(m.theta);
  m.Lambda = lambda_of_theta(lambda, m.theta);
  double ratio;
  if (m.Lambda < 1e-12) {
    m.degenerate = true;
    ratio = std::abs(m.eps) < 1e-12 ? 0.0 : detail::sign_of(m.eps);
  } else {
    ratio = std::clamp(m.eps / m.Lambda, -1.0, 1.0);
  }
  const double zp = std::sqrt((1.0 + ratio) / 2.0);
  const double zm = std::sqrt((1.0 - ratio) / 2.0);
  m.u = zp;
  m.v = cplx(0.0, -detail::sign_of(m.delta) * zm);
  if (m.delta == 0.0) m.v = cplx(0.0, -zm);
  return m;
}

/// One Bogoliubov mode per allowed momentum of the sector.
inline std::vector<BogoliubovMode> dispersion(double lambda, int n, FermionSector s) {
  std::vector<BogoliubovMode> out;
  for (double k : momenta(n, s)) out.push_back(bogoliubov_mode(lambda, n, k));
  return out;
}

/// Quasiparticle energies (in Lambda units, ascending) from a direct
/// diagonalization of the real-space quadratic form
///   sum_l (c+_{l-1} - c_{l-1})(c+_{l+1} + c_{l+1})
///   + lambda sum_l (c+_l + c_l)(c+_{l+1} - c_{l+1})
/// with c_{N+l} = +-c_l, written as a 2N x 2N Bogoliubov-de Gennes matrix.
inline std::vector<double> bdg_spectrum(double lambda, int n, FermionSector s) {
  detail::require_even(n, "bdg_spectrum");
  if (n > 4096) throw CapacityError("bdg_spectrum: N > 4096");
  const double bc = s == FermionSector::periodic ? 1.0 : -1.0;
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N, N);
  auto wrap = [&](int l, double& sign) {
    sign = 1.0;
    while (l < 0) { l += n; sign *= bc; }
    while (l >= n) { l -= n; sign *= bc; }
    return static_cast<Eigen::Index>(l);
  };
  // coeff * (c+_a + s1 c_a)(c+_b + s2 c_b), a != b, s1 * s2 = -1.
  auto add = [&](int a_raw, double s1, int b_raw, double s2, double coeff) {
    double sa, sb;
    const auto a = wrap(a_raw, sa);
    const auto b = wrap(b_raw, sb);
    const double c = coeff * sa * sb;
    A(a, b) += c * s2;
    A(b, a) += -c * s1;
    B(a, b) += c;
    B(b, a) -= c;
  };
  for (int l = 0; l < n; ++l) {
    add(l - 1, -1.0, l + 1, +1.0, 1.0);
    add(l, +1.0, l + 1, -1.0, lambda);
  }
  Eigen::MatrixXd H(2 * N, 2 * N);
  H << A, B, -B, -A.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
  std::vector<double> e;
  for (Eigen::Index i = N; i < 2 * N; ++i) e.push_back(std::max(0.0, es.eigenvalues()(i)) / kEnergyScale);
  std::sort(e.begin(), e.end());
  return e;
}

/// Z-parity of the quasiparticle vacuum of a sector: the sign of
/// det T = prod_k (eps_k + i delta_k). Zero modes report +1.
inline int vacuum_parity(double lambda, int n, FermionSector s) {
  cplx prod{1.0, 0.0};
  for (const auto& m : dispersion(lambda, n, s)) {
    if (m.Lambda < 1e-12) return +1;
    prod *= cplx(m.eps, m.delta) / m.Lambda;
  }
  return prod.real() >= 0.0 ? +1 : -1;
}

/// Lowest physical energy inside one fermion sector.
inline double sector_ground_energy(double lambda, int n, FermionSector s) {
  const auto modes = dispersion(lambda, n, s);
  double sum = 0.0, lmin = std::numeric_limits<double>::infinity();
  for (const auto& m : modes) {
    sum += m.Lambda;
    lmin = std::min(lmin, m.Lambda);
  }
  double e = -0.5 * kEnergyScale * sum;
  if (vacuum_parity(lambda, n, s) != spin_parity_of(s)) e += kEnergyScale * lmin;
  return e;
}

/// Ground energy of the periodic chain: the lower of the two sector minima.
inline double ground_energy_ff(double lambda, int n) {
  detail::require_even(n, "ground_energy_ff");
  return std::min(sector_ground_energy(lambda, n, FermionSector::antiperiodic),
                  sector_ground_energy(lambda, n, FermionSector::periodic));
}

/// Every many-body level of the periodic chain (2^N values, ascending),
/// assembled from quasiparticle occupations with the parity constraint.
inline std::vector<double> many_body_spectrum(double lambda, int n) {
  detail::require_even(n, "many_body_spectrum");
  if (n > 20) throw CapacityError("many_body_spectrum: N > 20");
  std::vector<double> out;
  for (auto s : {FermionSector::antiperiodic, FermionSector::periodic}) {
    const auto modes = dispersion(lambda, n, s);
    const int vac = vacuum_parity(lambda, n, s);
    const int want = spin_parity_of(s);
    double base = 0.0;
    for (const auto& m : modes) base -= 0.5 * kEnergyScale * m.Lambda;
    for (std::uint64_t occ = 0; occ < (std::uint64_t{1} << n); ++occ) {
      const int par = (std::popcount(occ) % 2 == 0) ? vac : -vac;
      if (par != want) continue;
      double e = base;
      for (int q = 0; q < n; ++q)
        if ((occ >> q) & 1U) e += kEnergyScale * modes[static_cast<std::size_t>(q)].Lambda;
      out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Finite-N quasiparticle gap: kEnergyScale * min Lambda_k over the momenta
/// of both sectors.
inline double quasiparticle_gap(double lambda, int n) {
  double g = std::numeric_limits<double>::infinity();
  for (auto s : {FermionSector::antiperiodic, FermionSector::periodic})
    for (const auto& m : dispersion(lambda, n, s)) g = std::min(g, m.Lambda);
  return kEnergyScale * g;
}

/// Thermodynamic-limit gap kEnergyScale * min_theta Lambda(theta) over a
/// uniform theta grid that contains theta = 0.
inline double gap(double lambda, int grid_points = 6000) {
  if (lambda < 0.0) throw std::invalid_argument("gap: lambda must be >= 0");
  const double two_pi = boost::math::constants::two_pi<double>();
  double g = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid_points; ++i) g = std::min(g, lambda_of_theta(lambda, two_pi * i / grid_points));
  return kEnergyScale * g;
}

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max |log gap - fit| over the grid
  std::vector<double> grid;
};

/// Least-squares line through (log|1 - lambda|, log gap).
inline ExponentFit fit_exponents(const std::vector<double>& grid, const std::vector<double>& gaps) {
  if (grid.size() < 2 || grid.size() != gaps.size()) throw std::invalid_argument("fit_exponents: need >= 2 points");
  const bool below = grid.front() < 1.0;
  double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
  for (double l : grid) {
    if (l == 1.0) throw std::invalid_argument("fit_exponents: grid contains the critical point");
    if ((l < 1.0) != below) throw std::invalid_argument("fit_exponents: grid straddles the critical point");
    dmin = std::min(dmin, std::abs(1.0 - l));
    dmax = std::max(dmax, std::abs(1.0 - l));
  }
  if (dmax / dmin < 10.0 * (1.0 - 1e-12)) throw std::invalid_argument("fit_exponents: grid spans less than a decade");
  const auto n = static_cast<double>(grid.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(gaps[i] > 0.0)) throw std::invalid_argument("fit_exponents: non-positive gap");
    const double x = std::log(std::abs(1.0 - grid[i]));
    const double y = std::log(gaps[i]);
    xs.push_back(x);
    ys.push_back(y);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  ExponentFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < xs.size(); ++i)
    f.residual = std::max(f.residual, std::abs(ys[i] - (f.intercept + f.slope * xs[i])));
  f.grid = grid;
  return f;
}

inline ExponentFit fit_exponents(const std::vector<double>& grid) {
  std::vector<double> g;
  for (double l : grid) g.push_back(gap(l));
  return fit_exponents(grid, g);
}

// ---------------------------------------------------------------------------
// BCS ground state in the spin basis.
//
// The pairing form prod_k (u_k + v_k b+_k b+_{-k}) with u_k = z_k^+ and
// v_k = -i sign(delta_k) z_k^- describes the fermions b_l = S_l sigma^-_l,
// whose vacuum is |1...1> (every spin down). b+_l lowers bit l from 1 to 0 and
// picks up (-1)^{number of set bits below l}.

namespace detail {

/// out = b+_l in, site l 0-based.
inline void apply_creation_site(int l, std::span<const cplx> in, std::span<cplx> out, cplx coeff) {
  const std::uint64_t bit = std::uint64_t{1} << l;
  const std::uint64_t below = bit - 1;
  for (std::uint64_t b = 0; b < in.size(); ++b) {
    if (!(b & bit) || in[b] == cplx{}) continue;
    const bool neg = std::popcount(b & below) & 1;
    out[b ^ bit] += neg ? -coeff * in[b] : coeff * in[b];
  }
}

}  // namespace detail

/// b+_theta = N^{-1/2} sum_l e^{i theta l} b+_l with l = 1..N.
inline StateVector apply_mode_creation(double theta, const StateVector& v) {
  const int n = v.qubit_count();
  StateVector out(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (int l = 0; l < n; ++l) {
    const cplx phase = std::polar(norm, theta * (l + 1));
    detail::apply_creation_site(l, v.amplitudes(), out.amplitudes(), phase);
  }
  return out;
}

/// Paired BCS state of one sector. Self-conjugate momenta (theta = 0, pi) are
/// filled when eps < 0.
inline StateVector bcs_state(double lambda, int n, FermionSector s) {
  detail::require_even(n, "bcs_state");
  if (n > 14) throw CapacityError("bcs_state: N > 14");
  const double pi = boost::math::constants::pi<double>();
  StateVector v = StateVector::basis(n, (std::uint64_t{1} << n) - 1);
  for (const auto& m : dispersion(lambda, n, s)) {
    const bool self_conjugate = std::abs(std::remainder(2.0 * m.theta, 2.0 * pi)) < 1e-12;
    if (self_conjugate) {
      if (m.eps < 0.0) v = apply_mode_creation(m.theta, v);
      continue;
    }
    if (m.theta >= pi) continue;  // handled with its partner
    StateVector pair = apply_mode_creation(m.theta, apply_mode_creation(-m.theta, v));
    v *= m.u;
    pair *= m.v;
    v += pair;
  }
  return v;
}

/// Paired BCS state of the sector holding the ground state (the antiperiodic
/// sector on ties).
inline StateVector bcs_state(double lambda, int n) {
  const bool periodic = sector_ground_energy(lambda, n, FermionSector::periodic) <
                        sector_ground_energy(lambda, n, FermionSector::antiperiodic) - kDegeneracyTol;
  return bcs_state(lambda, n, periodic ? FermionSector::periodic : FermionSector::antiperiodic);
}

/// Z-parity carried by the paired BCS state of a sector.
inline int bcs_parity(double lambda, int n, FermionSector s) {
  int p = 1;
  const double pi = boost::math::constants::pi<double>();
  for (const auto& m : dispersion(lambda, n, s)) {
    const bool self_conjugate = std::abs(std::remainder(2.0 * m.theta, 2.0 * pi)) < 1e-12;
    if (self_conjugate && m.eps < 0.0) p = -p;
  }
  return p;
}

struct BcsResult {
  StateVector state;
  FermionSector sector = FermionSector::antiperiodic;
  double energy = 0.0;
  bool parity_mismatch = false;  // chosen sector's BCS state carries the wrong Z-parity
  double energy_antiperiodic = 0.0;
  double energy_periodic = 0.0;
};

/// BCS state of the sector holding the ground state. Both sector energies are
/// reported; a parity mismatch of the paired state is flagged rather than
/// hidden.
inline BcsResult bcs_ground_state(double lambda, int n) {
  BcsResult r;
  r.energy_antiperiodic = sector_ground_energy(lambda, n, FermionSector::antiperiodic);
  r.energy_periodic = sector_ground_energy(lambda, n, FermionSector::periodic);
  r.sector = r.energy_periodic < r.energy_antiperiodic - kDegeneracyTol ? FermionSector::periodic
                                                                        : FermionSector::antiperiodic;
  r.energy = std::min(r.energy_antiperiodic, r.energy_periodic);
  r.parity_mismatch = bcs_parity(lambda, n, r.sector) != spin_parity_of(r.sector);
  r.state = bcs_state(lambda, n, r.sector);
  return r;
}

}  // namespace clusterlab
