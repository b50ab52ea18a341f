#pragma once

// Bond/string duality
//   mu_i^z = X_i X_{i+1},  mu_i^x = prod_{j<=i} Z_j,  mu_i^y = i mu_i^x mu_i^z,
// with X_{N+1} = 1 so that mu_N^z = X_N. The mu operators on different sites
// commute and obey the single-site Pauli algebra, so a "mu-string" (stored as
// a PauliString whose letters are read as mu letters) has a well-defined
// image as a sigma string.

#include "clusterlab/freefermion.hpp"

namespace clusterlab {

/// Phase in mu^y = s * mu^x mu^z.
enum class MuPhase { plus_i, minus_i };

inline const char* to_string(MuPhase p) { return p == MuPhase::plus_i ? "+i" : "-i"; }

/// The convention used everywhere unless a check asks for the alternative.
inline constexpr MuPhase kMuPhase = MuPhase::plus_i;

/// sigma representation of a single mu operator on site i (0-based).
inline PauliString mu_operator(int n, int i, Letter letter, MuPhase phase = kMuPhase) {
  if (i < 0 || i >= n) throw std::out_of_range("mu_operator: site out of range");
  PauliString mx(n), mz(n);
  for (int j = 0; j <= i; ++j) mx = mx.with(j, Letter::Z);
  mz = mz.with(i, Letter::X);
  if (i + 1 < n) mz = mz.with(i + 1, Letter::X);
  switch (letter) {
    case Letter::I: return PauliString(n);
    case Letter::X: return mx;
    case Letter::Z: return mz;
    case Letter::Y: return (mx * mz).times_i(phase == MuPhase::plus_i ? 1 : 3);
  }
  return PauliString(n);
}

/// Expands a mu-string into sigma letters (phase of `mu` carried over).
inline PauliString dual_image(const PauliString& mu, MuPhase phase = kMuPhase) {
  const int n = mu.length();
  PauliString out = PauliString(n).times_i(mu.phase_exponent());
  for (int i = 0; i < n; ++i) {
    const Letter l = mu.letter(i);
    if (l != Letter::I) out = out * mu_operator(n, i, l, phase);
  }
  return out;
}

inline OperatorMatrix dual_image(const OperatorMatrix& mu, MuPhase phase = kMuPhase) {
  OperatorMatrix out(mu.n_sites());
  for (const auto& t : mu.terms()) out.add(t.coeff, dual_image(t.op, phase));
  return out;
}

/// Which operator identity is checked.
///   open_cluster     H(0) with end terms Z_1 X_2, X_{N-1} Z_N  ->  sum_{1}^{N-1} mu^y mu^y - B
///   periodic_cluster H(0) on the ring  ->  sum_{1}^{N-2} mu^y mu^y - B_p
///   periodic_full    H(lambda) on the ring  ->  dual form with three boundary terms
enum class DualityIdentity { open_cluster, periodic_cluster, periodic_full };

inline const char* to_string(DualityIdentity d) {
  switch (d) {
    case DualityIdentity::open_cluster: return "open_cluster";
    case DualityIdentity::periodic_cluster: return "periodic_cluster";
    default: return "periodic_full";
  }
}

/// `printed` keeps the boundary operator exactly as written; `corrected`
/// multiplies its last term, the image of the wraparound Ising bond, by lambda.
enum class BoundaryReading { printed, corrected };

inline const char* to_string(BoundaryReading r) { return r == BoundaryReading::printed ? "printed" : "corrected"; }

namespace detail {

inline PauliString mu_string(int n, std::initializer_list<std::pair<int, Letter>> letters, int phase = 0) {
  PauliString p(n);
  for (const auto& [i, l] : letters) p = p.with(i, l);
  return p.times_i(phase);
}

inline PauliString mu_z_all(int n) {
  PauliString p(n);
  for (int i = 0; i < n; ++i) p = p.with(i, Letter::Z);
  return p;
}

}  // namespace detail

/// One boundary term: coeff * (prod mu^z) * factor, kept unmultiplied so
/// that each piece can be expanded under either mu^y phase convention.
struct BoundaryTerm {
  double coeff;
  PauliString factor;  // mu letters, one per site, phase included
};

inline std::vector<BoundaryTerm> boundary_terms(int n, double lambda, DualityIdentity id, BoundaryReading reading) {
  using detail::mu_string;
  // i mu_1^y
  const PauliString t1 = mu_string(n, {{0, Letter::Y}}, 1);
  // i mu_1^y mu_N^z - mu_{N-1}^y mu_N^y
  const PauliString t2a = mu_string(n, {{0, Letter::Y}, {n - 1, Letter::Z}}, 1);
  const PauliString t2b = mu_string(n, {{n - 2, Letter::Y}, {n - 1, Letter::Y}});
  // i mu_{N-1}^x mu_N^y mu_1^x
  const PauliString t3 = mu_string(n, {{n - 2, Letter::X}, {n - 1, Letter::Y}, {0, Letter::X}}, 1);
  switch (id) {
    case DualityIdentity::open_cluster: return {{1.0, t1}};
    case DualityIdentity::periodic_cluster: return {{1.0, t2a}, {-1.0, t2b}};
    default: return {{1.0, t2a}, {-1.0, t2b}, {reading == BoundaryReading::corrected ? lambda : 1.0, t3}};
  }
}

/// Boundary operator as a sum of mu-strings (on-site products taken with the
/// +i convention, i.e. ready to be read with sigma letters).
inline OperatorMatrix boundary_operator(int n, double lambda, DualityIdentity id, BoundaryReading reading) {
  const PauliString zall = detail::mu_z_all(n);
  OperatorMatrix b(n);
  for (const auto& t : boundary_terms(n, lambda, id, reading)) b.add(t.coeff, zall * t.factor);
  return b;
}

/// sigma image of the boundary operator, each factor expanded separately.
inline OperatorMatrix boundary_image(int n, double lambda, DualityIdentity id, BoundaryReading reading, MuPhase phase);

/// Bulk part of the dual form (no boundary operator), as mu-strings.
inline OperatorMatrix dual_bulk(int n, double lambda, DualityIdentity id) {
  using detail::mu_string;
  OperatorMatrix h(n);
  const int last = id == DualityIdentity::open_cluster ? n - 1 : n - 2;
  for (int i = 0; i < last; ++i) h.add(1.0, mu_string(n, {{i, Letter::Y}, {i + 1, Letter::Y}}));
  if (id == DualityIdentity::periodic_full && lambda != 0.0) {
    for (int i = 0; i < n - 1; ++i) {
      PauliString p = mu_string(n, {{i, Letter::Z}, {i + 1, Letter::X}});
      if (i > 0) p = p.with(i - 1, Letter::X);
      h.add(-lambda, p);
    }
  }
  return h;
}

/// Complete dual form (bulk minus boundary) as mu-strings. Read with sigma
/// letters it is the dual Hamiltonian itself.
inline OperatorMatrix dual_hamiltonian(int n, double lambda, DualityIdentity id,
                                       BoundaryReading reading = BoundaryReading::corrected) {
  OperatorMatrix h = dual_bulk(n, lambda, id);
  h.add(boundary_operator(n, lambda, id, reading), -1.0);
  return h.simplified();
}

/// -sum_{i=1}^{N} X_{i-1} Z_i X_{i+1} with X_0 = X_{N+1} = 1.
inline OperatorMatrix cluster_with_end_terms(int n) {
  OperatorMatrix h(n);
  for (int i = 0; i < n; ++i) {
    PauliString p = PauliString::single(n, i, Letter::Z);
    if (i > 0) p = p.with(i - 1, Letter::X);
    if (i + 1 < n) p = p.with(i + 1, Letter::X);
    h.add(-1.0, p);
  }
  return h;
}

inline OperatorMatrix boundary_image(int n, double lambda, DualityIdentity id, BoundaryReading reading,
                                     MuPhase phase) {
  const PauliString zall = dual_image(detail::mu_z_all(n), phase);
  OperatorMatrix b(n);
  for (const auto& t : boundary_terms(n, lambda, id, reading)) b.add(t.coeff, zall * dual_image(t.factor, phase));
  return b;
}

/// sigma image of the full dual form under a phase convention.
inline OperatorMatrix dual_form_image(int n, double lambda, DualityIdentity id, BoundaryReading reading,
                                      MuPhase phase) {
  OperatorMatrix h = dual_image(dual_bulk(n, lambda, id), phase);
  h.add(boundary_image(n, lambda, id, reading, phase), -1.0);
  return h;
}

/// sigma-side operator of an identity.
inline OperatorMatrix sigma_side(int n, double lambda, DualityIdentity id) {
  switch (id) {
    case DualityIdentity::open_cluster: return cluster_with_end_terms(n);
    case DualityIdentity::periodic_cluster: return build_hamiltonian(ChainSpec::chain(n, 0.0, Boundary::periodic));
    default: return build_hamiltonian(ChainSpec::chain(n, lambda, Boundary::periodic));
  }
}

/// sigma-side operator without the terms the boundary operator accounts for:
/// -sum K_i over i = 2..N (open, X_{N+1} = 1) or i = 2..N-1 (ring), plus the
/// open Ising bonds for the full identity.
inline OperatorMatrix sigma_bulk(int n, double lambda, DualityIdentity id) {
  OperatorMatrix h(n);
  const int hi = id == DualityIdentity::open_cluster ? n : n - 1;
  for (int i = 1; i < hi; ++i) {
    PauliString p = PauliString::single(n, i, Letter::Z).with(i - 1, Letter::X);
    if (i + 1 < n) p = p.with(i + 1, Letter::X);
    h.add(-1.0, p);
  }
  if (id == DualityIdentity::periodic_full && lambda != 0.0)
    for (int i = 0; i < n - 1; ++i) h.add(lambda, PauliString(n).with(i, Letter::Y).with(i + 1, Letter::Y));
  return h;
}

struct DualityResidual {
  int n_sites = 0;
  double lambda = 0.0;
  DualityIdentity identity = DualityIdentity::open_cluster;
  BoundaryReading reading = BoundaryReading::corrected;
  double max_entry_deviation = 0.0;  // full identity under the fixed phase convention
  double bulk_deviation = 0.0;       // boundary operator and its sigma counterpart dropped
  std::string phase_convention = to_string(kMuPhase);
  double alternative_phase_deviation = 0.0;  // same identity with mu^y = -i mu^x mu^z
};

inline constexpr double kDualityTolerance = 1e-9;

/// Exact matrix check of one identity at N <= 10.
inline DualityResidual verify_duality_identity(int n, double lambda, DualityIdentity id,
                                               BoundaryReading reading = BoundaryReading::corrected) {
  if (n < 4 || n > 10) throw CapacityError("verify_duality_identity: need 4 <= N <= 10");
  if (lambda < 0.0) throw std::invalid_argument("verify_duality_identity: lambda must be >= 0");
  const double lam = id == DualityIdentity::periodic_full ? lambda : 0.0;
  const Eigen::MatrixXcd lhs = sigma_side(n, lam, id).dense();
  DualityResidual r;
  r.n_sites = n;
  r.lambda = lam;
  r.identity = id;
  r.reading = reading;
  r.max_entry_deviation = max_entry_difference(lhs, dual_form_image(n, lam, id, reading, kMuPhase).dense());
  r.alternative_phase_deviation =
      max_entry_difference(lhs, dual_form_image(n, lam, id, reading, MuPhase::minus_i).dense());
  r.bulk_deviation = max_entry_difference(sigma_bulk(n, lam, id).dense(), dual_image(dual_bulk(n, lam, id)).dense());
  return r;
}

/// |I0> = |+y, -y, +y, ...> (flipped = false) or its partner with all y
/// eigenvalues reversed.
inline StateVector neel_y_state(int n, bool flipped) {
  const double r = 1.0 / std::sqrt(2.0);
  StateVector v(n);
  for (std::uint64_t b = 0; b < v.dimension(); ++b) {
    cplx a = 1.0;
    for (int j = 0; j < n; ++j) {
      const bool plus = (j % 2 == 0) != flipped;
      if ((b >> j) & 1U) a *= plus ? cplx(0, r) : cplx(0, -r);
      else a *= r;
    }
    v[b] = a;
  }
  return v;
}

/// Ground state of the open-chain dual form read in sigma letters,
///   H_I = sum_{i=1}^{N-1} Y_i Y_{i+1} - X_1 Z_2 ... Z_N,
/// built as (|I0> + B|I0>)/sqrt 2.
inline StateVector dual_of_cluster_state(int n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("dual_of_cluster_state: even N >= 4 required");
  if (n > 12) throw CapacityError("dual_of_cluster_state: N > 12");
  const StateVector i0 = neel_y_state(n, false);
  StateVector g = boundary_operator(n, 0.0, DualityIdentity::open_cluster, BoundaryReading::printed).apply(i0);
  g += i0;
  return g.normalized();
}

/// Local rotation taking the dual ground state to (|+>^N + |->^N)/sqrt 2:
/// U_j = |+><s_j| + c_j |-><sbar_j|, with s_j the y eigenstate of |I0> on
/// site j and c_1 = conj(c) for B|I0> = c |I0bar> (c_j = 1 elsewhere).
struct GhzFrame {
  cplx boundary_phase;
  std::vector<Eigen::Matrix2cd> site_unitaries;
};

inline GhzFrame ghz_frame(int n) {
  const double r = 1.0 / std::sqrt(2.0);
  auto y_state = [&](bool plus) {
    Eigen::Vector2cd v;
    v << r, plus ? cplx(0, r) : cplx(0, -r);
    return v;
  };
  Eigen::Vector2cd px, mx;
  px << r, r;
  mx << r, -r;
  const OperatorMatrix b = boundary_operator(n, 0.0, DualityIdentity::open_cluster, BoundaryReading::printed);
  GhzFrame f;
  f.boundary_phase = neel_y_state(n, true).inner(b.apply(neel_y_state(n, false)));
  for (int j = 0; j < n; ++j) {
    const bool plus = j % 2 == 0;
    const cplx cj = j == 0 ? std::conj(f.boundary_phase) : cplx(1.0);
    f.site_unitaries.push_back(px * y_state(plus).adjoint() + cj * mx * y_state(!plus).adjoint());
  }
  return f;
}

inline StateVector apply_local(const std::vector<Eigen::Matrix2cd>& us, const StateVector& v) {
  StateVector cur = v;
  const int n = v.qubit_count();
  for (int j = 0; j < n; ++j) {
    StateVector next(n);
    const std::uint64_t bit = std::uint64_t{1} << j;
    for (std::uint64_t b = 0; b < v.dimension(); ++b) {
      if (b & bit) continue;
      const cplx a0 = cur[b], a1 = cur[b | bit];
      const auto& u = us[static_cast<std::size_t>(j)];
      next[b] = u(0, 0) * a0 + u(0, 1) * a1;
      next[b | bit] = u(1, 0) * a0 + u(1, 1) * a1;
    }
    cur = std::move(next);
  }
  return cur;
}

inline StateVector ghz_state(int n) {
  StateVector v(n);
  const double r = std::pow(2.0, -n / 2.0) / std::sqrt(2.0);
  for (std::uint64_t b = 0; b < v.dimension(); ++b) v[b] = r * (1.0 + ((std::popcount(b) % 2) ? -1.0 : 1.0));
  return v;
}

struct SelfDualityReport {
  double lambda = 0.0;
  int n_sites = 0;
  double spectral_distance = 0.0;  // max |spec(H_dual) - lambda spec(H(1/lambda))|, boundary included
  double bulk_distance = 0.0;      // ground-energy density difference with the boundary operator dropped
};

/// Compares the dual Hamiltonian (boundary included, sigma read) with
/// lambda H(1/lambda) on the ring. The bulk distance uses the open dual form
/// without boundary operator and compares ground energies per site.
inline SelfDualityReport self_duality_check(double lambda, int n) {
  if (!(lambda > 0.0)) throw std::invalid_argument("self_duality_check: lambda must be > 0");
  if (n > 10) throw CapacityError("self_duality_check: N > 10");
  SelfDualityReport r;
  r.lambda = lambda;
  r.n_sites = n;
  const auto a = full_spectrum(dual_hamiltonian(n, lambda, DualityIdentity::periodic_full));
  auto b = full_spectrum(build_hamiltonian(ChainSpec::chain(n, 1.0 / lambda, Boundary::periodic)));
  for (auto& e : b) e *= lambda;
  for (std::size_t i = 0; i < a.size(); ++i) r.spectral_distance = std::max(r.spectral_distance, std::abs(a[i] - b[i]));
  const double e_bulk = ground_spectrum(dual_bulk(n, lambda, DualityIdentity::periodic_full), 0.0).energies.front();
  r.bulk_distance = std::abs(e_bulk - b.front()) / n;
  return r;
}

struct CriticalScanRow {
  double lambda = 0.0;
  double ed_gap = 0.0;            // E1 - E0 of the periodic chain
  double quasiparticle_gap = 0.0; // kEnergyScale * min Lambda_k over both sectors
};

inline std::vector<CriticalScanRow> critical_scan(int n, const std::vector<double>& grid) {
  std::vector<CriticalScanRow> rows;
  for (double l : grid) {
    const auto e = lowest_energies(build_hamiltonian(ChainSpec::chain(n, l, Boundary::periodic)), 2);
    rows.push_back({l, e[1] - e[0], quasiparticle_gap(l, n)});
  }
  return rows;
}

}  // namespace clusterlab
