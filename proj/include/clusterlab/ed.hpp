#pragma once

// Exact diagonalization: dense solves for small Hilbert spaces, restarted
// Lanczos with full reorthogonalization and deflation above that, plus the
// observables evaluated on ground states.

#include <Eigen/Eigenvalues>

#include <limits>
#include <random>

#include "clusterlab/hamiltonians.hpp"

namespace clusterlab {

/// Energies closer than this are treated as degenerate.
inline constexpr double kDegeneracyTol = 1e-9;
/// Largest dimension handled by a dense eigensolve.
inline constexpr std::size_t kDenseDimensionLimit = std::size_t{1} << 10;

/// Z-parity sectors, P = prod_i Z_i. `even` is P = +1.
enum class ParitySector { any, even, odd };

inline bool in_sector(std::uint64_t b, ParitySector s) {
  if (s == ParitySector::any) return true;
  const bool odd = std::popcount(b) & 1;
  return (s == ParitySector::odd) == odd;
}

struct SpectrumResult {
  std::vector<double> energies;  // ascending
  std::vector<StateVector> vectors;
  double degeneracy_tol = kDegeneracyTol;
};

struct LanczosOptions {
  int krylov_dim = 60;
  int max_restarts = 400;
  double tolerance = 1e-10;  // residual norm ||Hx - Ex||
  std::uint64_t seed = 0x5eedULL;
};

namespace detail {

template <class T>
T scalar_from(cplx c) {
  if constexpr (std::is_same_v<T, double>) return c.real();
  else return c;
}

template <class T>
T conj_of(T v) {
  if constexpr (std::is_same_v<T, double>) return v;
  else return std::conj(v);
}

/// Pre-digested Pauli sum for fast repeated application.
template <class T>
class PauliKernel {
 public:
  explicit PauliKernel(const OperatorMatrix& h) : dim_(h.dimension()) {
    const OperatorMatrix s = h.simplified();
    for (const auto& t : s.terms()) {
      const cplx base = t.coeff * i_pow(t.op.phase_exponent() + t.op.y_count());
      if constexpr (std::is_same_v<T, double>) {
        if (std::abs(base.imag()) > 1e-14) throw std::invalid_argument("PauliKernel: operator is not real");
      }
      terms_.push_back({t.op.x_mask(), t.op.z_mask(), scalar_from<T>(base)});
    }
  }

  std::size_t dimension() const { return dim_; }

  void apply(const T* in, T* out) const {
    std::fill(out, out + dim_, T{});
    for (const auto& t : terms_) {
      const T c = t.coeff;
      const std::uint64_t x = t.x, z = t.z;
      for (std::size_t b = 0; b < dim_; ++b) {
        const T v = c * in[b];
        out[b ^ x] += (std::popcount(z & b) & 1) ? -v : v;
      }
    }
  }

 private:
  struct Term {
    std::uint64_t x, z;
    T coeff;
  };
  std::size_t dim_;
  std::vector<Term> terms_;
};

template <class T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += conj_of(a[i]) * b[i];
  return s;
}

template <class T>
double vnorm(const std::vector<T>& a) {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

template <class T>
void project_out(std::vector<T>& w, const std::vector<std::vector<T>>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& u : basis) {
      const T c = dot(u, w);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * u[i];
    }
  }
}

template <class T>
void mask_sector(std::vector<T>& w, ParitySector s) {
  if (s == ParitySector::any) return;
  for (std::size_t b = 0; b < w.size(); ++b)
    if (!in_sector(b, s)) w[b] = T{};
}

/// Lowest eigenpair of `op` in the orthogonal complement of `deflate`,
/// restricted to a Z-parity sector. Returns energy and normalized vector.
template <class T>
std::pair<double, std::vector<T>> lanczos_lowest(const PauliKernel<T>& op, const std::vector<std::vector<T>>& deflate,
                                                 ParitySector sector, const LanczosOptions& opt) {
  const std::size_t dim = op.dimension();
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<T> v(dim);
  for (auto& a : v) {
    if constexpr (std::is_same_v<T, double>) a = u(rng);
    else a = cplx(u(rng), u(rng));
  }
  mask_sector(v, sector);
  project_out(v, deflate);
  double nv = vnorm(v);
  if (nv < 1e-12) throw std::runtime_error("lanczos: deflated space is empty");
  for (auto& a : v) a /= nv;

  std::size_t sector_dim = 0;
  for (std::size_t b = 0; b < dim; ++b) sector_dim += in_sector(b, sector);
  const std::size_t avail = sector_dim - std::min(sector_dim, deflate.size());
  const int m_max = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(opt.krylov_dim), avail));

  std::vector<T> w(dim), x(dim), hx(dim);
  double energy = 0.0;
  for (int restart = 0; restart < opt.max_restarts; ++restart) {
    std::vector<std::vector<T>> basis{v};
    std::vector<double> alpha, beta;
    for (int j = 0; j < m_max; ++j) {
      op.apply(basis[static_cast<std::size_t>(j)].data(), w.data());
      mask_sector(w, sector);
      alpha.push_back(std::real(dot(basis[static_cast<std::size_t>(j)], w)));
      project_out(w, basis);
      project_out(w, deflate);
      const double b = vnorm(w);
      if (j + 1 == m_max || b < 1e-12) break;
      beta.push_back(b);
      for (auto& a : w) a /= b;
      basis.push_back(w);
    }
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      tri(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    energy = es.eigenvalues()(0);
    std::fill(x.begin(), x.end(), T{});
    for (Eigen::Index i = 0; i < m; ++i) {
      const double c = es.eigenvectors()(i, 0);
      const auto& bi = basis[static_cast<std::size_t>(i)];
      for (std::size_t k = 0; k < dim; ++k) x[k] += c * bi[k];
    }
    mask_sector(x, sector);
    project_out(x, deflate);
    const double nx = vnorm(x);
    for (auto& a : x) a /= nx;
    op.apply(x.data(), hx.data());
    mask_sector(hx, sector);
    energy = std::real(dot(x, hx));
    for (std::size_t k = 0; k < dim; ++k) hx[k] -= energy * x[k];
    project_out(hx, deflate);
    if (vnorm(hx) < opt.tolerance || static_cast<std::size_t>(m) >= avail) return {energy, x};
    v = x;
  }
  throw std::runtime_error("lanczos: no convergence");
}

template <class T>
StateVector to_state(int n, const std::vector<T>& v) {
  std::vector<cplx> a(v.begin(), v.end());
  return StateVector(n, std::move(a));
}

template <class T>
SpectrumResult iterative_window(const OperatorMatrix& h, double window, ParitySector sector, const LanczosOptions& opt,
                                std::size_t max_states) {
  PauliKernel<T> op(h);
  SpectrumResult r;
  std::vector<std::vector<T>> found;
  double e0 = 0.0;
  while (found.size() < max_states) {
    if (window <= 0.0 && !found.empty()) break;
    LanczosOptions o = opt;
    o.seed = opt.seed + found.size();
    auto [e, x] = lanczos_lowest(op, found, sector, o);
    if (!found.empty() && e > e0 + window) break;
    if (found.empty()) e0 = e;
    r.energies.push_back(e);
    r.vectors.push_back(to_state(h.n_sites(), x));
    found.push_back(std::move(x));
  }
  return r;
}

}  // namespace detail

/// All eigenpairs of a Hermitian operator within `window` of its minimum.
/// Dense solve up to kDenseDimensionLimit, Lanczos with deflation above. On
/// the Lanczos path a window <= 0 stops after the lowest state.
inline SpectrumResult ground_spectrum(const OperatorMatrix& h, double window = kDegeneracyTol,
                                      ParitySector sector = ParitySector::any, const LanczosOptions& opt = {}) {
  if (h.n_sites() > kMaxDenseSites) throw CapacityError("ground_spectrum: more than 16 sites");
  if (!h.is_hermitian()) throw std::invalid_argument("ground_spectrum: operator is not Hermitian");
  const std::size_t dim = h.dimension();
  if (dim <= kDenseDimensionLimit) {
    Eigen::MatrixXcd m = h.dense();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index b = 0; b < m.rows(); ++b)
      if (in_sector(static_cast<std::uint64_t>(b), sector)) keep.push_back(b);
    const auto k = static_cast<Eigen::Index>(keep.size());
    Eigen::MatrixXcd sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = m(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sub);
    SpectrumResult r;
    const double e0 = es.eigenvalues()(0);
    for (Eigen::Index i = 0; i < k && es.eigenvalues()(i) <= e0 + window; ++i) {
      r.energies.push_back(es.eigenvalues()(i));
      StateVector v(h.n_sites());
      for (Eigen::Index j = 0; j < k; ++j) v[static_cast<std::size_t>(keep[static_cast<std::size_t>(j)])] = es.eigenvectors()(j, i);
      r.vectors.push_back(std::move(v));
    }
    return r;
  }
  const std::size_t cap = 64;
  if (h.is_real()) return detail::iterative_window<double>(h, window, sector, opt, cap);
  return detail::iterative_window<cplx>(h, window, sector, opt, cap);
}

/// Full ascending spectrum (dense, N <= 10).
inline std::vector<double> full_spectrum(const OperatorMatrix& h) {
  if (h.n_sites() > 10) throw CapacityError("full_spectrum: more than 10 sites");
  if (!h.is_hermitian()) throw std::invalid_argument("full_spectrum: operator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.dense(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// The lowest `count` eigenvalues (with multiplicity).
inline std::vector<double> lowest_energies(const OperatorMatrix& h, std::size_t count) {
  if (h.dimension() <= kDenseDimensionLimit) {
    auto all = full_spectrum(h);
    all.resize(std::min(count, all.size()));
    return all;
  }
  if (h.n_sites() > kMaxDenseSites) throw CapacityError("lowest_energies: more than 16 sites");
  const double inf = std::numeric_limits<double>::infinity();
  auto r = h.is_real() ? detail::iterative_window<double>(h, inf, ParitySector::any, {}, count)
                       : detail::iterative_window<cplx>(h, inf, ParitySector::any, {}, count);
  return r.energies;
}

/// A deterministic ground-state representative. Each Z-parity sector is
/// solved separately; when the sector minima agree within kDegeneracyTol the
/// P = +1 sector is chosen.
struct GroundState {
  double energy = 0.0;
  StateVector vector;
  ParitySector sector = ParitySector::even;
  bool sectors_degenerate = false;
  double sector_splitting = 0.0;  // E(odd) - E(even)
};

inline GroundState ground_state(const OperatorMatrix& h, const LanczosOptions& opt = {}) {
  auto even = ground_spectrum(h, 0.0, ParitySector::even, opt);
  auto odd = ground_spectrum(h, 0.0, ParitySector::odd, opt);
  GroundState g;
  g.sector_splitting = odd.energies.front() - even.energies.front();
  g.sectors_degenerate = std::abs(g.sector_splitting) < kDegeneracyTol;
  if (g.sectors_degenerate || g.sector_splitting > 0.0) {
    g.energy = even.energies.front();
    g.vector = even.vectors.front();
    g.sector = ParitySector::even;
  } else {
    g.energy = odd.energies.front();
    g.vector = odd.vectors.front();
    g.sector = ParitySector::odd;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Observables

/// How the string order parameter is read. `decorated` evaluates
/// (-1)^{N-2} <X_1 Y_2 Z_3 ... Z_{N-2} Y_{N-1} X_N>, which equals the product
/// of the open-chain stabilizers K_2 ... K_{N-1}. `interior` is
/// (-1)^{N-2} <Y_1 Z_2 ... Z_{N-1} Y_N>; `literal` overlaps Y and Z on site 1.
enum class StringOrderConvention { decorated, interior, literal };

inline PauliString string_order_operator(int n, StringOrderConvention c) {
  if (n < 4) throw std::invalid_argument("string_order: need at least 4 sites");
  PauliString p(n);
  switch (c) {
    case StringOrderConvention::decorated:
      p = p.with(0, Letter::X).with(1, Letter::Y).with(n - 2, Letter::Y).with(n - 1, Letter::X);
      for (int j = 2; j < n - 2; ++j) p = p.with(j, Letter::Z);
      break;
    case StringOrderConvention::interior:
      p = p.with(0, Letter::Y).with(n - 1, Letter::Y);
      for (int j = 1; j < n - 1; ++j) p = p.with(j, Letter::Z);
      break;
    case StringOrderConvention::literal: {
      PauliString z(n);
      for (int j = 0; j < n - 1; ++j) z = z.with(j, Letter::Z);
      p = pauli_mul(pauli_mul(PauliString::single(n, 0, Letter::Y), z), PauliString::single(n, n - 1, Letter::Y));
      break;
    }
  }
  return (n % 2 == 0) ? p : -p;
}

inline double string_order(const StateVector& v, StringOrderConvention c = StringOrderConvention::decorated) {
  return std::real(expectation(string_order_operator(v.qubit_count(), c), v));
}

/// (-1)^{|j-i|} <Y_i Y_j>
inline double staggered_pair(const StateVector& v, int i, int j) {
  const int n = v.qubit_count();
  const auto p = PauliString(n).with(i, Letter::Y).with(j, Letter::Y);
  const double sign = (std::abs(j - i) % 2 == 0) ? 1.0 : -1.0;
  return sign * std::real(expectation(p, v));
}

/// (-1)^r <Y_i Y_{i+r}> averaged over i (all i with wraparound if periodic).
inline double staggered_correlator(const StateVector& v, int r, Boundary boundary = Boundary::periodic) {
  const int n = v.qubit_count();
  if (r < 1 || r > n - 1) throw std::invalid_argument("staggered_correlator: need 1 <= r <= N-1");
  double s = 0.0;
  int count = 0;
  for (int i = 0; i < n; ++i) {
    int j = i + r;
    if (j >= n) {
      if (boundary == Boundary::open) break;
      j -= n;
    }
    const auto p = PauliString(n).with(i, Letter::Y).with(j, Letter::Y);
    s += std::real(expectation(p, v));
    ++count;
  }
  return ((r % 2 == 0) ? 1.0 : -1.0) * s / count;
}

/// Lowest four energies of H(0) + strength * perturbation, relative to the minimum.
inline std::vector<double> degeneracy_split(const ChainSpec& spec, const OperatorMatrix& perturbation, double strength) {
  if (spec.boundary != Boundary::open) throw std::invalid_argument("degeneracy_split: open boundary required");
  OperatorMatrix h = build_hamiltonian(spec.with_lambda(0.0));
  if (strength != 0.0) h.add(perturbation, strength);
  std::vector<double> e = lowest_energies(h, 4);
  const double e0 = e.front();
  for (auto& x : e) x -= e0;
  return e;
}

struct ObservableBundle {
  double energy = 0.0;
  double string_order = 0.0;
  double staggered_corr = 0.0;
  int ground_degeneracy = 1;
};

/// Ground-state diagnostics; the staggered correlator is taken at the
/// largest separation available (N/2 periodic, N-1 open).
inline ObservableBundle evaluate_observables(const ChainSpec& spec) {
  const OperatorMatrix h = build_hamiltonian(spec);
  const auto g = ground_state(h);
  ObservableBundle b;
  b.energy = g.energy;
  b.string_order = string_order(g.vector);
  const int r = spec.boundary == Boundary::periodic ? spec.n_sites / 2 : spec.n_sites - 1;
  b.staggered_corr = staggered_correlator(g.vector, r, spec.boundary);
  b.ground_degeneracy = static_cast<int>(ground_spectrum(h, kDegeneracyTol).energies.size());
  return b;
}

}  // namespace clusterlab
