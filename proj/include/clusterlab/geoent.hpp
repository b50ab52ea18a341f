#pragma once

// Geometric entanglement eps(psi) = -log2 max |<S|psi>|^2 over the dimerized
// product states
//   |S> = prod_j (cos theta_j |0> + e^{i phi_j} sin theta_j |1>),
// with (theta_a, phi_a) on sites 1, 3, 5, ... and (theta_b, phi_b) on
// sites 2, 4, 6, ....

#include <gsl/gsl_multimin.h>

#include <functional>
#include <optional>
#include <random>

#include "clusterlab/freefermion.hpp"

namespace clusterlab {

struct SeparableAnsatz {
  double theta_a = 0.0, phi_a = 0.0, theta_b = 0.0, phi_b = 0.0;

  /// Same state up to a global phase with theta in [0, pi) and phi in [0, 2 pi).
  SeparableAnsatz canonical() const {
    auto fix = [](double& t, double& p) {
      const double pi = boost::math::constants::pi<double>();
      t = std::fmod(t, 2.0 * pi);
      if (t < 0.0) t += 2.0 * pi;
      if (t >= pi) t -= pi;  // cos and sin both change sign: a global -1
      p = std::fmod(p, 2.0 * pi);
      if (p < 0.0) p += 2.0 * pi;
    };
    SeparableAnsatz s = *this;
    fix(s.theta_a, s.phi_a);
    fix(s.theta_b, s.phi_b);
    return s;
  }

  std::array<double, 4> as_array() const { return {theta_a, phi_a, theta_b, phi_b}; }
  static SeparableAnsatz from(const double* x) { return {x[0], x[1], x[2], x[3]}; }
};

namespace detail {

inline std::array<cplx, 2> site_amplitudes(double theta, double phi) {
  return {cplx(std::cos(theta), 0.0), std::polar(std::sin(theta), phi)};
}

}  // namespace detail

/// <S|v> for arbitrary per-site angles; contracts one site at a time, so the
/// cost is about 2 * 2^N without forming |S>.
inline cplx overlap_sites(const StateVector& v, const std::vector<double>& theta, const std::vector<double>& phi) {
  const int n = v.qubit_count();
  if (static_cast<int>(theta.size()) != n || static_cast<int>(phi.size()) != n)
    throw std::invalid_argument("overlap_sites: one angle pair per site required");
  std::vector<cplx> w(v.amplitudes().begin(), v.amplitudes().end());
  std::size_t len = w.size();
  for (int j = 0; j < n; ++j) {
    const auto a = detail::site_amplitudes(theta[static_cast<std::size_t>(j)], phi[static_cast<std::size_t>(j)]);
    const cplx c0 = std::conj(a[0]), c1 = std::conj(a[1]);
    len /= 2;
    for (std::size_t b = 0; b < len; ++b) w[b] = c0 * w[2 * b] + c1 * w[2 * b + 1];
  }
  return w[0];
}

/// <S(ansatz)|v>. Sites are contracted in A/B pairs.
namespace detail {
// out[q] = sum_k c[k] in[4q+k], written out in real arithmetic (std::complex
// multiplication carries NaN recovery that defeats vectorization).
inline void contract4(const std::array<cplx, 4>& c, const cplx* in, cplx* out, std::size_t len) {
  const double* x = reinterpret_cast<const double*>(in);
  double* y = reinterpret_cast<double*>(out);
  double cr[4], ci[4];
  for (int k = 0; k < 4; ++k) {
    cr[k] = c[static_cast<std::size_t>(k)].real();
    ci[k] = c[static_cast<std::size_t>(k)].imag();
  }
  for (std::size_t q = 0; q < len; ++q) {
    const double* p = x + 8 * q;
    double re = 0.0, im = 0.0;
    for (int k = 0; k < 4; ++k) {
      re += cr[k] * p[2 * k] - ci[k] * p[2 * k + 1];
      im += cr[k] * p[2 * k + 1] + ci[k] * p[2 * k];
    }
    y[2 * q] = re;
    y[2 * q + 1] = im;
  }
}
}  // namespace detail

inline cplx overlap(const StateVector& v, const SeparableAnsatz& s) {
  const int n = v.qubit_count();
  if (n % 2 != 0) throw std::invalid_argument("overlap: even N required");
  const auto a = detail::site_amplitudes(s.theta_a, s.phi_a);
  const auto b = detail::site_amplitudes(s.theta_b, s.phi_b);
  // pair index k = bit_a + 2 bit_b
  const std::array<cplx, 4> c{std::conj(a[0] * b[0]), std::conj(a[1] * b[0]), std::conj(a[0] * b[1]),
                              std::conj(a[1] * b[1])};
  const auto in = v.amplitudes();
  std::vector<cplx> w(in.size() / 4);
  detail::contract4(c, in.data(), w.data(), w.size());
  for (std::size_t len = w.size() / 4; len >= 1; len /= 4) detail::contract4(c, w.data(), w.data(), len);
  return w[0];
}

struct OptimizerOptions {
  std::uint64_t seed = 20260101ULL;
  int random_starts = 20;
  double size_tolerance = 1e-7;  // simplex size; the objective is then converged far below 1e-10
  int max_iterations = 4000;
  double initial_step = 0.3;
};

struct EntanglementResult {
  double epsilon = 0.0;
  SeparableAnsatz best_ansatz;
  int starts_used = 0;
  double spread = std::numeric_limits<double>::infinity();  // eps(second distinct basin) - eps(best)
  bool ambiguous = false;
  double max_overlap_sq = 0.0;
};

/// Distinct basins closer than this are treated as one.
inline constexpr double kBasinMergeTol = 1e-9;
/// Two distinct basins within this of each other make the maximum ambiguous.
inline constexpr double kAmbiguityTol = 1e-6;

namespace detail {

struct LocalResult {
  double value = 0.0;  // -|overlap|^2
  std::vector<double> x;
};

using Objective = std::function<double(const double*)>;

/// Nelder-Mead minimization of f from x0 (GSL nmsimplex2).
inline LocalResult nelder_mead(const Objective& f, std::vector<double> x0, const OptimizerOptions& opt) {
  const std::size_t dim = x0.size();
  gsl_multimin_function fn;
  fn.n = dim;
  fn.params = const_cast<Objective*>(&f);
  fn.f = [](const gsl_vector* x, void* p) -> double { return (*static_cast<const Objective*>(p))(x->data); };
  gsl_vector* x = gsl_vector_alloc(dim);
  gsl_vector* step = gsl_vector_alloc(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    gsl_vector_set(x, i, x0[i]);
    gsl_vector_set(step, i, opt.initial_step);
  }
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim);
  gsl_multimin_fminimizer_set(s, &fn, x, step);
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), opt.size_tolerance) == GSL_SUCCESS) break;
  }
  LocalResult r;
  r.value = s->fval;
  r.x.assign(s->x->data, s->x->data + dim);
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return r;
}

/// 3^4 lattice of starts followed by seeded random starts.
inline std::vector<std::array<double, 4>> start_points(const OptimizerOptions& opt) {
  const double pi = boost::math::constants::pi<double>();
  const std::array<double, 3> th{pi / 8, pi / 4, 3 * pi / 8};
  const std::array<double, 3> ph{0.0, 2 * pi / 3, 4 * pi / 3};
  std::vector<std::array<double, 4>> out;
  for (double ta : th)
    for (double pa : ph)
      for (double tb : th)
        for (double pb : ph) out.push_back({ta, pa, tb, pb});
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> ut(0.0, pi), up(0.0, 2 * pi);
  for (int i = 0; i < opt.random_starts; ++i) {
    const double a = ut(rng), b = up(rng), c = ut(rng), d = up(rng);
    out.push_back({a, b, c, d});
  }
  return out;
}

}  // namespace detail

inline double entanglement_from_overlap(double overlap_sq) { return -std::log2(overlap_sq); }

/// Multi-start maximization of |<S|v>|^2 over the 4 dimerized angles.
inline EntanglementResult geometric_entanglement(const StateVector& v, const OptimizerOptions& opt = {}) {
  const int n = v.qubit_count();
  if (n % 2 != 0) throw std::invalid_argument("geometric_entanglement: even N required");
  if (n > 16) throw CapacityError("geometric_entanglement: N > 16");
  if (std::abs(v.norm() - 1.0) > 1e-8) throw std::invalid_argument("geometric_entanglement: state not normalized");
  auto f = [&](const double* x) { return -std::norm(overlap(v, SeparableAnsatz::from(x))); };
  const auto starts = detail::start_points(opt);
  std::vector<detail::LocalResult> results;
  for (const auto& s0 : starts) {
    auto r = detail::nelder_mead(f, {s0.begin(), s0.end()}, opt);
    OptimizerOptions polish = opt;
    polish.initial_step = 0.01;
    results.push_back(detail::nelder_mead(f, r.x, polish));  // restart against simplex collapse
  }
  // Deterministic reduction: best value, ties broken by canonical angles.
  auto key = [](const detail::LocalResult& r) { return SeparableAnsatz::from(r.x.data()).canonical().as_array(); };
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].value < results[best].value - 1e-15 ||
        (std::abs(results[i].value - results[best].value) <= 1e-15 && key(results[i]) < key(results[best])))
      best = i;
  }
  EntanglementResult out;
  out.starts_used = static_cast<int>(starts.size());
  out.max_overlap_sq = -results[best].value;
  out.epsilon = std::max(0.0, entanglement_from_overlap(out.max_overlap_sq));
  out.best_ansatz = SeparableAnsatz::from(results[best].x.data()).canonical();
  for (const auto& r : results) {
    const double eps = std::max(0.0, entanglement_from_overlap(-r.value));
    const double d = eps - out.epsilon;
    if (d > kBasinMergeTol) out.spread = std::min(out.spread, d);
  }
  out.ambiguous = out.spread < kAmbiguityTol;
  return out;
}

/// Same maximization over all 2N angles (one pair per site), seeded from the
/// dimerized optimum and from random points. Used to measure what the
/// dimerized restriction loses on small chains.
inline double geometric_entanglement_full(const StateVector& v, const OptimizerOptions& opt = {}) {
  const int n = v.qubit_count();
  if (n > 10) throw CapacityError("geometric_entanglement_full: N > 10");
  auto f = [&](const double* x) {
    std::vector<double> th(static_cast<std::size_t>(n)), ph(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      th[static_cast<std::size_t>(j)] = x[2 * j];
      ph[static_cast<std::size_t>(j)] = x[2 * j + 1];
    }
    return -std::norm(overlap_sites(v, th, ph));
  };
  const auto dimer = geometric_entanglement(v, opt);
  std::vector<std::vector<double>> starts;
  std::vector<double> x0;
  for (int j = 0; j < n; ++j) {
    const bool a = j % 2 == 0;
    x0.push_back(a ? dimer.best_ansatz.theta_a : dimer.best_ansatz.theta_b);
    x0.push_back(a ? dimer.best_ansatz.phi_a : dimer.best_ansatz.phi_b);
  }
  starts.push_back(x0);
  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> u(0.0, boost::math::constants::pi<double>());
  for (int i = 0; i < 40; ++i) {
    std::vector<double> x(static_cast<std::size_t>(2 * n));
    for (auto& e : x) e = 2.0 * u(rng);
    starts.push_back(x);
  }
  OptimizerOptions o = opt;
  o.max_iterations = 40000;
  double best = 0.0;
  for (const auto& s : starts) {
    // Restart from the previous end point to escape premature simplex collapse.
    auto r = detail::nelder_mead(f, s, o);
    r = detail::nelder_mead(f, r.x, o);
    best = std::min(best, r.value);
  }
  return std::max(0.0, entanglement_from_overlap(-best));
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRecord {
  double lambda = 0.0;
  int n_sites = 0;
  Boundary boundary = Boundary::periodic;
  double energy = 0.0;
  double gap = 0.0;
  double string_order = 0.0;
  double staggered_corr = 0.0;
  double geo_ent = 0.0;
  double geo_ent_per_site = 0.0;
  std::optional<double> geo_ent_deriv;  // empty at grid endpoints
};

/// Deterministic ground-state representative: the lowest state of the P = +1
/// sector when the two parity sectors tie, otherwise the lower sector. A
/// degenerate set inside the chosen sector is resolved by projecting the
/// cluster state of the same geometry onto it.
inline StateVector representative_ground_state(const ChainSpec& spec, double* energy = nullptr) {
  const OperatorMatrix h = build_hamiltonian(spec);
  auto manifold = ground_spectrum(h, kDegeneracyTol, ParitySector::even);
  const auto odd = ground_spectrum(h, 0.0, ParitySector::odd);
  if (odd.energies.front() < manifold.energies.front() - kDegeneracyTol)
    manifold = ground_spectrum(h, kDegeneracyTol, ParitySector::odd);
  if (energy) *energy = manifold.energies.front();
  if (manifold.vectors.size() <= 1) return manifold.vectors.front();
  const StateVector ref = build_cluster_state(spec);
  StateVector p(spec.n_sites);
  for (const auto& u : manifold.vectors) {
    StateVector t = u;
    t *= u.inner(ref);
    p += t;
  }
  if (p.norm() < 1e-8) return manifold.vectors.front();
  return p.normalized();
}

/// One grid point without derivative.
inline SweepRecord sweep_point(const ChainSpec& spec, const OptimizerOptions& opt = {}) {
  SweepRecord r;
  r.lambda = spec.lambda;
  r.n_sites = spec.n_sites;
  r.boundary = spec.boundary;
  const StateVector v = representative_ground_state(spec, &r.energy);
  if (spec.boundary == Boundary::periodic && spec.n_sites % 2 == 0) {
    r.gap = quasiparticle_gap(spec.lambda, spec.n_sites);
  } else {
    const auto e = lowest_energies(build_hamiltonian(spec), 2);
    r.gap = e[1] - e[0];
  }
  r.string_order = string_order(v);
  const int sep = spec.boundary == Boundary::periodic ? spec.n_sites / 2 : spec.n_sites - 1;
  r.staggered_corr = staggered_correlator(v, sep, spec.boundary);
  r.geo_ent = geometric_entanglement(v, opt).epsilon;
  r.geo_ent_per_site = r.geo_ent / spec.n_sites;
  return r;
}

/// Central differences d eps / d lambda on the interior points.
inline void fill_derivatives(std::vector<SweepRecord>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].geo_ent_deriv.reset();
    if (i == 0 || i + 1 == rows.size()) continue;
    rows[i].geo_ent_deriv = (rows[i + 1].geo_ent - rows[i - 1].geo_ent) / (rows[i + 1].lambda - rows[i - 1].lambda);
  }
}

/// lambda of maximal |d eps / d lambda| (NaN when no interior point exists).
inline double derivative_peak(const std::vector<SweepRecord>& rows) {
  double best = -1.0, at = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : rows)
    if (r.geo_ent_deriv && std::abs(*r.geo_ent_deriv) > best) {
      best = std::abs(*r.geo_ent_deriv);
      at = r.lambda;
    }
  return at;
}

inline std::vector<SweepRecord> sweep_entanglement(const ChainSpec& spec_template, const std::vector<double>& grid,
                                                   const OptimizerOptions& opt = {}) {
  if (!std::is_sorted(grid.begin(), grid.end()) || std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw std::invalid_argument("sweep_entanglement: grid must be strictly increasing");
  std::vector<SweepRecord> rows;
  for (double l : grid) rows.push_back(sweep_point(spec_template.with_lambda(l), opt));
  fill_derivatives(rows);
  return rows;
}

}  // namespace clusterlab
