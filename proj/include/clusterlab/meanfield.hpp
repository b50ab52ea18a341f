#pragma once

// Mean-field decoupling of the Ising term around the cluster Hamiltonian on
// periodic hypercubic clusters. chi_i = sum_m |<C_0|Y_i|C_m>|^2 / (e_m - e_0)
// and lambda_c = 1 / (4 d chi).

#include <boost/math/quadrature/exp_sinh.hpp>

#include "clusterlab/ed.hpp"

namespace clusterlab {

struct SusceptibilityResult {
  double chi = 0.0;             // spectral sum
  double chi_quadrature = 0.0;  // sum of integral_0^inf e^{-(e_m - e_0) tau} d tau
  double sum_rule = 0.0;        // sum over all m, ground space included
  std::string lattice;
  int site = 0;
  int ground_degeneracy = 1;
  bool degenerate = false;
};

inline std::string describe_lattice(const ChainSpec& s) {
  std::string out = "d=" + std::to_string(s.dimension()) + " ";
  for (std::size_t a = 0; a < s.extents.size(); ++a) {
    if (a) out += "x";
    out += std::to_string(s.extents[a]);
  }
  out += s.boundary == Boundary::periodic ? " periodic" : " open";
  return out;
}

inline constexpr int kMeanFieldMaxSites = 12;

namespace detail {

inline void check_meanfield_lattice(const ChainSpec& s) {
  s.validate();
  if (s.boundary != Boundary::periodic) throw std::invalid_argument("susceptibility: periodic lattice required");
  if (s.n_sites > kMeanFieldMaxSites) throw CapacityError("susceptibility: more than 12 sites");
  for (int e : s.extents)
    if (e < 3) throw std::invalid_argument("susceptibility: every extent must be at least 3");
}

}  // namespace detail

/// Full diagonalization of H_C and the local Y_i response, evaluated as a
/// spectral sum and as a time integral. A degenerate ground space is averaged.
inline SusceptibilityResult susceptibility(const ChainSpec& lattice, int site) {
  detail::check_meanfield_lattice(lattice);
  if (site < 0 || site >= lattice.n_sites) throw std::out_of_range("susceptibility: site out of range");
  const OperatorMatrix hc = build_cluster_hamiltonian(lattice);

  // H_C is a real symmetric matrix.
  const Eigen::MatrixXd hm = hc.dense().real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hm);
  const Eigen::VectorXd& e = es.eigenvalues();
  const Eigen::MatrixXd& u = es.eigenvectors();
  const double e0 = e(0);
  int g = 0;
  while (g < e.size() && e(g) - e0 <= kDegeneracyTol) ++g;

  // i Y_i is real: (i Y_i psi)[b] = (b_i ? -1 : 1) psi[b ^ 2^i].
  const std::uint64_t mask = std::uint64_t{1} << site;
  Eigen::MatrixXd ground_y(u.rows(), g);  // column a = i Y_i |C_a>
  for (int a = 0; a < g; ++a)
    for (Eigen::Index b = 0; b < u.rows(); ++b) {
      const auto src = static_cast<Eigen::Index>(static_cast<std::uint64_t>(b) ^ mask);
      ground_y(b, a) = (static_cast<std::uint64_t>(b) & mask ? -1.0 : 1.0) * u(src, a);
    }
  const Eigen::MatrixXd overlaps = ground_y.transpose() * u;  // g x dim
  std::vector<std::pair<double, double>> weights;  // (gap, weight averaged over the ground space)
  SusceptibilityResult out;
  out.lattice = describe_lattice(lattice);
  out.site = site;
  out.ground_degeneracy = g;
  out.degenerate = g > 1;
  for (Eigen::Index m = 0; m < e.size(); ++m) {
    double w = 0.0;
    for (int a = 0; a < g; ++a) w += overlaps(a, m) * overlaps(a, m);
    w /= g;
    out.sum_rule += w;
    if (m >= g) weights.emplace_back(e(m) - e0, w);
  }
  for (const auto& [d, w] : weights) out.chi += w / d;

  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double tau) {
    double s = 0.0;
    for (const auto& [d, w] : weights)
      if (w > 0.0) s += w * std::exp(-d * tau);
    return s;
  };
  out.chi_quadrature = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
  return out;
}

/// lambda_c = 1 / (4 d chi).
inline double critical_coupling(int dimension, double chi) {
  if (dimension < 1) throw std::invalid_argument("critical_coupling: dimension must be positive");
  if (!(chi > 0.0)) throw std::invalid_argument("critical_coupling: chi must be positive");
  return 1.0 / (4.0 * dimension * chi);
}

struct CriticalCouplingReport {
  int dimension = 0;
  std::string lattice;
  double chi = 0.0;
  double chi_quadrature = 0.0;
  double sum_rule = 0.0;
  double lambda_c = 0.0;
  double claimed = 1.0;
  double deviation = 0.0;  // lambda_c - claimed
};

inline CriticalCouplingReport critical_coupling(const ChainSpec& lattice, int site = 0) {
  const auto s = susceptibility(lattice, site);
  CriticalCouplingReport r;
  r.dimension = lattice.dimension();
  r.lattice = s.lattice;
  r.chi = s.chi;
  r.chi_quadrature = s.chi_quadrature;
  r.sum_rule = s.sum_rule;
  r.lambda_c = critical_coupling(r.dimension, s.chi);
  r.deviation = r.lambda_c - r.claimed;
  return r;
}

}  // namespace clusterlab
