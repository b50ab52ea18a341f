#pragma once

// Lattice conventions, the cluster-Ising Hamiltonian
//   H(lambda) = -sum_i X_{i-1} Z_i X_{i+1} + lambda sum_i Y_i Y_{i+1},
// its stabilizers, and the cluster ground state.

#include <numeric>
#include <sstream>

#include "clusterlab/operator.hpp"

namespace clusterlab {

enum class Boundary { open, periodic };

inline const char* to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

inline Boundary parse_boundary(std::string_view s) {
  if (s == "open") return Boundary::open;
  if (s == "periodic") return Boundary::periodic;
  throw std::invalid_argument("unknown boundary '" + std::string(s) + "'");
}

/// Lattice size, coupling and boundary. A chain is the one-dimensional
/// hypercubic case; extents list the linear sizes per axis, axis 0 fastest in
/// the site index.
struct ChainSpec {
  int n_sites = 0;
  double lambda = 0.0;
  Boundary boundary = Boundary::periodic;
  std::vector<int> extents;

  static ChainSpec chain(int n, double lambda, Boundary boundary) {
    ChainSpec s{n, lambda, boundary, {n}};
    s.validate();
    return s;
  }

  static ChainSpec hypercubic(std::vector<int> extents, Boundary boundary = Boundary::periodic) {
    int n = std::accumulate(extents.begin(), extents.end(), 1, std::multiplies<>());
    ChainSpec s{n, 0.0, boundary, std::move(extents)};
    s.validate();
    return s;
  }

  int dimension() const { return static_cast<int>(extents.size()); }
  bool is_chain() const { return extents.size() == 1; }

  ChainSpec with_lambda(double l) const {
    ChainSpec s = *this;
    s.lambda = l;
    return s;
  }

  void validate() const {
    if (n_sites < 1) throw std::invalid_argument("ChainSpec: n_sites must be positive");
    if (lambda < 0.0 || !std::isfinite(lambda)) throw std::invalid_argument("ChainSpec: lambda must be finite and >= 0");
    if (extents.empty()) throw std::invalid_argument("ChainSpec: no extents");
    int prod = 1;
    for (int e : extents) {
      if (e < 1) throw std::invalid_argument("ChainSpec: extents must be positive");
      if (boundary == Boundary::periodic && e < 3) {
        throw std::invalid_argument("ChainSpec: periodic extents must be >= 3");
      }
      prod *= e;
    }
    if (prod != n_sites) throw std::invalid_argument("ChainSpec: extents do not multiply to n_sites");
    if (n_sites > kMaxPauliLength) throw CapacityError("ChainSpec: more than 64 sites");
  }

  /// Canonical text form, used for cache keys and manifests.
  std::string canonical() const {
    std::ostringstream os;
    os.precision(17);
    os << "n=" << n_sites << ";lambda=" << lambda << ";boundary=" << to_string(boundary) << ";extents=";
    for (std::size_t a = 0; a < extents.size(); ++a) os << (a ? "x" : "") << extents[a];
    return os.str();
  }
};

namespace detail {

inline std::vector<int> coords_of(const ChainSpec& s, int site) {
  std::vector<int> c(s.extents.size());
  for (std::size_t a = 0; a < s.extents.size(); ++a) {
    c[a] = site % s.extents[a];
    site /= s.extents[a];
  }
  return c;
}

inline int site_of(const ChainSpec& s, const std::vector<int>& c) {
  int site = 0, stride = 1;
  for (std::size_t a = 0; a < s.extents.size(); ++a) {
    site += c[a] * stride;
    stride *= s.extents[a];
  }
  return site;
}

/// Neighbour of `site` one step along `axis` in direction `dir` (+1/-1), or -1
/// if it falls off an open edge.
inline int step(const ChainSpec& s, int site, std::size_t axis, int dir) {
  auto c = coords_of(s, site);
  int v = c[axis] + dir;
  const int e = s.extents[axis];
  if (v < 0 || v >= e) {
    if (s.boundary == Boundary::open) return -1;
    v = (v + e) % e;
  }
  c[axis] = v;
  return site_of(s, c);
}

}  // namespace detail

/// Oriented nearest-neighbour bonds (site, site + e_axis), each listed once.
inline std::vector<std::pair<int, int>> lattice_bonds(const ChainSpec& s) {
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i < s.n_sites; ++i) {
    for (std::size_t a = 0; a < s.extents.size(); ++a) {
      const int j = detail::step(s, i, a, +1);
      if (j >= 0 && j != i) bonds.emplace_back(i, j);
    }
  }
  return bonds;
}

/// All lattice neighbours of `site` (2d of them in the bulk).
inline std::vector<int> neighbours(const ChainSpec& s, int site) {
  std::vector<int> out;
  for (std::size_t a = 0; a < s.extents.size(); ++a) {
    for (int dir : {-1, +1}) {
      const int j = detail::step(s, site, a, dir);
      if (j >= 0) out.push_back(j);
    }
  }
  return out;
}

/// Cluster stabilizers K_i = Z_i prod_{j in N(i)} X_j. Open lattices keep only
/// sites whose full neighbourhood exists.
inline std::vector<PauliString> stabilizer_list(const ChainSpec& s) {
  s.validate();
  std::vector<PauliString> out;
  const std::size_t full = 2 * s.extents.size();
  for (int i = 0; i < s.n_sites; ++i) {
    const auto nb = neighbours(s, i);
    if (nb.size() != full) continue;
    PauliString k = PauliString::single(s.n_sites, i, Letter::Z);
    for (int j : nb) k = k.with(j, Letter::X);
    out.push_back(k);
  }
  return out;
}

/// H_C = -sum_i K_i on any supported geometry.
inline OperatorMatrix build_cluster_hamiltonian(const ChainSpec& s) {
  OperatorMatrix h(s.n_sites);
  for (const auto& k : stabilizer_list(s)) h.add(-1.0, k);
  return h;
}

/// Ising bonds Y_i Y_{i+1} of a chain (wraparound bond included if periodic).
inline OperatorMatrix build_ising_term(const ChainSpec& s) {
  OperatorMatrix h(s.n_sites);
  for (const auto& [i, j] : lattice_bonds(s)) {
    h.add(1.0, PauliString(s.n_sites).with(i, Letter::Y).with(j, Letter::Y));
  }
  return h;
}

/// Periodic: cluster and Ising sums over every site. Open: cluster terms
/// i = 2..N-1 and Ising bonds i = 1..N-1 (1-based), which leaves the
/// four-fold ground manifold at lambda = 0 intact.
inline OperatorMatrix build_hamiltonian(const ChainSpec& s) {
  s.validate();
  if (!s.is_chain()) throw std::invalid_argument("build_hamiltonian: chain geometry required");
  if (s.n_sites > kMaxDenseSites) throw CapacityError("build_hamiltonian: more than 16 sites");
  if (s.n_sites < 4) throw std::invalid_argument("build_hamiltonian: need at least 4 sites");
  OperatorMatrix h = build_cluster_hamiltonian(s);
  if (s.lambda != 0.0) h.add(build_ising_term(s), s.lambda);
  return h;
}

namespace detail {

inline void hadamard_all(StateVector& v) {
  auto a = v.amplitudes();
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t h = 1; h < a.size(); h <<= 1) {
    for (std::size_t i = 0; i < a.size(); i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const cplx u = a[j], w = a[j + h];
        a[j] = (u + w) * r;
        a[j + h] = (u - w) * r;
      }
    }
  }
}

}  // namespace detail

/// Simultaneous +1 eigenstate of the stabilizers: a graph state on the lattice
/// bonds (|+>^N followed by controlled-Z on each bond) rotated by a Hadamard
/// on every site, which swaps the X and Z letters of the graph stabilizers.
/// Open chains yield the member of the ground manifold that is also
/// stabilized by the end operators Z_1 X_2 and X_{N-1} Z_N.
inline StateVector build_cluster_state(const ChainSpec& s) {
  s.validate();
  if (s.n_sites > 24) throw CapacityError("build_cluster_state: too many sites");
  StateVector v = StateVector::basis(s.n_sites, 0);
  detail::hadamard_all(v);
  const auto bonds = lattice_bonds(s);
  for (std::uint64_t b = 0; b < v.dimension(); ++b) {
    int parity = 0;
    for (const auto& [i, j] : bonds) parity ^= static_cast<int>((b >> i) & (b >> j) & 1U);
    if (parity) v[b] = -v[b];
  }
  detail::hadamard_all(v);
  for (const auto& k : stabilizer_list(s)) {
    const cplx e = expectation(k, v);
    if (std::abs(e - 1.0) > 1e-10) {
      throw std::logic_error("build_cluster_state: stabilizer " + k.str() + " not satisfied");
    }
  }
  return v;
}

/// Sign readings of the bond factor C = (1 -+ X_a -+ X_b - X_a X_b).
enum class BondFactorSign { printed, flipped };

/// prod_bonds C_b |0...0> / 2^{#bonds}, with C_b = 1 - X_a - X_b - X_a X_b
/// (printed) or 1 + X_a + X_b - X_a X_b (flipped).
inline StateVector product_formula_state(const ChainSpec& s, BondFactorSign sign) {
  s.validate();
  const double c = (sign == BondFactorSign::printed) ? -1.0 : 1.0;
  StateVector v = StateVector::basis(s.n_sites, 0);
  for (const auto& [a, b] : lattice_bonds(s)) {
    OperatorMatrix f(s.n_sites);
    f.add(0.5, PauliString(s.n_sites));
    f.add(0.5 * c, PauliString::single(s.n_sites, a, Letter::X));
    f.add(0.5 * c, PauliString::single(s.n_sites, b, Letter::X));
    f.add(-0.5, PauliString(s.n_sites).with(a, Letter::X).with(b, Letter::X));
    v = f.apply(v);
  }
  return v;
}

}  // namespace clusterlab
