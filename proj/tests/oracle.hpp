#pragma once

// Test-only reference constructions: operators assembled from 2x2 Pauli
// matrices by Kronecker products, independent of the bitmask kernels.

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <random>
#include <string>

#include "clusterlab/pauli.hpp"

namespace oracle {

using clusterlab::cplx;

inline Eigen::Matrix2cd pauli2(char c) {
  Eigen::Matrix2cd m;
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

/// Dense matrix of a letter string (site 0 first) times `phase`. Site 0 is the
/// least significant bit, hence the rightmost Kronecker factor.
inline Eigen::MatrixXcd dense(const std::string& letters, cplx phase = 1.0) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (char c : letters) {
    Eigen::MatrixXcd next = Eigen::kroneckerProduct(pauli2(c), m).eval();
    m = next;
  }
  return phase * m;
}

inline Eigen::MatrixXcd dense(const clusterlab::PauliString& p) { return dense(p.letters(), p.phase()); }

inline clusterlab::PauliString random_string(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> l(0, 3), ph(0, 3);
  clusterlab::PauliString p(n);
  for (int j = 0; j < n; ++j) p = p.with(j, static_cast<clusterlab::Letter>(l(rng)));
  return p.times_i(ph(rng));
}

inline clusterlab::StateVector random_state(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  clusterlab::StateVector v(n);
  for (auto& a : v.amplitudes()) a = cplx(g(rng), g(rng));
  return v.normalized();
}

inline Eigen::VectorXcd to_eigen(const clusterlab::StateVector& v) {
  Eigen::VectorXcd e(static_cast<Eigen::Index>(v.dimension()));
  for (std::size_t i = 0; i < v.dimension(); ++i) e(static_cast<Eigen::Index>(i)) = v[i];
  return e;
}

}  // namespace oracle
