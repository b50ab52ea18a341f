#pragma once

// Operators on N qubits stored as weighted sums of Pauli strings. The dense
// matrix is only materialized on request; matrix-free application costs
// O(terms * 2^N).

#include <Eigen/Dense>

#include <map>
#include <utility>

#include "clusterlab/pauli.hpp"

namespace clusterlab {

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxDenseSites = 16;

struct PauliTerm {
  cplx coeff;
  PauliString op;
};

class OperatorMatrix {
 public:
  OperatorMatrix() = default;
  explicit OperatorMatrix(int n_sites) : n_(n_sites) {
    if (n_sites < 1 || n_sites > kMaxPauliLength) throw std::invalid_argument("OperatorMatrix: bad site count");
  }

  int n_sites() const { return n_; }
  std::size_t dimension() const { return std::size_t{1} << n_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }

  OperatorMatrix& add(cplx coeff, const PauliString& op) {
    if (op.length() != n_) throw std::invalid_argument("OperatorMatrix::add: length mismatch");
    terms_.push_back({coeff, op});
    return *this;
  }

  OperatorMatrix& add(const OperatorMatrix& other, cplx scale = 1.0) {
    if (other.n_ != n_) throw std::invalid_argument("OperatorMatrix::add: size mismatch");
    for (const auto& t : other.terms_) terms_.push_back({scale * t.coeff, t.op});
    return *this;
  }

  /// Merges equal letter patterns, folds string phases into coefficients and
  /// drops terms below `tol`.
  OperatorMatrix simplified(double tol = 1e-14) const {
    std::map<std::pair<std::uint64_t, std::uint64_t>, cplx> acc;
    for (const auto& t : terms_) {
      acc[{t.op.x_mask(), t.op.z_mask()}] += t.coeff * t.op.phase();
    }
    OperatorMatrix out(n_);
    for (const auto& [key, c] : acc) {
      if (std::abs(c) > tol) out.add(c, PauliString::from_masks(n_, key.first, key.second));
    }
    return out;
  }

  /// Hermitian iff every merged coefficient of a Hermitian Pauli string is real.
  bool is_hermitian(double tol = 1e-12) const {
    const OperatorMatrix s = simplified();
    for (const auto& t : s.terms_) {
      if (std::abs(t.coeff.imag()) > tol) return false;
    }
    return true;
  }

  bool is_real() const {
    // Y-count parity decides whether a string has imaginary entries.
    const OperatorMatrix s = simplified();
    for (const auto& t : s.terms_) {
      cplx eff = t.coeff * i_pow(t.op.y_count());
      if (std::abs(eff.imag()) > 1e-14) return false;
    }
    return true;
  }

  cplx trace() const {
    cplx s{0.0, 0.0};
    for (const auto& t : terms_) {
      if (t.op.is_identity()) s += t.coeff * t.op.phase();
    }
    return s * static_cast<double>(dimension());
  }

  /// out = H in
  void apply(std::span<const cplx> in, std::span<cplx> out) const {
    std::fill(out.begin(), out.end(), cplx{});
    for (const auto& t : terms_) accumulate_pauli(t.op, t.coeff, in, out);
  }

  StateVector apply(const StateVector& v) const {
    if (v.qubit_count() != n_) throw std::invalid_argument("OperatorMatrix::apply: size mismatch");
    StateVector out(n_);
    apply(v.amplitudes(), out.amplitudes());
    return out;
  }

  cplx expectation(const StateVector& v) const {
    StateVector hv = apply(v);
    return v.inner(hv);
  }

  Eigen::MatrixXcd dense() const {
    if (n_ > 12) throw CapacityError("OperatorMatrix::dense: more than 12 sites");
    const auto dim = static_cast<Eigen::Index>(dimension());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    const OperatorMatrix s = simplified();
    for (const auto& t : s.terms_) {
      const std::uint64_t x = t.op.x_mask();
      for (std::uint64_t b = 0; b < dimension(); ++b) {
        m(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += t.coeff * pauli_factor(t.op, b);
      }
    }
    return m;
  }

  OperatorMatrix operator*(const OperatorMatrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("OperatorMatrix product: size mismatch");
    OperatorMatrix out(n_);
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) out.add(a.coeff * b.coeff, pauli_mul(a.op, b.op));
    return out.simplified();
  }

 private:
  int n_ = 0;
  std::vector<PauliTerm> terms_;
};

inline double max_entry_difference(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace clusterlab
