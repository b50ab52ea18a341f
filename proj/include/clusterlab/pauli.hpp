#pragma once

// Pauli strings and dense state vectors.
//
// Bit ordering: site j (0-based) is bit j of the basis-state index, so the
// first site of the chain is the least significant bit. A set bit means the
// site is in |1> (sigma^z = -1); |0> is the sigma^z = +1 state.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace clusterlab {

using cplx = std::complex<double>;

inline constexpr int kMaxPauliLength = 64;

enum class Letter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

enum class Commutation { commuting, anticommuting };

/// i^k for k taken mod 4.
inline cplx i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// Tensor product of single-site Pauli letters times a phase i^k.
///
/// Letters are stored symplectically: X sets the x bit, Z the z bit and Y
/// both. The stored letter Y is the Hermitian sigma^y, so a string with
/// phase exponent 0 or 2 is Hermitian.
class PauliString {
 public:
  PauliString() = default;

  explicit PauliString(int length) : length_(length) {
    if (length < 0 || length > kMaxPauliLength) {
      throw std::invalid_argument("PauliString: length must be in [0, 64]");
    }
  }

  /// Parses "XZXI" (site 0 first). An optional leading sign "+", "-", "i",
  /// "+i" or "-i" sets the phase.
  static PauliString parse(std::string_view text) {
    int phase = 0;
    if (text.starts_with("+i")) { phase = 1; text.remove_prefix(2); }
    else if (text.starts_with("-i")) { phase = 3; text.remove_prefix(2); }
    else if (text.starts_with("i")) { phase = 1; text.remove_prefix(1); }
    else if (text.starts_with("+")) { text.remove_prefix(1); }
    else if (text.starts_with("-")) { phase = 2; text.remove_prefix(1); }
    PauliString p(static_cast<int>(text.size()));
    for (std::size_t j = 0; j < text.size(); ++j) {
      switch (text[j]) {
        case 'I': case 'i': case '1': break;
        case 'X': case 'x': p = p.with(static_cast<int>(j), Letter::X); break;
        case 'Y': case 'y': p = p.with(static_cast<int>(j), Letter::Y); break;
        case 'Z': case 'z': p = p.with(static_cast<int>(j), Letter::Z); break;
        default: throw std::invalid_argument("PauliString::parse: bad letter");
      }
    }
    p.phase_ = phase;
    return p;
  }

  static PauliString single(int length, int site, Letter letter) {
    return PauliString(length).with(site, letter);
  }

  static PauliString from_masks(int length, std::uint64_t x, std::uint64_t z,
                                int phase_exponent = 0) {
    PauliString p(length);
    const std::uint64_t m = mask_for(length);
    if ((x & ~m) != 0 || (z & ~m) != 0) {
      throw std::invalid_argument("PauliString: mask exceeds length");
    }
    p.x_ = x;
    p.z_ = z;
    p.phase_ = ((phase_exponent % 4) + 4) % 4;
    return p;
  }

  int length() const { return length_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }
  int phase_exponent() const { return phase_; }
  cplx phase() const { return i_pow(phase_); }

  Letter letter(int site) const {
    check_site(site);
    const bool xb = (x_ >> site) & 1U;
    const bool zb = (z_ >> site) & 1U;
    if (xb && zb) return Letter::Y;
    if (xb) return Letter::X;
    if (zb) return Letter::Z;
    return Letter::I;
  }

  /// Copy with the letter on `site` replaced (phase untouched).
  PauliString with(int site, Letter letter) const {
    check_site(site);
    PauliString p = *this;
    const std::uint64_t bit = std::uint64_t{1} << site;
    p.x_ &= ~bit;
    p.z_ &= ~bit;
    if (letter == Letter::X || letter == Letter::Y) p.x_ |= bit;
    if (letter == Letter::Z || letter == Letter::Y) p.z_ |= bit;
    return p;
  }

  /// Copy multiplied by i^k.
  PauliString times_i(int k) const {
    PauliString p = *this;
    p.phase_ = (((phase_ + k) % 4) + 4) % 4;
    return p;
  }

  PauliString operator-() const { return times_i(2); }

  int weight() const { return std::popcount(x_ | z_); }
  bool is_identity() const { return (x_ | z_) == 0; }
  bool is_hermitian() const { return phase_ % 2 == 0; }
  int y_count() const { return std::popcount(x_ & z_); }

  std::string letters() const {
    std::string s(static_cast<std::size_t>(length_), 'I');
    for (int j = 0; j < length_; ++j) s[static_cast<std::size_t>(j)] = "IXYZ"[static_cast<int>(letter(j))];
    return s;
  }

  std::string str() const {
    static constexpr const char* kPrefix[] = {"+", "+i", "-", "-i"};
    return std::string(kPrefix[phase_]) + letters();
  }

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  static std::uint64_t mask_for(int length) {
    return length == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << length) - 1);
  }
  void check_site(int site) const {
    if (site < 0 || site >= length_) throw std::out_of_range("PauliString: site out of range");
  }

  int length_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int phase_ = 0;
};

/// Phase-tracked product a*b.
inline PauliString pauli_mul(const PauliString& a, const PauliString& b) {
  if (a.length() != b.length()) throw std::invalid_argument("pauli_mul: length mismatch");
  // sigma(x,z) = i^{x.z} X^x Z^z, and Z^za X^xb = (-1)^{za.xb} X^xb Z^za.
  const std::uint64_t xc = a.x_mask() ^ b.x_mask();
  const std::uint64_t zc = a.z_mask() ^ b.z_mask();
  int k = a.phase_exponent() + b.phase_exponent();
  k += std::popcount(a.x_mask() & a.z_mask()) + std::popcount(b.x_mask() & b.z_mask());
  k -= std::popcount(xc & zc);
  k += 2 * std::popcount(a.z_mask() & b.x_mask());
  return PauliString::from_masks(a.length(), xc, zc, k);
}

inline PauliString operator*(const PauliString& a, const PauliString& b) { return pauli_mul(a, b); }

inline Commutation commutation_class(const PauliString& a, const PauliString& b) {
  if (a.length() != b.length()) throw std::invalid_argument("commutation_class: length mismatch");
  const int n = std::popcount(a.x_mask() & b.z_mask()) + std::popcount(a.z_mask() & b.x_mask());
  return (n % 2 == 0) ? Commutation::commuting : Commutation::anticommuting;
}

inline bool commutes(const PauliString& a, const PauliString& b) {
  return commutation_class(a, b) == Commutation::commuting;
}

/// Dense amplitude vector over 2^N basis states.
class StateVector {
 public:
  StateVector() = default;

  explicit StateVector(int qubits) : qubits_(qubits) {
    if (qubits < 1 || qubits > 30) throw std::invalid_argument("StateVector: qubit count out of range");
    amp_.assign(std::size_t{1} << qubits, cplx{0.0, 0.0});
  }

  StateVector(int qubits, std::vector<cplx> amplitudes) : qubits_(qubits), amp_(std::move(amplitudes)) {
    if (qubits < 1 || qubits > 30 || amp_.size() != (std::size_t{1} << qubits)) {
      throw std::invalid_argument("StateVector: amplitude count must be 2^N");
    }
  }

  static StateVector basis(int qubits, std::uint64_t index) {
    StateVector v(qubits);
    v.amp_.at(index) = 1.0;
    return v;
  }

  int qubit_count() const { return qubits_; }
  std::size_t dimension() const { return amp_.size(); }

  std::span<cplx> amplitudes() { return amp_; }
  std::span<const cplx> amplitudes() const { return amp_; }
  cplx& operator[](std::size_t i) { return amp_[i]; }
  const cplx& operator[](std::size_t i) const { return amp_[i]; }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
  }

  StateVector normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("StateVector: cannot normalize zero vector");
    StateVector out = *this;
    for (auto& a : out.amp_) a /= n;
    return out;
  }

  /// <this|other>
  cplx inner(const StateVector& other) const {
    if (other.qubits_ != qubits_) throw std::invalid_argument("StateVector::inner: size mismatch");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < amp_.size(); ++i) s += std::conj(amp_[i]) * other.amp_[i];
    return s;
  }

  StateVector& operator+=(const StateVector& o) {
    for (std::size_t i = 0; i < amp_.size(); ++i) amp_[i] += o.amp_[i];
    return *this;
  }
  StateVector& operator*=(cplx s) {
    for (auto& a : amp_) a *= s;
    return *this;
  }

 private:
  int qubits_ = 0;
  std::vector<cplx> amp_;
};

/// Amplitude factor picked up by basis state |b> under p: p|b> = f(b) |b ^ x>.
inline cplx pauli_factor(const PauliString& p, std::uint64_t b) {
  int k = p.phase_exponent() + p.y_count() + 2 * std::popcount(p.z_mask() & b);
  return i_pow(k);
}

/// out += coeff * p * in, over raw spans of size 2^N.
inline void accumulate_pauli(const PauliString& p, cplx coeff, std::span<const cplx> in,
                             std::span<cplx> out) {
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  const cplx base = coeff * i_pow(p.phase_exponent() + p.y_count());
  const std::size_t dim = in.size();
  for (std::size_t b = 0; b < dim; ++b) {
    const cplx a = in[b];
    if (a == cplx{}) continue;
    const bool neg = std::popcount(z & b) & 1;
    out[b ^ x] += neg ? -base * a : base * a;
  }
}

inline StateVector apply_pauli(const PauliString& p, const StateVector& v) {
  if (p.length() != v.qubit_count()) throw std::invalid_argument("apply_pauli: length mismatch");
  StateVector out(v.qubit_count());
  accumulate_pauli(p, 1.0, v.amplitudes(), out.amplitudes());
  return out;
}

/// <v|p|v>
inline cplx expectation(const PauliString& p, const StateVector& v) {
  if (p.length() != v.qubit_count()) throw std::invalid_argument("expectation: length mismatch");
  const std::uint64_t x = p.x_mask();
  const std::uint64_t z = p.z_mask();
  const cplx base = i_pow(p.phase_exponent() + p.y_count());
  cplx s{0.0, 0.0};
  for (std::size_t b = 0; b < v.dimension(); ++b) {
    const cplx t = std::conj(v[b ^ x]) * v[b];
    s += (std::popcount(z & b) & 1) ? -t : t;
  }
  return base * s;
}

}  // namespace clusterlab
