#pragma once

// Global string operators X1, Z1, X2, Z2 acting on the four-fold ground space
// of the open cluster chain, their algebra, and symmetry protection of the
// degeneracy.
//
// The operators repeat a 6-site cell over sites 1..L-2 (L = 6m + 2) and close
// with a short tail on the last sites. The tail letters are not fixed a
// priori: the printed three-letter tails are tried first (placed on sites
// L-2, L-1, L and multiplied onto the bulk letters), and if the algebra fails
// the letters on the last four sites are searched for the assignment closest
// to the printed one that commutes with every stabilizer and realizes the
// two-qubit pattern.

#include <array>
#include <map>
#include <optional>

#include "clusterlab/ed.hpp"

namespace clusterlab {

enum class LogicalName { x1, z1, x2, z2 };

inline const char* to_string(LogicalName n) {
  static constexpr const char* kNames[] = {"X1", "Z1", "X2", "Z2"};
  return kNames[static_cast<int>(n)];
}

inline constexpr std::array<LogicalName, 4> kLogicalNames{LogicalName::x1, LogicalName::z1, LogicalName::x2,
                                                          LogicalName::z2};

struct LogicalPattern {
  std::string_view cell;  // sites 6n+1 .. 6n+6
  std::string_view tail;  // printed letters for the end sites
};

inline constexpr std::array<LogicalPattern, 4> kLogicalPatterns{{
    {"YZZYXX", "YZZ"},
    {"XXYZZY", "XXY"},
    {"XYZZYX", "XYZ"},
    {"YXXYZZ", "YXX"},
}};

/// How the end of the chain was closed.
struct TailConvention {
  std::string kind;  // "printed" or "searched"
  std::array<std::string, 4> window;  // letters on sites L-3..L per operator
  std::array<int, 4> corrections{};   // sites changed relative to the printed tail
  std::array<int, 4> raw_phase{};     // phase exponent of the printed product before normalization
};

struct LogicalOperatorSet {
  int length = 0;
  PauliString x1, z1, x2, z2;
  TailConvention tail_convention;

  const PauliString& get(LogicalName n) const {
    switch (n) {
      case LogicalName::x1: return x1;
      case LogicalName::z1: return z1;
      case LogicalName::x2: return x2;
      default: return z2;
    }
  }
  PauliString& get(LogicalName n) { return const_cast<PauliString&>(std::as_const(*this).get(n)); }
};

struct PairClass {
  LogicalName a, b;
  Commutation cls;
  bool expected_anticommuting = false;
};

struct AlgebraReport {
  int length = 0;
  bool squares_ok = false;
  std::vector<PairClass> pair_classes;  // all 6 pairs
  bool pattern_ok = false;              // {X1,Z1} = {X2,Z2} = 0, others commute
  bool commutes_with_H0 = false;
  std::vector<std::pair<LogicalName, int>> violations;  // (operator, 1-based stabilizer center)
  std::vector<int> lengths_tested;
};

inline bool is_constructible_length(int L) { return L >= 8 && (L - 8) % 6 == 0; }

/// L = 3(2k + 1): the family named alongside the printed operators. It never
/// meets the constructible family L = 6m + 2.
inline bool is_odd_multiple_of_three(int L) { return L > 0 && L % 3 == 0 && (L / 3) % 2 == 1; }

namespace detail {

inline Letter letter_of(char c) {
  switch (c) {
    case 'X': return Letter::X;
    case 'Y': return Letter::Y;
    case 'Z': return Letter::Z;
    default: return Letter::I;
  }
}

/// Bulk cells on sites 1..L-2, then the printed tail multiplied onto sites
/// L-2, L-1, L. The phase picked up by the product is returned separately and
/// the string itself is normalized to phase +1.
inline std::pair<PauliString, int> printed_logical(LogicalName n, int L) {
  const auto& pat = kLogicalPatterns[static_cast<std::size_t>(n)];
  PauliString p(L);
  for (int c = 0; c <= (L - 8) / 6; ++c)
    for (int j = 0; j < 6; ++j) p = p.with(6 * c + j, letter_of(pat.cell[static_cast<std::size_t>(j)]));
  PauliString tail(L);
  for (int j = 0; j < 3; ++j) tail = tail.with(L - 3 + j, letter_of(pat.tail[static_cast<std::size_t>(j)]));
  const PauliString prod = p * tail;
  return {PauliString::from_masks(L, prod.x_mask(), prod.z_mask()), prod.phase_exponent()};
}

inline bool commutes_with_all(const PauliString& p, const std::vector<PauliString>& ks) {
  return std::all_of(ks.begin(), ks.end(), [&](const PauliString& k) { return commutes(p, k); });
}

inline bool expected_anticommuting(LogicalName a, LogicalName b) {
  auto is = [&](LogicalName x, LogicalName y) { return (a == x && b == y) || (a == y && b == x); };
  return is(LogicalName::x1, LogicalName::z1) || is(LogicalName::x2, LogicalName::z2);
}

inline bool pattern_holds(const std::array<PauliString, 4>& ops) {
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      if (!commutes(ops[i], ops[j]) != expected_anticommuting(kLogicalNames[i], kLogicalNames[j])) return false;
  return true;
}

inline std::string window_letters(const PauliString& p) {
  const int L = p.length();
  return p.letters().substr(static_cast<std::size_t>(L - 4));
}

}  // namespace detail

/// Builds the four logical operators for a constructible length L = 6m + 2.
inline LogicalOperatorSet logical_operators(int L) {
  if (!is_constructible_length(L)) {
    throw std::invalid_argument("logical_operators: L = " + std::to_string(L) +
                                " is not of the form 6m + 2 with L >= 8, so the repeating cells cannot be laid out");
  }
  LogicalOperatorSet set;
  set.length = L;
  std::array<PauliString, 4> printed;
  for (std::size_t i = 0; i < 4; ++i) {
    auto [p, phase] = detail::printed_logical(kLogicalNames[i], L);
    printed[i] = p;
    set.tail_convention.raw_phase[i] = phase;
  }
  const auto ks = stabilizer_list(ChainSpec::chain(L, 0.0, Boundary::open));
  const bool printed_ok = detail::pattern_holds(printed) &&
                          std::all_of(printed.begin(), printed.end(),
                                      [&](const PauliString& p) { return detail::commutes_with_all(p, ks); });
  if (printed_ok) {
    set.tail_convention.kind = "printed";
    for (std::size_t i = 0; i < 4; ++i) {
      set.get(kLogicalNames[i]) = printed[i];
      set.tail_convention.window[i] = detail::window_letters(printed[i]);
    }
    return set;
  }

  // Every letter assignment on sites L-3..L that commutes with all stabilizers,
  // ordered by distance to the printed tail, then lexicographically.
  std::array<std::vector<std::pair<int, PauliString>>, 4> cands;
  for (std::size_t i = 0; i < 4; ++i) {
    for (int code = 0; code < 256; ++code) {
      PauliString p = printed[i];
      int dist = 0;
      for (int s = 0; s < 4; ++s) {
        const auto letter = static_cast<Letter>((code >> (2 * (3 - s))) & 3);
        const int site = L - 4 + s;
        dist += printed[i].letter(site) != letter;
        p = p.with(site, letter);
      }
      if (detail::commutes_with_all(p, ks)) cands[i].emplace_back(dist, p);
    }
    std::stable_sort(cands[i].begin(), cands[i].end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  int best_cost = std::numeric_limits<int>::max();
  std::array<std::size_t, 4> best{};
  bool found = false;
  for (std::size_t a = 0; a < cands[0].size(); ++a)
    for (std::size_t b = 0; b < cands[1].size(); ++b)
      for (std::size_t c = 0; c < cands[2].size(); ++c)
        for (std::size_t d = 0; d < cands[3].size(); ++d) {
          const int cost = cands[0][a].first + cands[1][b].first + cands[2][c].first + cands[3][d].first;
          if (cost >= best_cost) continue;
          if (!detail::pattern_holds({cands[0][a].second, cands[1][b].second, cands[2][c].second, cands[3][d].second}))
            continue;
          best_cost = cost;
          best = {a, b, c, d};
          found = true;
        }
  if (!found) throw std::logic_error("logical_operators: no tail assignment realizes the algebra");
  set.tail_convention.kind = "searched";
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& [dist, p] = cands[i][best[i]];
    set.get(kLogicalNames[i]) = p;
    set.tail_convention.window[i] = detail::window_letters(p);
    set.tail_convention.corrections[i] = dist;
  }
  return set;
}

/// Symbolic check of squares, the six pair classes and commutation with the
/// stabilizers of the open chain.
inline AlgebraReport verify_algebra(const LogicalOperatorSet& ops, int hamiltonian_length) {
  if (hamiltonian_length != ops.length) throw std::invalid_argument("verify_algebra: length mismatch");
  AlgebraReport r;
  r.length = ops.length;
  r.lengths_tested = {ops.length};
  r.squares_ok = true;
  for (auto n : kLogicalNames) {
    const PauliString sq = ops.get(n) * ops.get(n);
    r.squares_ok = r.squares_ok && sq.is_identity() && sq.phase_exponent() == 0;
  }
  r.pattern_ok = true;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      const auto a = kLogicalNames[i], b = kLogicalNames[j];
      PairClass pc{a, b, commutation_class(ops.get(a), ops.get(b)), detail::expected_anticommuting(a, b)};
      r.pattern_ok = r.pattern_ok && ((pc.cls == Commutation::anticommuting) == pc.expected_anticommuting);
      r.pair_classes.push_back(pc);
    }
  const auto ks = stabilizer_list(ChainSpec::chain(ops.length, 0.0, Boundary::open));
  for (auto n : kLogicalNames)
    for (std::size_t k = 0; k < ks.size(); ++k)
      if (!commutes(ops.get(n), ks[k])) r.violations.emplace_back(n, static_cast<int>(k) + 2);
  r.commutes_with_H0 = r.violations.empty();
  return r;
}

/// Dense cross-check (L <= 10): squares and pair classes from explicit
/// matrices. Returns the largest deviation found.
inline double dense_algebra_deviation(const LogicalOperatorSet& ops) {
  if (ops.length > 10) throw CapacityError("dense_algebra_deviation: L > 10");
  auto mat = [&](const PauliString& p) {
    OperatorMatrix m(ops.length);
    m.add(1.0, p);
    return m.dense();
  };
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << ops.length);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  double dev = 0.0;
  std::array<Eigen::MatrixXcd, 4> m;
  for (std::size_t i = 0; i < 4; ++i) {
    m[i] = mat(ops.get(kLogicalNames[i]));
    dev = std::max(dev, max_entry_difference(m[i] * m[i], id));
  }
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) {
      const double sign = detail::expected_anticommuting(kLogicalNames[i], kLogicalNames[j]) ? 1.0 : -1.0;
      // expected: m_i m_j + sign * m_j m_i = 0
      dev = std::max(dev, (m[i] * m[j] + sign * m[j] * m[i]).cwiseAbs().maxCoeff());
    }
  const auto h0 = build_hamiltonian(ChainSpec::chain(ops.length, 0.0, Boundary::open)).dense();
  for (const auto& mi : m) dev = std::max(dev, (mi * h0 - h0 * mi).cwiseAbs().maxCoeff());
  return dev;
}

/// Reports for several lengths; non-constructible lengths are skipped and
/// listed separately.
struct AlgebraSweep {
  std::vector<AlgebraReport> reports;
  std::vector<LogicalOperatorSet> operators;
  std::vector<int> rejected_lengths;
};

inline AlgebraSweep verify_algebra_lengths(const std::vector<int>& lengths) {
  AlgebraSweep s;
  for (int L : lengths) {
    if (!is_constructible_length(L)) {
      s.rejected_lengths.push_back(L);
      continue;
    }
    auto ops = logical_operators(L);
    auto rep = verify_algebra(ops, L);
    rep.lengths_tested = lengths;
    s.reports.push_back(std::move(rep));
    s.operators.push_back(std::move(ops));
  }
  return s;
}

struct ProtectionRow {
  std::string perturbation;
  double strength = 0.0;
  double splitting = 0.0;  // spread of the four lowest levels
};

/// Ground-manifold splitting of the open chain at lambda = 0 under a
/// symmetry-commuting perturbation (bulk stabilizers, non-uniform weights)
/// and under the Ising term.
inline std::vector<ProtectionRow> protection_experiment(int L, double strength) {
  if (L > 12) throw CapacityError("protection_experiment: L > 12");
  const auto spec = ChainSpec::chain(L, 0.0, Boundary::open);
  OperatorMatrix sym(L);
  const auto ks = stabilizer_list(spec);
  for (std::size_t i = 0; i < ks.size(); ++i) sym.add(1.0 + 0.25 * static_cast<double>(i % 3), ks[i]);
  std::vector<ProtectionRow> rows;
  for (auto [name, op] : {std::pair<const char*, OperatorMatrix>{"bulk-stabilizers", sym},
                          std::pair<const char*, OperatorMatrix>{"ising", build_ising_term(spec)}}) {
    const auto g = degeneracy_split(spec, op, strength);
    rows.push_back({name, strength, g.back()});
  }
  return rows;
}

}  // namespace clusterlab
