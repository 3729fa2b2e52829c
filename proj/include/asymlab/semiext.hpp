#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "asymlab/bigreal.hpp"
#include "asymlab/errors.hpp"
#include "asymlab/ladder.hpp"
#include "asymlab/map.hpp"
#include "asymlab/roots.hpp"

namespace asymlab {

struct Interval {
  BigReal lo;
  BigReal hi;
  BigReal length() const { return hi - lo; }
  bool contains(const BigReal& x) const { return x >= lo && x <= hi; }
};

struct SemiExtensionRecord {
  int k = 0;
  BranchWord word;  // length 2^k - 1, letters of c_1 .. c_(2^k - 1)
  Interval T;       // domain of E_k, around c_1
  BigReal A, B;     // range of E_k
  BigReal hatA, hatB;
  BigReal tau;
  BigReal a_prime, b_prime, e;
  std::optional<BigReal> d;  // even k only
};

/// Branch word of the first-entry map from c_1 to [a_k, b_k].
inline BranchWord first_entry_word(const AsymmetricMap& m, int k) {
  Orbit o = m.iterate(m.eval(BigReal(m.precision())), static_cast<long>(two_pow(k)) - 1);
  return o.word;
}

/// E(x) = f_{w_n} o ... o f_{w_1}(x), each branch applied on its own formula;
/// arguments are clamped into the branch domain (with or without the
/// extension of f1).
inline BigReal apply_word(const AsymmetricMap& m, const BranchWord& w, const BigReal& x, bool extended = true) {
  BigReal y = x.with_precision(m.precision());
  const BigReal& right1 = extended ? m.eps0() : BigReal(m.precision());
  for (auto letter : w) {
    if (letter == 1) {
      if (y < m.a0()) y = m.a0();
      if (y > right1) y = right1;
      y = m.eval_branch(1, y);
    } else {
      if (y.sign() < 0) y = BigReal(m.precision());
      if (y > m.b0()) y = m.b0();
      y = m.eval_branch(2, y);
    }
  }
  return y;
}

namespace detail {

inline Interval branch_domain(const AsymmetricMap& m, int letter, bool extended) {
  const mpfr_prec_t P = m.precision();
  if (letter == 1) return {m.a0(), extended ? m.eps0() : BigReal(P)};
  return {BigReal(P), m.b0()};
}

inline Interval map_interval(const AsymmetricMap& m, int letter, const Interval& I) {
  BigReal l = m.eval_branch(letter, I.lo), r = m.eval_branch(letter, I.hi);
  return letter == 1 ? Interval{l, r} : Interval{r, l};
}

inline Interval intersect(const Interval& a, const Interval& b, const std::string& who) {
  Interval r{max(a.lo, b.lo), min(a.hi, b.hi)};
  if (r.hi < r.lo) throw ConsistencyError(who + ": empty intersection while propagating the branch word");
  return r;
}

// Forward propagation of the maximal domain along the word.
inline Interval propagate(const AsymmetricMap& m, const BranchWord& w, bool extended) {
  Interval I = branch_domain(m, w.front(), extended);
  for (auto letter : w) {
    I = intersect(I, branch_domain(m, letter, extended), "semi_extension");
    I = map_interval(m, letter, I);
  }
  return I;
}

inline BigReal clamp_to(const BigReal& y, const BigReal& lo, const BigReal& hi) {
  if (y < lo) return lo;
  if (y > hi) return hi;
  return y;
}

inline BigReal inverse_clamped(const AsymmetricMap& m, int letter, const BigReal& y) {
  BigReal lo(-1L, m.precision());
  BigReal hi = letter == 1 ? m.b0() : m.t() - 1L;
  return m.inverse_branch(letter, clamp_to(y, lo, hi));
}

// Pull [lo, hi] back through the inverse branches of the word.
inline Interval pullback(const AsymmetricMap& m, const BranchWord& w, Interval I) {
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    BigReal l = inverse_clamped(m, *it, I.lo), r = inverse_clamped(m, *it, I.hi);
    I = *it == 1 ? Interval{l, r} : Interval{r, l};
  }
  return I;
}

}  // namespace detail

/// Semi-extension data at level k >= 1 (f1 extended to [a0, eps0]).
inline SemiExtensionRecord semi_extension(const RenormLadder& L, int k) {
  if (k < 1) throw DomainError("semi_extension: k must be >= 1");
  const auto& m = L.map;
  const auto& lv = L.level(k);
  SemiExtensionRecord r;
  r.k = k;
  r.word = first_entry_word(m, k);
  // the word must follow the signs of the critical orbit
  {
    BigReal x = m.eval(BigReal(m.precision()));
    BigReal tmp(m.precision());
    for (std::size_t j = 0; j < r.word.size(); ++j) {
      if (AsymmetricMap::letter(x) != r.word[j])
        throw ConsistencyError("semi_extension: branch word disagrees with the orbit at step " + std::to_string(j));
      m.step(x.raw(), tmp.raw());
    }
    if (abs(x - lv.c_pow) > abs(lv.c_pow) * ldexp(BigReal(1L, m.precision()), -64) + ulp(lv.b))
      throw ConsistencyError("semi_extension: first-entry word does not reproduce c_(2^k)");
  }
  Interval range = detail::propagate(m, r.word, true);
  Interval hat = detail::propagate(m, r.word, false);
  r.A = range.lo;
  r.B = range.hi;
  r.hatA = hat.lo;
  r.hatB = hat.hi;
  r.T = detail::pullback(m, r.word, range);
  BigReal width = lv.b - lv.a;
  r.tau = min(lv.a - r.A, r.B - lv.b) / width;

  // [a'_k, e_k] = f1^-1(T_k); b'_k = right end of f2^-1(T_k)
  r.a_prime = detail::inverse_clamped(m, 1, r.T.lo);
  r.e = detail::inverse_clamped(m, 1, r.T.hi);
  r.b_prime = detail::inverse_clamped(m, 2, r.T.lo);

  if (k % 2 == 0) {
    auto g = [&](const BigReal& x) {
      BigReal y = m.eval_branch(1, detail::clamp_to(x, m.a0(), m.eps0()));
      return apply_word(m, r.word, y) - lv.b;
    };
    BigReal lo(m.precision()), hi = r.e;
    BigReal tol = detail::bracket_tol(lo, hi, auto_rel_tol(m.precision()));
    r.d = refine_root_secant(g, lo, hi, tol).root;
  }
  return r;
}

struct TauRow {
  int k = 0;
  BigReal tau;
  std::optional<BigReal> log_ratio;  // even k: log(tau_k) / log(b_k^(-1/2))
};

inline std::vector<TauRow> tau_sequence(const RenormLadder& L, int K) {
  std::vector<TauRow> out;
  for (int k = 1; k <= std::min(K, L.depth()); ++k) {
    SemiExtensionRecord r = semi_extension(L, k);
    TauRow row{k, r.tau, std::nullopt};
    if (k % 2 == 0 && r.tau > 0L) row.log_ratio = log(r.tau) / (-(log(L.level(k).b) / 2L));
    out.push_back(std::move(row));
  }
  return out;
}

struct Theorem2Row {
  int k = 0;
  BigReal hatA_over_b;      // |hatA_k| / b_k
  BigReal exponent;         // log|hatA_k| / log b_k
  BigReal hatB_over_b;      // hatB_k / b_k
};

inline Theorem2Row theorem2_row(const RenormLadder& L, const SemiExtensionRecord& r) {
  const auto& lv = L.level(r.k);
  Theorem2Row row;
  row.k = r.k;
  row.hatA_over_b = abs(r.hatA) / lv.b;
  row.exponent = log(abs(r.hatA)) / log(lv.b);
  row.hatB_over_b = r.hatB / lv.b;
  return row;
}

/// Rows for levels 1 .. min(K, trusted).
inline std::vector<Theorem2Row> check_theorem2(const RenormLadder& L, int K) {
  std::vector<Theorem2Row> out;
  for (int k = 1; k <= std::min(K, L.max_trusted_level); ++k) out.push_back(theorem2_row(L, semi_extension(L, k)));
  return out;
}

struct SpecialPointRow {
  int k = 0;  // even
  bool e_next_below_d = false;  // e_{k+2} < d_k
  BigReal d_over_bound;         // d_k / (b_{k+1}^(beta-1) b_k)
  BigReal d_over_sharp;         // d_k / b_k^(2 beta - 1)
};

inline SpecialPointRow special_point_row(const RenormLadder& L, const SemiExtensionRecord& rk,
                                         const std::optional<SemiExtensionRecord>& rk2) {
  if (!rk.d) throw DomainError("special_point_row: level must be even");
  const auto& beta = L.map.beta();
  SpecialPointRow row;
  row.k = rk.k;
  row.e_next_below_d = rk2 ? rk2->e < *rk.d : false;
  row.d_over_bound = *rk.d / (pow_real(L.level(rk.k + 1).b, beta - 1L) * L.level(rk.k).b);
  row.d_over_sharp = *rk.d / pow_real(L.level(rk.k).b, beta * 2L - 1L);
  return row;
}

struct SpecialPointReport {
  std::vector<SpecialPointRow> rows;  // even k with k + 2 <= K
  bool ordering_holds = false;
  BigReal max_d_over_bound, max_d_over_sharp;
};

/// Even levels k with k + 2 <= min(K, trusted).
inline SpecialPointReport special_point_checks(const RenormLadder& L, int K) {
  const mpfr_prec_t P = L.map.precision();
  SpecialPointReport rep{{}, true, BigReal(P), BigReal(P)};
  int top = std::min(K, L.max_trusted_level);
  for (int k = 2; k + 2 <= top; k += 2) {
    SpecialPointRow r = special_point_row(L, semi_extension(L, k), semi_extension(L, k + 2));
    rep.ordering_holds = rep.ordering_holds && r.e_next_below_d;
    rep.max_d_over_bound = max(rep.max_d_over_bound, r.d_over_bound);
    rep.max_d_over_sharp = max(rep.max_d_over_sharp, r.d_over_sharp);
    rep.rows.push_back(std::move(r));
  }
  if (rep.rows.empty()) rep.ordering_holds = false;
  return rep;
}

struct EntrySpaceReport {
  int i = 0;
  BigReal left_space_ratio;  // |c_(2^(2i-1)) - a_{2i}| / (b_{2i} - a_{2i})
  BigReal c_over_bpow;       // |c_(2^(2i-1))| / b_{2i-1}^(beta+1)
  BigReal b_over_bsq;        // b_{2i} / b_{2i-1}^2
  bool below_one = false;
};

inline EntrySpaceReport entry_space_ratio(const RenormLadder& L, int i) {
  if (i < 1) throw DomainError("entry_space_ratio: i must be >= 1");
  const auto& odd = L.level(2 * i - 1);
  const auto& even = L.level(2 * i);
  EntrySpaceReport r;
  r.i = i;
  r.left_space_ratio = abs(odd.c_pow - even.a) / (even.b - even.a);
  r.c_over_bpow = abs(odd.c_pow) / pow_real(odd.b, L.map.beta() + 1L);
  r.b_over_bsq = even.b / (odd.b * odd.b);
  r.below_one = r.left_space_ratio < 1L;
  return r;
}

/// Smallest derivative of the return map R = f^(2^(2i-1)) of [a_{2i-1}, b_{2i-1}]
/// in the coordinate y = log log(1/x), over a uniform y-grid covering
/// [b_{2i}, eta b_{2i-1}]. Points where R leaves (0, 1) are skipped.
inline BigReal doublelog_expansion(const RenormLadder& L, int i, const BigReal& eta, int grid_size) {
  if (!(eta > 0L && eta < 1L)) throw DomainError("doublelog_expansion: eta must lie in (0, 1)");
  if (grid_size < 5) throw DomainError("doublelog_expansion: grid_size must be >= 5");
  const int k = 2 * i - 1;
  const auto& lk = L.level(k);
  const auto& l2 = L.level(2 * i);
  const mpfr_prec_t P = L.map.precision();
  BigReal one(1L, P);
  BigReal x_lo = l2.b, x_hi = eta * lk.b;
  if (!(x_hi > x_lo)) throw DomainError("doublelog_expansion: eta b_{2i-1} lies below b_{2i}");
  auto Y = [&](const BigReal& x) { return log(log(one / x)); };
  BigReal y_a = Y(x_hi), y_b = Y(x_lo);  // y decreases in x
  std::vector<BigReal> ys = uniform_grid(y_a, y_b, grid_size);
  std::vector<std::optional<BigReal>> zs;
  long cap = static_cast<long>(two_pow(k));
  for (const auto& y : ys) {
    BigReal x = exp(-exp(y));
    BigReal R = x;
    apply_iterates(L.map, R, static_cast<unsigned long>(cap));
    if (R < lk.a || R > lk.b)
      throw EscapeError("doublelog_expansion: return orbit of x = " + x.to_string(12) + " leaves [a_k, b_k]", cap);
    if (R.sign() <= 0 || R >= 1L) {
      zs.emplace_back(std::nullopt);
    } else {
      zs.emplace_back(Y(R));
    }
  }
  std::optional<BigReal> best;
  for (std::size_t j = 1; j + 1 < ys.size(); ++j) {
    if (!zs[j - 1] || !zs[j + 1]) continue;
    BigReal dz = (*zs[j + 1] - *zs[j - 1]) / (ys[j + 1] - ys[j - 1]);
    if (!best || dz < *best) best = dz;
  }
  if (!best) throw InsufficientDataError("doublelog_expansion: no admissible grid points");
  return *best;
}

}  // namespace asymlab
