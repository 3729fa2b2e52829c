#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asymlab/bigreal.hpp"
#include "asymlab/errors.hpp"
#include "asymlab/map.hpp"
#include "asymlab/roots.hpp"

namespace asymlab {

struct LevelRecord {
  int k = 0;
  BigReal a;
  BigReal b;
  BigReal c_pow;  // f^(2^k)(0)
  BigReal fixed_residual;
  BigReal preimage_residual;
  BigReal root_tol;  // absolute bracket tolerance used for a and b
};

struct RenormLadder {
  AsymmetricMap map;
  std::vector<LevelRecord> levels;
  int max_trusted_level = 0;

  int depth() const { return static_cast<int>(levels.size()) - 1; }
  bool has(int k) const { return k >= 0 && k <= depth(); }
  const LevelRecord& level(int k) const {
    if (!has(k))
      throw InsufficientDataError("ladder: level " + std::to_string(k) + " not built (depth " +
                                  std::to_string(depth()) + ")");
    return levels[static_cast<std::size_t>(k)];
  }
};

/// x <- f^count(x) in place, at the map's precision.
inline void apply_iterates(const AsymmetricMap& m, BigReal& x, unsigned long count) {
  if (x.precision() != m.precision()) x = x.with_precision(m.precision());
  BigReal tmp(m.precision());
  for (unsigned long i = 0; i < count; ++i) m.step(x.raw(), tmp.raw());
}

inline unsigned long two_pow(int k) {
  if (k < 0 || k > 40) throw DomainError("2^k requested for k = " + std::to_string(k));
  return 1UL << k;
}

/// f^(2^k)(x).
inline BigReal power_of_map(const AsymmetricMap& m, int k, const BigReal& x) {
  if (!m.in_domain(x)) throw EscapeError("power_of_map: x = " + x.to_string(20) + " outside the domain", 0);
  BigReal y = x.with_precision(m.precision());
  apply_iterates(m, y, two_pow(k));
  return y;
}

/// Default relative bracket tolerance for a working precision.
inline BigReal auto_rel_tol(mpfr_prec_t bits) {
  return ldexp(BigReal(1L, bits), -static_cast<long>(bits > 96 ? bits - 32 : bits * 2 / 3));
}

enum class BuildStatus { Complete, NotBorn, Escaped };

struct LevelBuild {
  std::vector<LevelRecord> levels;
  BuildStatus status = BuildStatus::Complete;
  int failed_level = -1;  // level not born, or level whose critical value escaped
  std::optional<BigReal> extra_fixed_point;  // see build_levels
};

struct BuildOptions {
  std::optional<BigReal> rel_tol;  // bracket tolerance relative to bracket width
  bool stop_on_escape = false;     // stop when c_(2^k) leaves [a_k, b_k]
  /// Also compute the fixed point that would become the orientation-reversing
  /// endpoint of level K + 1 (without its preimage).
  bool want_next_fixed_point = false;
};

namespace detail {

inline BigReal level_rel_tol(const AsymmetricMap& m, const BuildOptions& o) {
  return o.rel_tol ? o.rel_tol->with_precision(m.precision()) : auto_rel_tol(m.precision());
}

inline BigReal bracket_tol(const BigReal& lo, const BigReal& hi, const BigReal& rel) {
  BigReal w = abs(hi - lo);
  BigReal tol = w * rel;
  BigReal floor_tol = ulp(max(abs(lo), abs(hi))) * 8L;
  return tol < floor_tol ? floor_tol : tol;
}

inline bool escaped(const LevelRecord& r) { return r.c_pow < r.a || r.c_pow > r.b; }

inline BigReal critical_value(const AsymmetricMap& m, int k) {
  BigReal c(m.precision());
  apply_iterates(m, c, two_pow(k));
  return c;
}

// Fixed point of f^(2^k) next to 0 on the side given by `right`, or nullopt.
inline std::optional<RootResult> fixed_point(const AsymmetricMap& m, const LevelRecord& lv, bool right,
                                             const BigReal& rel) {
  unsigned long n = two_pow(lv.k);
  auto g = [&](const BigReal& x) {
    BigReal y = x;
    apply_iterates(m, y, n);
    return y - x;
  };
  BigReal lo = right ? ulp(lv.b) * 4L : lv.a;
  BigReal hi = right ? lv.b : -(ulp(lv.a) * 4L);
  BigReal glo = g(lo), ghi = g(hi);
  if (glo.sign() * ghi.sign() >= 0) return std::nullopt;
  return refine_root_secant(g, lo, hi, bracket_tol(lo, hi, rel));
}

// Preimage of `target` under f^(2^k) on the half of [a, b] given by `right`.
inline std::optional<RootResult> preimage(const AsymmetricMap& m, const LevelRecord& lv, bool right,
                                          const BigReal& target, const BigReal& rel) {
  unsigned long n = two_pow(lv.k);
  auto g = [&](const BigReal& x) {
    BigReal y = x;
    apply_iterates(m, y, n);
    return y - target;
  };
  BigReal lo = right ? ulp(lv.b) * 4L : lv.a;
  BigReal hi = right ? lv.b : -(ulp(lv.a) * 4L);
  BigReal glo = g(lo), ghi = g(hi);
  if (glo.sign() * ghi.sign() >= 0) return std::nullopt;
  return refine_root_secant(g, lo, hi, bracket_tol(lo, hi, rel));
}

}  // namespace detail

/// Levels 0..K of the renormalization ladder, stopping at the first level
/// that cannot be built. For even k the next level has b_{k+1} a fixed point
/// of f^(2^k) in (0, b_k) and a_{k+1} its preimage in (a_k, 0); for odd k the
/// roles of the two sides are swapped.
inline LevelBuild build_levels(const AsymmetricMap& m, int K, const BuildOptions& opt = {}) {
  const mpfr_prec_t P = m.precision();
  BigReal rel = detail::level_rel_tol(m, opt);
  LevelBuild out;
  LevelRecord l0;
  l0.k = 0;
  l0.a = m.a0();
  l0.b = m.b0();
  l0.c_pow = detail::critical_value(m, 0);
  l0.fixed_residual = BigReal(P);
  l0.preimage_residual = BigReal(P);
  l0.root_tol = BigReal(P);
  out.levels.push_back(l0);
  for (int k = 0;; ++k) {
    const LevelRecord& cur = out.levels.back();
    if (opt.stop_on_escape && detail::escaped(cur)) {
      out.status = BuildStatus::Escaped;
      out.failed_level = k;
      return out;
    }
    bool even = k % 2 == 0;
    if (k == K) {
      if (opt.want_next_fixed_point) {
        auto fp = detail::fixed_point(m, cur, even, rel);
        if (fp) out.extra_fixed_point = fp->root;
      }
      return out;
    }
    auto fp = detail::fixed_point(m, cur, even, rel);
    if (!fp) {
      out.status = BuildStatus::NotBorn;
      out.failed_level = k + 1;
      return out;
    }
    auto pre = detail::preimage(m, cur, !even, fp->root, rel);
    if (!pre) {
      out.status = BuildStatus::NotBorn;
      out.failed_level = k + 1;
      out.extra_fixed_point = fp->root;
      return out;
    }
    LevelRecord nx;
    nx.k = k + 1;
    nx.a = even ? pre->root : fp->root;
    nx.b = even ? fp->root : pre->root;
    nx.c_pow = detail::critical_value(m, k + 1);
    nx.fixed_residual = abs(fp->residual);
    nx.preimage_residual = abs(pre->residual);
    nx.root_tol = detail::bracket_tol(cur.a, cur.b, rel);
    out.levels.push_back(std::move(nx));
  }
}

/// Ladder with levels 0..K; throws LevelNotBornError when the parameter is
/// not deep enough in the cascade.
inline RenormLadder build_ladder(const AsymmetricMap& m, int K, std::optional<BigReal> rel_tol = std::nullopt,
                                 int max_trusted = -1) {
  if (K < 0) throw DomainError("build_ladder: K must be >= 0");
  BuildOptions o;
  o.rel_tol = std::move(rel_tol);
  LevelBuild lb = build_levels(m, K, o);
  if (lb.status == BuildStatus::NotBorn)
    throw LevelNotBornError("build_ladder: level " + std::to_string(lb.failed_level) +
                                " is not born at t = " + m.t().to_string(30) +
                                " (the parameter is not deep enough in the cascade)",
                            lb.failed_level);
  RenormLadder r{m, std::move(lb.levels), 0};
  r.max_trusted_level = max_trusted < 0 ? r.depth() : std::min(max_trusted, r.depth());
  return r;
}

struct TheoremFiveCoeffs {
  int k = 0;
  BigReal left_slope;  // s_k
  BigReal right_coef;  // t_k
  BigReal fit_residual;
};

inline std::vector<BigReal> uniform_grid(const BigReal& lo, const BigReal& hi, int n) {
  std::vector<BigReal> g;
  g.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g.push_back(lo + (hi - lo) * static_cast<long>(i) / static_cast<long>(n - 1));
  return g;
}

/// Endpoint interpolation of f^(2^k) = c - s|x| on [a_k, 0] and c - t x^beta
/// on [0, b_k]; the residual is the largest deviation on a 33-point grid.
inline TheoremFiveCoeffs fit_theorem5(const RenormLadder& L, int k) {
  if (k % 2 != 0) throw DomainError("fit_theorem5: k must be even");
  const auto& lv = L.level(k);
  const auto& m = L.map;
  TheoremFiveCoeffs r;
  r.k = k;
  BigReal fa = power_of_map(m, k, lv.a), fb = power_of_map(m, k, lv.b);
  r.left_slope = (lv.c_pow - fa) / abs(lv.a);
  r.right_coef = (lv.c_pow - fb) / pow_real(lv.b, m.beta());
  r.fit_residual = BigReal(m.precision());
  for (const auto& x : uniform_grid(lv.a, lv.b, 33)) {
    BigReal model = x.sign() < 0 ? lv.c_pow - r.left_slope * abs(x) : lv.c_pow - r.right_coef * pow_real(x, m.beta());
    BigReal dev = abs(power_of_map(m, k, x) - model);
    if (dev > r.fit_residual) r.fit_residual = dev;
  }
  return r;
}

struct RescaledRenorm {
  int k = 0;
  std::vector<BigReal> s;       // grid on [0, 1]
  std::vector<BigReal> values;  // R^k f(s)
  BigReal c_hat;                // -a_k / (b_k - a_k)
};

/// R^k f(s) = l^-1(f^(2^k)(l(s))) with l(s) = a_k + s (b_k - a_k).
inline BigReal rescaled_value(const RenormLadder& L, int k, const BigReal& s) {
  const auto& lv = L.level(k);
  BigReal w = lv.b - lv.a;
  BigReal x = lv.a + s * w;
  if (x < lv.a) x = lv.a;
  if (x > lv.b) x = lv.b;
  return (power_of_map(L.map, k, x) - lv.a) / w;
}

inline RescaledRenorm rescaled_renorm(const RenormLadder& L, int k, int grid_size) {
  if (grid_size < 9) throw DomainError("rescaled_renorm: grid_size must be >= 9");
  const auto& lv = L.level(k);
  const mpfr_prec_t P = L.map.precision();
  RescaledRenorm r;
  r.k = k;
  r.c_hat = -lv.a / (lv.b - lv.a);
  r.s = uniform_grid(BigReal(0L, P), BigReal(1L, P), grid_size);
  for (const auto& s : r.s) r.values.push_back(rescaled_value(L, k, s));
  return r;
}

/// -lambda^(beta^2 - 1) (x + lambda^-beta)^beta + 1/lambda, the odd-level
/// limit of the left branch in the [-1, 0] chart.
inline BigReal odd_left_limit(const BigReal& lambda, const BigReal& beta, const BigReal& x) {
  BigReal lb = pow_real(lambda, beta);
  BigReal base = x + BigReal(1L, lambda.precision()) / lb;
  BigReal coef = pow_real(lambda, beta * beta - 1L);
  BigReal p = base.sign() < 0 ? -pow_real(abs(base), beta) : pow_real(base, beta);
  return BigReal(1L, lambda.precision()) / lambda - coef * p;
}

struct RenormLimitReport {
  int k = 0;
  BigReal c_hat;
  BigReal right_err;        // sup |R^k f - limit| on [c_hat, 1]
  BigReal right_deriv_err;  // same for central differences
  BigReal left_err;         // sup |R^k f o m_k - limit| on [-1, 0]
  BigReal left_deriv_err;
  bool even = true;
};

/// Grid errors of R^k f against its limit shapes: 1 - x^beta (even k) or
/// x^beta (odd k) on the right part, x + 1 (even) or odd_left_limit (odd)
/// on the left part in the chart m_k(x) = c_hat (1 + x).
inline RenormLimitReport renorm_limit_error(const RenormLadder& L, int k, int grid_size, const BigReal& lambda) {
  if (grid_size < 9) throw DomainError("renorm_limit_error: grid_size must be >= 9");
  const auto& lv = L.level(k);
  const auto& beta = L.map.beta();
  const mpfr_prec_t P = L.map.precision();
  RenormLimitReport rep;
  rep.k = k;
  rep.even = k % 2 == 0;
  rep.c_hat = -lv.a / (lv.b - lv.a);
  rep.right_err = rep.right_deriv_err = rep.left_err = rep.left_deriv_err = BigReal(P);
  BigReal one(1L, P);

  auto right_limit = [&](const BigReal& x) { return rep.even ? one - pow_real(x, beta) : pow_real(x, beta); };
  auto right_dlimit = [&](const BigReal& x) {
    BigReal d = beta * pow_real(x, beta - 1L);
    return rep.even ? -d : d;
  };
  auto left_limit = [&](const BigReal& x) { return rep.even ? x + 1L : odd_left_limit(lambda, beta, x); };
  auto chart = [&](const BigReal& x) { return rep.c_hat * (x + 1L); };

  std::vector<BigReal> rs = uniform_grid(rep.c_hat, one, grid_size);
  std::vector<BigReal> rv;
  for (const auto& s : rs) rv.push_back(rescaled_value(L, k, s));
  for (std::size_t i = 0; i < rs.size(); ++i) {
    BigReal e = abs(rv[i] - right_limit(rs[i]));
    if (e > rep.right_err) rep.right_err = e;
    if (i > 0 && i + 1 < rs.size()) {
      BigReal fd = (rv[i + 1] - rv[i - 1]) / (rs[i + 1] - rs[i - 1]);
      BigReal de = abs(fd - right_dlimit(rs[i]));
      if (de > rep.right_deriv_err) rep.right_deriv_err = de;
    }
  }

  std::vector<BigReal> ls = uniform_grid(-one, BigReal(0L, P), grid_size);
  std::vector<BigReal> lvv;
  for (const auto& x : ls) lvv.push_back(rescaled_value(L, k, chart(x)));
  for (std::size_t i = 0; i < ls.size(); ++i) {
    BigReal e = abs(lvv[i] - left_limit(ls[i]));
    if (e > rep.left_err) rep.left_err = e;
    if (i > 0 && i + 1 < ls.size()) {
      BigReal fd = (lvv[i + 1] - lvv[i - 1]) / (ls[i + 1] - ls[i - 1]);
      BigReal h(1L, P);
      h = ldexp(h, -40);
      BigReal dl = (left_limit(ls[i] + h) - left_limit(ls[i] - h)) / (h * 2L);
      BigReal de = abs(fd - dl);
      if (de > rep.left_deriv_err) rep.left_deriv_err = de;
    }
  }
  return rep;
}

}  // namespace asymlab
