#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asymlab/bigreal.hpp"
#include "asymlab/errors.hpp"
#include "asymlab/ladder.hpp"
#include "asymlab/roots.hpp"

namespace asymlab {

/// Root in (0, 1) of lambda^beta + lambda = 1.
inline BigReal lambda_root(const BigReal& beta, mpfr_prec_t bits = 256) {
  if (!(beta >= 1L)) throw DomainError("lambda_root: beta must be >= 1");
  BigReal b = beta.with_precision(bits);
  auto g = [&](const BigReal& x) { return pow_real(x, b) + x - 1L; };
  BigReal lo(0L, bits), hi(1L, bits);
  BigReal tol = ldexp(BigReal(1L, bits), -static_cast<long>(bits - 8));
  return refine_root_secant(g, lo, hi, tol).root;
}

struct IndexedValue {
  int k = 0;
  BigReal value;
};

struct ScalingReport {
  BigReal beta;
  BigReal k0;
  int trusted = 0;
  int depth = 0;
  BigReal lambda_root;
  std::vector<IndexedValue> lambda_est;   // even k: b_{k+1} / b_k
  std::vector<IndexedValue> c_over_b;     // even k: c_(2^k) / b_k
  std::vector<IndexedValue> mu;           // j: log(1 / b_{2j})
  std::vector<IndexedValue> theta_est;    // j: (mu_{j+1} - mu_j) / 2^j
  std::vector<IndexedValue> d_est;        // j: mu_{j+1} - 2 mu_j
  BigReal d_pred;                         // log(beta^(2/(beta-1)) K0^(-1/(beta-1)))
  std::vector<IndexedValue> coef51;       // even k: b_{k+2} / b_k^2
  BigReal coef51_pred;                    // beta^(-2/(beta-1)) K0^(1/(beta-1))
  std::vector<IndexedValue> coef54;       // even k: c_(2^(k+1)) / b_{k+1}^(beta+1)
  std::vector<IndexedValue> odd_b_coef;   // odd k: b_{k+1} / b_k^2
  BigReal odd_b_pred;                     // coef51_pred / lambda^2
  std::vector<IndexedValue> odd_c_coef;   // odd k: c_(2^k) / b_k^(beta+1)
  BigReal odd_c_pred;  // -beta^(-(beta+1)/(beta-1)) K0^(beta/(beta-1)) lambda^(-beta-1)
  std::vector<IndexedValue> a_over_kb;    // k >= 1: |a_k| / (K0 b_k^beta)
};

/// Scaling report from raw levels. Rows at level k use levels up to k + 2
/// when they are present; only k <= trusted is reported.
inline ScalingReport analyze_levels(const std::vector<LevelRecord>& lv, const BigReal& beta, const BigReal& k0,
                                    int trusted) {
  if (lv.empty()) throw InsufficientDataError("analyze: empty ladder");
  const mpfr_prec_t P = lv.front().b.precision();
  const int depth = static_cast<int>(lv.size()) - 1;
  trusted = std::min(trusted, depth);
  if (trusted / 2 + 1 < 4)
    throw InsufficientDataError("analyze: need at least 4 even levels, have " + std::to_string(trusted / 2 + 1));
  ScalingReport r;
  r.beta = beta.with_precision(P);
  r.k0 = k0.with_precision(P);
  r.trusted = trusted;
  r.depth = depth;
  r.lambda_root = lambda_root(r.beta, P);
  BigReal one(1L, P);
  BigReal bm1 = r.beta - 1L;
  const BigReal& lam = r.lambda_root;
  r.d_pred = log(pow_real(r.beta, BigReal(2L, P) / bm1) * pow_real(r.k0, -(one / bm1)));
  r.coef51_pred = pow_real(r.beta, -(BigReal(2L, P) / bm1)) * pow_real(r.k0, one / bm1);
  r.odd_b_pred = r.coef51_pred / (lam * lam);
  r.odd_c_pred = -(pow_real(r.beta, -((r.beta + 1L) / bm1)) * pow_real(r.k0, r.beta / bm1) *
                   pow_real(lam, -(r.beta + 1L)));
  auto b = [&](int k) -> const BigReal& { return lv[static_cast<std::size_t>(k)].b; };
  auto c = [&](int k) -> const BigReal& { return lv[static_cast<std::size_t>(k)].c_pow; };
  for (int k = 0; k <= trusted; ++k) {
    if (k >= 1) r.a_over_kb.push_back({k, abs(lv[static_cast<std::size_t>(k)].a) / (r.k0 * pow_real(b(k), r.beta))});
    if (k % 2 == 0) {
      if (k + 1 <= depth) r.lambda_est.push_back({k, b(k + 1) / b(k)});
      r.c_over_b.push_back({k, c(k) / b(k)});
      if (k + 2 <= depth) r.coef51.push_back({k, b(k + 2) / (b(k) * b(k))});
      if (k + 1 <= depth) r.coef54.push_back({k, c(k + 1) / pow_real(b(k + 1), r.beta + 1L)});
    } else {
      if (k + 1 <= depth) r.odd_b_coef.push_back({k, b(k + 1) / (b(k) * b(k))});
      r.odd_c_coef.push_back({k, c(k) / pow_real(b(k), r.beta + 1L)});
    }
  }
  for (int j = 0; 2 * j <= trusted; ++j) r.mu.push_back({j, log(one / b(2 * j))});
  if (2 * (static_cast<int>(r.mu.size())) <= depth)
    r.mu.push_back({static_cast<int>(r.mu.size()), log(one / b(2 * static_cast<int>(r.mu.size())))});
  for (std::size_t j = 0; j + 1 < r.mu.size(); ++j) {
    const BigReal& m0 = r.mu[j].value;
    const BigReal& m1 = r.mu[j + 1].value;
    r.theta_est.push_back({static_cast<int>(j), ldexp(m1 - m0, -static_cast<long>(j))});
    r.d_est.push_back({static_cast<int>(j), m1 - m0 * 2L});
  }
  return r;
}

inline ScalingReport analyze(const RenormLadder& L) {
  return analyze_levels(L.levels, L.map.beta(), L.map.k0(), L.max_trusted_level);
}

/// Levels of R^s f: level k is level k + s of f, rescaled by the length of
/// [a_s, b_s] and centred at the turning point. Used as a proxy ladder for
/// the s-th renormalization.
inline std::vector<LevelRecord> shifted_levels(const RenormLadder& L, int s) {
  if (s < 0 || s > L.depth()) throw InsufficientDataError("shifted_levels: shift beyond the ladder depth");
  const auto& base = L.level(s);
  BigReal w = base.b - base.a;
  std::vector<LevelRecord> out;
  for (int k = s; k <= L.depth(); ++k) {
    LevelRecord r = L.level(k);
    r.k = k - s;
    r.a = r.a / w;
    r.b = r.b / w;
    r.c_pow = r.c_pow / w;
    out.push_back(std::move(r));
  }
  return out;
}

struct Theorem4Tolerances {
  double lambda_abs = 0.05;
  double c_over_b_abs = 0.05;
  double coef51_rel = 0.15;
  double d_rel = 0.10;
  double theta_rel_change = 0.05;
  int theta_from_level = 4;
  double odd_coef_rel = 0.25;  // report-only prefactors
};

struct CheckRow {
  std::string name;
  int k = 0;
  BigReal value;
  BigReal predicted;
  BigReal deviation;  // absolute or relative, per row
  bool trend_ok = true;
  bool gated = true;
  bool pass = false;
};

namespace detail {

inline bool last_three_nonincreasing(const std::vector<BigReal>& devs) {
  if (devs.size() < 3) return false;
  std::size_t n = devs.size();
  return devs[n - 3] >= devs[n - 2] && devs[n - 2] >= devs[n - 1];
}

inline CheckRow trend_row(const std::string& name, const std::vector<IndexedValue>& xs, const BigReal& pred,
                          bool relative, double tol, bool gated) {
  CheckRow row;
  row.name = name;
  row.gated = gated;
  row.predicted = pred;
  if (xs.empty()) {
    row.pass = false;
    row.trend_ok = false;
    return row;
  }
  std::vector<BigReal> devs;
  for (const auto& x : xs) {
    BigReal d = abs(x.value - pred);
    if (relative) d = d / abs(pred);
    devs.push_back(d);
  }
  row.k = xs.back().k;
  row.value = xs.back().value;
  row.deviation = devs.back();
  row.trend_ok = last_three_nonincreasing(devs);
  row.pass = row.trend_ok && row.deviation.to_double() <= tol;
  return row;
}

}  // namespace detail

/// One row per asymptotic law; gated rows carry the pass/fail verdict.
inline std::vector<CheckRow> check_theorem4(const ScalingReport& r, const Theorem4Tolerances& tol = {}) {
  const mpfr_prec_t P = r.lambda_root.precision();
  std::vector<CheckRow> rows;
  rows.push_back(detail::trend_row("b_ratio_even", r.lambda_est, r.lambda_root, false, tol.lambda_abs, true));
  rows.push_back(detail::trend_row("c_over_b_even", r.c_over_b, BigReal(1L, P), false, tol.c_over_b_abs, true));
  rows.push_back(detail::trend_row("b_two_step_coef", r.coef51, r.coef51_pred, true, tol.coef51_rel, true));
  rows.push_back(detail::trend_row("b_odd_coef", r.odd_b_coef, r.odd_b_pred, true, tol.odd_coef_rel, false));
  rows.push_back(detail::trend_row("c_odd_coef", r.odd_c_coef, r.odd_c_pred, true, tol.odd_coef_rel, false));

  CheckRow d;
  d.name = "d_bias";
  d.predicted = r.d_pred;
  if (!r.d_est.empty()) {
    d.k = r.d_est.back().k;
    d.value = r.d_est.back().value;
    d.deviation = abs(d.value - d.predicted) / abs(d.predicted);
    d.pass = d.deviation.to_double() <= tol.d_rel;
  }
  rows.push_back(d);

  CheckRow th;
  th.name = "theta_stability";
  th.predicted = BigReal(P);
  th.deviation = BigReal(P);
  bool any = false;
  for (std::size_t j = 1; j < r.theta_est.size(); ++j) {
    if (2 * r.theta_est[j - 1].k < tol.theta_from_level) continue;
    BigReal ch = abs(r.theta_est[j].value - r.theta_est[j - 1].value) / abs(r.theta_est[j - 1].value);
    if (ch > th.deviation) th.deviation = ch;
    any = true;
  }
  if (!r.theta_est.empty()) {
    th.k = r.theta_est.back().k;
    th.value = r.theta_est.back().value;
  }
  th.pass = any && th.deviation.to_double() <= tol.theta_rel_change;
  th.trend_ok = any;
  rows.push_back(th);

  CheckRow ak = detail::trend_row("a_over_k0_b_beta", r.a_over_kb, BigReal(1L, P), true, 1.0, false);
  rows.push_back(ak);
  return rows;
}

struct InvariantComparison {
  bool beta_match = false;
  BigReal theta_a;
  BigReal theta_b;
  BigReal uncertainty;
  BigReal rho;  // (K0_a / K0_b)^(1/(beta-1))
  bool compatible = false;
};

inline BigReal rho_factor(const BigReal& k0a, const BigReal& k0b, const BigReal& beta) {
  return pow_real(k0a / k0b, BigReal(1L, beta.precision()) / (beta - 1L));
}

/// Theta of both reports at the deeper index they share; the uncertainty
/// of each estimate is its last change.
inline InvariantComparison compare_invariants(const ScalingReport& a, const ScalingReport& b) {
  InvariantComparison out;
  out.beta_match = a.beta == b.beta;
  out.rho = rho_factor(a.k0, b.k0, a.beta);
  std::size_t n = std::min(a.theta_est.size(), b.theta_est.size());
  if (n == 0) throw InsufficientDataError("compare_invariants: no Theta estimates");
  out.theta_a = a.theta_est[n - 1].value;
  out.theta_b = b.theta_est[n - 1].value;
  auto unc = [&](const ScalingReport& r) {
    if (n < 2) return abs(r.theta_est[n - 1].value);
    return abs(r.theta_est[n - 1].value - r.theta_est[n - 2].value);
  };
  out.uncertainty = unc(a) + unc(b);
  out.compatible = out.beta_match && abs(out.theta_a - out.theta_b) <= out.uncertainty;
  return out;
}

}  // namespace asymlab
