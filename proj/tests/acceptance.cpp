// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "asymlab/asymlab.hpp"
#include "asymlab/config.hpp"

using namespace asymlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(const BigReal& x) { return x.to_string(4); }

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

// shared standard run: beta = 2, K0 = 1, auto:12, max_level 10, precision auto
struct Standard {
  ResolvedRun run;
  RenormLadder ladder;
  ScalingReport report;
};

Standard& standard() {
  static Standard S = [] {
    RunConfig c;
    ResolvedRun r = resolve(c);
    RenormLadder L = run_ladder(r);
    ScalingReport rep = analyze(L);
    return Standard{r, L, rep};
  }();
  return S;
}

const CheckRow& row(const std::vector<CheckRow>& rows, const std::string& name) {
  for (const auto& r : rows)
    if (r.name == name) return r;
  throw ConsistencyError("missing check row " + name);
}

Outcome c1() {
  auto t0 = Clock::now();
  BigReal l2 = lambda_root(BigReal(2L, 256), 256);
  BigReal l1 = lambda_root(BigReal(1L, 256), 256);
  BigReal golden = (sqrt(BigReal(5L, 256)) - 1L) / 2L;
  double d2 = abs(l2 - golden).to_double(), d1 = abs(l1 - BigReal("0.5", 256)).to_double();
  double dt = seconds_since(t0);
  return {d2 <= 1e-15 && d1 <= 1e-15 && dt < 1.0,
          "|lambda(2) - golden| = " + sci(d2) + ", |lambda(1) - 0.5| = " + sci(d1)};
}

Outcome c2() {
  auto t0 = Clock::now();
  const mpfr_prec_t P = 256;
  AsymmetricMap m(BigReal(2L, P), BigReal(1L, P), BigReal(1L, P), BigReal(1L, P), P);
  BigReal rel = auto_rel_tol(P);
  BigReal golden = (sqrt(BigReal(5L, P)) - 1L) / 2L;
  CascadeRecord u1 = find_flip(m, 1, BigReal(1L, P), golden + 1L, rel);
  CascadeRecord t1 = find_superstable(m, 1, BigReal(1L, P), rel);
  CascadeRecord v0 = find_window_end(m, 0, BigReal("1.9", P), BigReal(2L, P), rel);
  double du = abs(*u1.u - BigReal("1.5", P)).to_double();
  double ds = abs(*t1.t_superstable - (golden + 1L)).to_double();
  double dv = abs(*v0.v - 2L).to_double();
  double dt = seconds_since(t0);
  return {du <= 1e-10 && ds <= 1e-10 && dv <= 1e-10 && dt < 10.0,
          "flip dev " + sci(du) + ", superstable dev " + sci(ds) + ", window end dev " + sci(dv)};
}

Outcome c3() {
  auto t0 = Clock::now();
  RunConfig c;
  c.precision_bits = "1024";
  ResolvedRun r = resolve(c);
  RenormLadder L = run_ladder(r);
  bool ok = L.max_trusted_level >= 10;
  double worst_diff = 0;  // |f(a) - f(b)| / root_tol
  for (int k = 1; k <= L.depth(); ++k) {
    const auto& lv = L.level(k);
    BigReal diff = abs(L.map.eval(lv.a) - L.map.eval(lv.b));
    if (!(diff <= lv.root_tol * 10L)) ok = false;
    if (lv.root_tol > 0L) worst_diff = std::max(worst_diff, (diff / lv.root_tol).to_double());
  }
  double lo = 1e300, hi = 0;
  for (int k = 6; k <= 10; ++k) {
    const auto& lv = L.level(k);
    double q = (abs(lv.a) / pow_real(lv.b, L.map.beta())).to_double();
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  ok = ok && lo >= 0.5 && hi <= 2.0;
  double dt = seconds_since(t0);
  ok = ok && dt < 600.0;
  return {ok, "1024 bits, depth " + std::to_string(L.depth()) + ", trusted " + std::to_string(L.max_trusted_level) +
                  ", max |f(a)-f(b)|/root_tol " + sci(worst_diff) + ", |a|/b^2 in [" + sci(lo) + ", " + sci(hi) +
                  "]"};
}

Outcome c4() {
  auto rows = check_theorem4(standard().report);
  const CheckRow& b = row(rows, "b_ratio_even");
  const CheckRow& c = row(rows, "c_over_b_even");
  bool ok = b.pass && c.pass && b.k == 10 && c.k == 10;
  return {ok, "k = " + std::to_string(b.k) + ": |b ratio - lambda| " + sci(b.deviation) +
                  ", |c/b - 1| " + sci(c.deviation) + ", trends " + (b.trend_ok && c.trend_ok ? "ok" : "broken")};
}

Outcome c5() {
  auto rows = check_theorem4(standard().report);
  const CheckRow& r = row(rows, "b_two_step_coef");
  // every deviation non-increasing, not only the last three
  const auto& xs = standard().report.coef51;
  bool mono = true;
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (abs(xs[i].value - r.predicted) > abs(xs[i - 1].value - r.predicted)) mono = false;
  return {r.pass && mono, "k = " + std::to_string(r.k) + ": rel dev " + sci(r.deviation) +
                              (mono ? ", non-increasing" : ", not monotone")};
}

Outcome c6() {
  auto rows = check_theorem4(standard().report);
  const CheckRow& d = row(rows, "d_bias");
  const CheckRow& th = row(rows, "theta_stability");
  // independent check of the predicted constant
  double ln4 = std::log(4.0);
  bool pred_ok = std::fabs(d.predicted.to_double() - ln4) < 1e-15;
  return {d.pass && th.pass && pred_ok, "D_est " + d.value.to_string(8) + " (rel dev " + sci(d.deviation) +
                                            "), max Theta rel change " + sci(th.deviation)};
}

Outcome c7() {
  const RenormLadder& L = standard().ladder;
  double worst = 0;
  for (int k = 4; k <= 10; k += 2) {
    SemiExtensionRecord r = semi_extension(L, k);
    worst = std::max(worst, (abs(r.B - L.level(k - 2).c_pow) / L.level(k - 2).b).to_double());
    worst = std::max(worst, (abs(r.hatA - L.level(k - 1).c_pow) / L.level(k - 1).b).to_double());
  }
  return {worst <= 1e-6, "max relative identity error " + sci(worst)};
}

Outcome c8() {
  const RenormLadder& L = standard().ladder;
  std::vector<TauRow> rows = tau_sequence(L, 11);
  if (rows.size() < 11) return {false, "ladder depth " + std::to_string(L.depth()) + " < 11"};
  double lam = lambda_root(L.map.beta(), L.map.precision()).to_double();
  bool ok = true;
  std::ostringstream os;
  for (int k : {7, 9, 11}) {
    double tau = rows[static_cast<std::size_t>(k - 1)].tau.to_double();
    ok = ok && std::fabs(tau - lam) <= 0.1 * lam;
    os << "tau_" << k << " " << sci(tau) << ", ";
  }
  for (int k : {8, 10}) {
    const auto& lr = rows[static_cast<std::size_t>(k - 1)].log_ratio;
    double v = lr ? lr->to_double() : -1;
    ok = ok && v >= 0.8 && v <= 1.2;
    os << "log ratio_" << k << " " << sci(v) << (k == 8 ? ", " : "");
  }
  return {ok, os.str()};
}

Outcome c9() {
  const RenormLadder& L = standard().ladder;
  std::vector<Theorem2Row> rows;
  for (int k = 6; k <= 10; k += 2) rows.push_back(theorem2_row(L, semi_extension(L, k)));
  bool dec = rows[0].hatA_over_b > rows[1].hatA_over_b && rows[1].hatA_over_b > rows[2].hatA_over_b;
  double last = rows[2].hatA_over_b.to_double(), ex = rows[2].exponent.to_double();
  bool ok = dec && last <= 0.1 && std::fabs(ex - 1.5) <= 0.2 * 1.5;
  return {ok, "|hatA_10|/b_10 " + sci(last) + ", exponent " + sci(ex) + (dec ? ", decreasing" : ", not decreasing")};
}

Outcome c10() {
  const RenormLadder& L = standard().ladder;
  const mpfr_prec_t P = L.map.precision();
  BigReal lam = lambda_root(L.map.beta(), P);
  std::vector<double> errs;
  for (int k : {4, 6, 8}) errs.push_back(renorm_limit_error(L, k, 33, lam).right_err.to_double());
  bool ok = errs[0] > errs[1] && errs[1] > errs[2] && errs[2] <= 0.05;
  double e1 = abs(odd_left_limit(lam, L.map.beta(), BigReal(-1L, P)) - 1L).to_double();
  double e0 = abs(odd_left_limit(lam, L.map.beta(), BigReal(0L, P))).to_double();
  ok = ok && e1 <= 1e-20 && e0 <= 1e-20;
  return {ok, "right errors " + sci(errs[0]) + ", " + sci(errs[1]) + ", " + sci(errs[2]) + "; endpoint errors " +
                  sci(e1) + ", " + sci(e0)};
}

Outcome c11() {
  const RenormLadder& L = standard().ladder;
  std::vector<CoverLevel> covers;
  int cap = std::min(kDefaultCoverCap, L.depth());
  for (int k = 0; k <= cap; ++k) covers.push_back(build_cover(L, k));
  HausdorffTable t = hausdorff_sums(covers, {0.5});
  std::optional<int> k0 = t.k0[0].second;
  if (!k0) return {false, "no k0 for gamma = 0.5"};
  bool ok = *k0 <= 6;
  for (const auto& r : t.rows)
    if (r.k >= *k0 && r.k % 2 == 0 && r.k + 2 <= cap) ok = ok && r.two_step_decrease.value_or(false);
  return {ok, "k0 = " + std::to_string(*k0) + ", cover cap " + std::to_string(cap)};
}

Outcome c12() {
  const RenormLadder& L = standard().ladder;
  BigReal eta("0.1", L.map.precision());
  int deepest = L.max_trusted_level / 2;
  double f3 = doublelog_expansion(L, 3, eta, 33).to_double();
  double f4 = doublelog_expansion(L, 4, eta, 33).to_double();
  double fd = doublelog_expansion(L, deepest, eta, 33).to_double();
  bool ok = f3 > 1.0 && f4 > 1.0 && fd >= 1.2;
  return {ok, "min factors i=3 " + sci(f3) + ", i=4 " + sci(f4) + ", i=" + std::to_string(deepest) + " " + sci(fd)};
}

Outcome c13() {
  const RenormLadder& L = standard().ladder;
  std::vector<double> v;
  for (int i = 3; i <= 5; ++i) v.push_back(entry_space_ratio(L, i).left_space_ratio.to_double());
  bool ok = v[0] > v[1] && v[1] > v[2] && v[2] < 0.5;
  return {ok, "ratios " + sci(v[0]) + ", " + sci(v[1]) + ", " + sci(v[2])};
}

Outcome c14() {
  const ScalingReport& one = standard().report;
  InvariantComparison same = compare_invariants(one, one);
  RunConfig c;
  c.scale_right = "2";
  ScalingReport two = analyze(run_ladder(resolve(c)));
  InvariantComparison cmp = compare_invariants(two, one);
  double drho = abs(cmp.rho - 2L).to_double();
  bool ok = same.compatible && same.rho == 1L && drho <= 1e-12;
  return {ok, std::string("same config ") + (same.compatible ? "compatible" : "incompatible") + ", rho " +
                  same.rho.to_string(6) + "; K0 = 2 vs 1: rho dev " + sci(drho)};
}

Outcome c15() {
  auto t0 = Clock::now();
  const double lo = 1.3, hi = 2.0;
  const int points = 2000;
  auto sweep = bifurcation_sweep(2.0, 1.0, 1.0, lo, hi, points, 100000, 256);
  double dt = seconds_since(t0);
  double step = (hi - lo) / (points - 1);

  // flip parameters u_1 .. u_6
  const mpfr_prec_t P = 200;
  CascadeSolver cs(AsymmetricMap(BigReal(2L, P), BigReal(1L, P), BigReal(1L, P), BigReal(1L, P), P),
                   auto_rel_tol(P));
  std::vector<double> u;
  for (int n = 1; n <= 6; ++n) u.push_back(cs.flip(n).u->to_double());

  auto near_flip = [&](double t) {
    for (double x : u)
      if (std::fabs(t - x) <= step) return true;
    return false;
  };
  bool ok = dt < 60.0;
  int bad1 = 0, bad2 = 0;
  for (const auto& s : sweep) {
    if (near_flip(s.t)) continue;
    if (s.t < 1.5 && s.detected_period != 1) ++bad1;
    if (s.t > 1.5 && s.t < 1.618 && s.detected_period != 2) ++bad2;
  }
  ok = ok && bad1 == 0 && bad2 == 0;

  // across each u_n resolved by the grid, the period goes from 2^(n-1) to 2^n
  int checked = 0, bad_doubling = 0;
  for (std::size_t n = 0; n < u.size(); ++n) {
    double left_edge = n == 0 ? lo : u[n - 1] + step;
    double right_edge = n + 1 < u.size() ? u[n + 1] - step : hi;
    const BifurcationSample* before = nullptr;
    const BifurcationSample* after = nullptr;
    for (const auto& s : sweep) {
      if (s.t > left_edge && s.t < u[n] - step) before = &s;
      if (!after && s.t > u[n] + step && s.t < right_edge) after = &s;
    }
    if (!before || !after) continue;
    ++checked;
    int p = 1 << n;
    if (before->detected_period != p || after->detected_period != 2 * p) ++bad_doubling;
  }
  ok = ok && checked >= 3 && bad_doubling == 0;
  return {ok, std::to_string(points) + " points in " + sci(dt) + " s; period errors " + std::to_string(bad1) + "/" +
                  std::to_string(bad2) + "; doublings checked " + std::to_string(checked) + ", failed " +
                  std::to_string(bad_doubling)};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {c1, c2, c3,  c4,  c5,  c6,  c7, c8,
                                                          c9, c10, c11, c12, c13, c14, c15};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double dt = seconds_since(t0);
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, dt, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
