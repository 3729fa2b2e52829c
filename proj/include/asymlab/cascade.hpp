#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "asymlab/bigreal.hpp"
#include "asymlab/errors.hpp"
#include "asymlab/ladder.hpp"
#include "asymlab/map.hpp"
#include "asymlab/roots.hpp"

namespace asymlab {

enum class CascadeCondition { CriticalPeriodic, MultiplierMinusOne, SurjectiveWindow };

inline const char* to_string(CascadeCondition c) {
  switch (c) {
    case CascadeCondition::CriticalPeriodic: return "critical-periodic";
    case CascadeCondition::MultiplierMinusOne: return "multiplier-minus-one";
    case CascadeCondition::SurjectiveWindow: return "surjective-window";
  }
  return "?";
}

struct CascadeRecord {
  int n = 0;
  std::optional<BigReal> u;
  std::optional<BigReal> v;
  std::optional<BigReal> t_superstable;
  BigReal bracket_width;
  CascadeCondition condition = CascadeCondition::CriticalPeriodic;
  BigReal residual;
};

/// phi_n(t) = f_t^(2^n)(0).
inline BigReal phi(const AsymmetricMap& m, int n) {
  BigReal x(m.precision());
  apply_iterates(m, x, two_pow(n));
  return x;
}

inline BigReal phi(const AsymmetricMap& proto, int n, const BigReal& t) { return phi(proto.with_t(t), n); }

namespace detail {

inline BigReal tol_for(const BigReal& t, const BigReal& rel, const BigReal& lo, const BigReal& hi) {
  BigReal tol = abs(t) * rel;
  BigReal fl = ulp(max(abs(lo), abs(hi))) * 8L;
  return tol < fl ? fl : tol;
}

inline bool period_exact(const AsymmetricMap& m, int n, const BigReal& tol) {
  for (int j = 0; j < n; ++j)
    if (abs(phi(m, j)) <= tol) return false;
  return true;
}

/// One trial of a parameter search: which side of the target t lies on and,
/// when the trial is decided by the defining condition itself, a signed
/// value (negative below the target, positive above).
struct Probe {
  int side = 0;
  std::optional<BigReal> value;
};

/// Shrinks [lo, hi] (lo below, hi above) by bisection until both ends carry
/// values, then finishes with Dekker's method on the value. With `origin`,
/// bisection is geometric in the distance from origin.
inline RootResult hybrid_solve(const std::function<Probe(const BigReal&)>& probe, BigReal lo, Probe plo, BigReal hi,
                               Probe phi_, const BigReal& tol, const std::optional<BigReal>& origin,
                               const char* who) {
  int guard = 0;
  while (!(plo.value && phi_.value)) {
    if (hi - lo <= tol) break;
    BigReal mid(lo.precision());
    if (origin) {
      BigReal dl = lo - *origin, dh = hi - *origin;
      mid = (dl.sign() > 0) ? *origin + sqrt(dl * dh) : ldexp(lo + hi, -1);
    } else {
      mid = ldexp(lo + hi, -1);
    }
    if (mid <= lo || mid >= hi) break;
    Probe pm = probe(mid);
    if (pm.side < 0) {
      lo = std::move(mid);
      plo = std::move(pm);
    } else {
      hi = std::move(mid);
      phi_ = std::move(pm);
    }
    if (++guard > 100000) throw SearchExhaustedError(std::string(who) + ": bisection did not terminate");
  }
  if (!(plo.value && phi_.value)) {
    BigReal w = hi - lo;
    BigReal z(lo.precision());
    return RootResult{ldexp(lo + hi, -1), z, guard, w};
  }
  BigReal scale = max(abs(*plo.value), abs(*phi_.value));
  auto g = [&](const BigReal& t) -> BigReal {
    if (t == lo) return *plo.value;
    if (t == hi) return *phi_.value;
    Probe p = probe(t);
    if (p.value) return *p.value;
    return p.side < 0 ? -scale : scale;
  };
  RootResult r = refine_root_secant(g, lo, hi, tol);
  r.iterations += guard;
  return r;
}

}  // namespace detail

/// First parameter >= search_start at which phi_n changes sign, scanning
/// upward on a grid that is geometric near search_start and uniform further
/// out; the root must have exact period 2^n.
inline CascadeRecord find_superstable(const AsymmetricMap& proto, int n, const BigReal& search_start,
                                      const BigReal& rel_tol) {
  const mpfr_prec_t P = proto.precision();
  BigReal start = search_start.with_precision(P);
  BigReal top = proto.t_max();
  if (start >= top) throw SearchExhaustedError("find_superstable: search_start is at the top of the family");
  BigReal span = top - start;
  std::vector<BigReal> probes;
  for (int j = 60; j >= 7; --j) probes.push_back(start + ldexp(span, -j));
  for (int i = 1; i <= 128; ++i) probes.push_back(start + span * static_cast<long>(i) / 128L);
  probes.back() = top;

  auto val = [&](const BigReal& t) { return phi(proto, n, t); };
  BigReal ptol = ldexp(BigReal(1L, P), -static_cast<long>(P / 2));
  BigReal g0 = val(start);
  if (g0.is_zero() && detail::period_exact(proto.with_t(start), n, ptol)) {
    CascadeRecord rec;
    rec.n = n;
    rec.t_superstable = start;
    rec.bracket_width = BigReal(P);
    rec.residual = g0;
    return rec;
  }
  BigReal prev = probes.front();
  BigReal gprev = val(prev);
  for (std::size_t i = 1; i < probes.size(); ++i) {
    const BigReal& t = probes[i];
    BigReal gt = val(t);
    if (gt.sign() == 0 || gt.sign() != gprev.sign()) {
      RootResult rr = gt.sign() == 0 ? RootResult{t, gt, 0, BigReal(P)}
                                     : refine_root_secant(val, prev, t, detail::tol_for(t, rel_tol, prev, t));
      AsymmetricMap at = proto.with_t(rr.root);
      if (detail::period_exact(at, n, ptol)) {
        CascadeRecord rec;
        rec.n = n;
        rec.t_superstable = rr.root;
        rec.bracket_width = rr.bracket_width;
        rec.residual = rr.residual;
        return rec;
      }
    }
    prev = t;
    gprev = std::move(gt);
  }
  throw SearchExhaustedError("find_superstable: no sign change of phi_" + std::to_string(n) +
                             " with exact period found above " + start.to_string(20));
}

/// Decides on which side of the level-n superstable parameter t lies by
/// building the ladder at t. Odd n only.
inline detail::Probe classify_superstable(const AsymmetricMap& proto, int n, const BigReal& t,
                                          const std::optional<BigReal>& rel) {
  AsymmetricMap m = proto.with_t(t);
  BuildOptions o;
  o.rel_tol = rel;
  o.stop_on_escape = true;
  LevelBuild lb = build_levels(m, n, o);
  if (lb.status == BuildStatus::Escaped) return {+1, std::nullopt};
  if (lb.status == BuildStatus::NotBorn) return {-1, std::nullopt};
  const BigReal& c = lb.levels.back().c_pow;
  return {c.sign() > 0 ? -1 : +1, -c};
}

/// Superstable parameter of the period-doubling cascade at odd level n:
/// f_t^(2^n)(0) = 0 with t inside every window of levels < n.
/// `prev` is t_{n-2} (or 1), `pred_gap` a guess for t_n - prev.
inline CascadeRecord cascade_superstable(const AsymmetricMap& proto, int n, const BigReal& prev,
                                         std::optional<BigReal> pred_gap, const BigReal& rel_tol) {
  if (n % 2 == 0) throw DomainError("cascade_superstable: level must be odd");
  const mpfr_prec_t P = proto.precision();
  BigReal start = prev.with_precision(P);
  BigReal room = proto.t_max() - start;
  BigReal d = pred_gap ? pred_gap->with_precision(P) : room / 8L;
  if (d > room) d = room;
  std::optional<BigReal> rel = rel_tol;
  auto probe = [&](const BigReal& t) { return classify_superstable(proto, n, t, rel); };

  detail::Probe p = probe(start + d);
  BigReal lo(P), hi(P);
  detail::Probe plo, phi_;
  if (p.side < 0) {
    lo = start + d;
    plo = p;
    for (int i = 0;; ++i) {
      d = d * 8L;
      if (d >= room) d = room;
      detail::Probe q = probe(start + d);
      if (q.side > 0) {
        hi = start + d;
        phi_ = q;
        break;
      }
      lo = start + d;
      plo = q;
      if (d == room || i > 400)
        throw SearchExhaustedError("cascade_superstable: no level-" + std::to_string(n) +
                                   " superstable parameter below the top of the family");
    }
  } else {
    hi = start + d;
    phi_ = p;
    for (int i = 0;; ++i) {
      d = d / 8L;
      detail::Probe q = probe(start + d);
      if (q.side < 0) {
        lo = start + d;
        plo = q;
        break;
      }
      hi = start + d;
      phi_ = q;
      if (i > 2000) throw SearchExhaustedError("cascade_superstable: level " + std::to_string(n) + " not bracketed");
    }
  }
  BigReal tol = detail::tol_for(hi, rel_tol, lo, hi);
  // Dekker on phi_n as soon as its signs bracket, accepted only if the
  // ladder at the root reaches level n without escape; otherwise narrow the
  // bracket geometrically towards start.
  auto g = [&](const BigReal& t) { return -phi(proto, n, t); };
  auto in_cascade = [&](const BigReal& t) {
    BuildOptions o;
    o.rel_tol = rel;
    o.stop_on_escape = true;
    return build_levels(proto.with_t(t), n, o).status == BuildStatus::Complete;
  };
  RootResult rr = [&] {
    for (int guard = 0; guard < 100000; ++guard) {
      if (g(lo).sign() < 0 && g(hi).sign() > 0) {
        RootResult r = refine_root_secant(g, lo, hi, tol);
        if (in_cascade(r.root)) return r;
      }
      if (plo.value && phi_.value) break;
      if (hi - lo <= tol) break;
      BigReal dl = lo - start, dh = hi - start;
      BigReal mid = start + sqrt(dl * dh);
      if (mid <= lo || mid >= hi) mid = ldexp(lo + hi, -1);
      detail::Probe q = probe(mid);
      if (q.side < 0) {
        lo = std::move(mid);
        plo = q;
      } else {
        hi = std::move(mid);
        phi_ = q;
      }
    }
    return detail::hybrid_solve(probe, lo, plo, hi, phi_, tol, start, "cascade_superstable");
  }();
  CascadeRecord rec;
  rec.n = n;
  rec.t_superstable = rr.root;
  rec.bracket_width = rr.bracket_width;
  rec.residual = phi(proto, n, rr.root);
  rec.condition = CascadeCondition::CriticalPeriodic;
  return rec;
}

/// Multiplier of the orientation-reversing fixed point of f^(2^(n-1)) that
/// becomes b_n; nullopt when that point does not exist yet.
inline std::optional<BigReal> flip_multiplier(const AsymmetricMap& m, int n, const std::optional<BigReal>& rel) {
  BuildOptions o;
  o.rel_tol = rel;
  o.want_next_fixed_point = true;
  LevelBuild lb = build_levels(m, n - 1, o);
  if (lb.status != BuildStatus::Complete || !lb.extra_fixed_point) return std::nullopt;
  return m.derivative_along_orbit(*lb.extra_fixed_point, static_cast<long>(two_pow(n - 1)));
}

/// Odd n: parameter in [lo, hi] where the period-2^(n-1) orbit through b_n
/// has multiplier -1. Below the flip the orbit is absent or has
/// multiplier > -1.
inline CascadeRecord find_flip(const AsymmetricMap& proto, int n, const BigReal& lo, const BigReal& hi,
                               const BigReal& rel_tol) {
  if (n % 2 == 0) throw DomainError("find_flip: level must be odd");
  const mpfr_prec_t P = proto.precision();
  std::optional<BigReal> rel = rel_tol;
  auto probe = [&](const BigReal& t) -> detail::Probe {
    auto mult = flip_multiplier(proto.with_t(t), n, rel);
    if (!mult) return {-1, std::nullopt};
    BigReal v = -(*mult + 1L);
    return {v.sign() < 0 ? -1 : +1, v};
  };
  BigReal l = lo.with_precision(P), h = hi.with_precision(P);
  detail::Probe pl = probe(l), ph = probe(h);
  if (pl.side > 0 || ph.side < 0)
    throw ContinuationError("find_flip: multiplier -1 not bracketed by [" + l.to_string(20) + ", " +
                            h.to_string(20) + "]");
  RootResult rr = detail::hybrid_solve(probe, l, pl, h, ph, detail::tol_for(h, rel_tol, l, h), std::nullopt,
                                       "find_flip");
  CascadeRecord rec;
  rec.n = n;
  rec.u = rr.root;
  rec.bracket_width = rr.bracket_width;
  rec.condition = CascadeCondition::MultiplierMinusOne;
  auto mult = flip_multiplier(proto.with_t(rr.root), n, rel);
  rec.residual = mult ? *mult + 1L : BigReal(P);
  return rec;
}

/// Window end v_n: the level-n critical value reaches the boundary of
/// [a_n, b_n] (b_n for even n, a_n for odd n). v_0 is the top of the family.
inline detail::Probe window_probe(const AsymmetricMap& m, int n, const std::optional<BigReal>& rel) {
  BuildOptions o;
  o.rel_tol = rel;
  o.stop_on_escape = false;
  LevelBuild lb = build_levels(m, n, o);
  if (lb.status == BuildStatus::NotBorn) return {-1, std::nullopt};
  for (int k = 0; k < n; ++k)
    if (detail::escaped(lb.levels[static_cast<std::size_t>(k)])) return {+1, std::nullopt};
  const auto& lv = lb.levels.back();
  BigReal v = n % 2 == 0 ? lv.c_pow - lv.b : lv.a - lv.c_pow;
  return {v.sign() < 0 ? -1 : +1, v};
}

inline CascadeRecord find_window_end(const AsymmetricMap& proto, int n, const BigReal& lo, const BigReal& hi,
                                     const BigReal& rel_tol) {
  const mpfr_prec_t P = proto.precision();
  CascadeRecord rec;
  rec.n = n;
  rec.condition = CascadeCondition::SurjectiveWindow;
  if (n == 0) {
    // c_1 = t - 1 reaches b_0 exactly at the top of the family
    rec.v = proto.t_max();
    rec.bracket_width = BigReal(P);
    rec.residual = proto.with_t(proto.t_max()).eval(BigReal(P)) - proto.b0();
    return rec;
  }
  std::optional<BigReal> rel = rel_tol;
  auto probe = [&](const BigReal& t) { return window_probe(proto.with_t(t), n, rel); };
  BigReal l = lo.with_precision(P), h = hi.with_precision(P);
  detail::Probe pl = probe(l), ph = probe(h);
  if (pl.side > 0 || ph.side < 0)
    throw BracketError("find_window_end: boundary condition not bracketed by [" + l.to_string(20) + ", " +
                       h.to_string(20) + "]" + (pl.side > 0 ? " (shrink the upper side)" : " (shrink the lower side)"));
  RootResult rr = detail::hybrid_solve(probe, l, pl, h, ph, detail::tol_for(h, rel_tol, l, h), std::nullopt,
                                       "find_window_end");
  rec.v = rr.root;
  rec.bracket_width = rr.bracket_width;
  rec.residual = rr.residual;
  return rec;
}

/// Superstable anchors t_1 < t_3 < ... computed in sequence. Superstable
/// parameters of period 2^n inside the cascade exist for odd n only; an even
/// request is served by the next odd level.
class CascadeSolver {
 public:
  CascadeSolver(AsymmetricMap proto, BigReal rel_tol) : proto_(std::move(proto)), rel_(std::move(rel_tol)) {}

  const AsymmetricMap& proto() const { return proto_; }
  const BigReal& rel_tol() const { return rel_; }

  static int anchor_level(int n) { return n % 2 == 0 ? n + 1 : n; }

  /// t_n for odd n >= 1; t_0 = 1.
  const CascadeRecord& superstable(int n) {
    if (n == 0) {
      if (!t0_) {
        CascadeRecord r;
        r.n = 0;
        r.t_superstable = BigReal(1L, proto_.precision());
        r.bracket_width = BigReal(proto_.precision());
        r.residual = BigReal(proto_.precision());
        t0_ = r;
      }
      return *t0_;
    }
    if (n % 2 == 0) throw DomainError("superstable: level " + std::to_string(n) + " is even");
    auto it = odd_.find(n);
    if (it != odd_.end()) return it->second;
    BigReal prev = n == 1 ? BigReal(1L, proto_.precision()) : *superstable(n - 2).t_superstable;
    std::optional<BigReal> gap;
    if (n >= 5) {
      // gaps shrink roughly like g_n = g_{n-2}^3 / g_{n-4}^2
      BigReal g2 = prev - odd_anchor(n - 4);
      BigReal g1 = odd_anchor(n - 4) - odd_anchor(n - 6);
      gap = g2 * g2 * g2 / (g1 * g1);
    }
    CascadeRecord r = cascade_superstable(proto_, n, prev, gap, rel_);
    return odd_.emplace(n, std::move(r)).first->second;
  }

  /// t_m for odd m >= 1, and 1 for m = -1.
  BigReal odd_anchor(int m) {
    if (m < 1) return BigReal(1L, proto_.precision());
    return *superstable(m).t_superstable;
  }

  /// u_n: flip for odd n, t_{n-1} for even n.
  CascadeRecord flip(int n) {
    if (n < 1) throw DomainError("flip: n must be >= 1");
    if (n % 2 == 0) {
      CascadeRecord r = superstable(n - 1);
      r.n = n;
      r.u = r.t_superstable;
      r.t_superstable.reset();
      r.condition = CascadeCondition::CriticalPeriodic;
      return r;
    }
    BigReal lo = n == 1 ? BigReal(1L, proto_.precision()) : *superstable(n - 2).t_superstable;
    return find_flip(proto_, n, lo, *superstable(n).t_superstable, rel_);
  }

  /// v_n, bracketed by the deep anchor below and v_{n-1} above.
  const CascadeRecord& window_end(int n, int anchor) {
    auto it = v_.find(n);
    if (it != v_.end()) return it->second;
    if (n == 0) return v_.emplace(0, find_window_end(proto_, 0, proto_.t_max(), proto_.t_max(), rel_)).first->second;
    BigReal hi = *window_end(n - 1, anchor).v;
    BigReal lo = *superstable(anchor_level(std::max(anchor, n))).t_superstable;
    return v_.emplace(n, find_window_end(proto_, n, lo, hi, rel_)).first->second;
  }

 private:
  AsymmetricMap proto_;
  BigReal rel_;
  std::optional<CascadeRecord> t0_;
  std::map<int, CascadeRecord> odd_;
  std::map<int, CascadeRecord> v_;
};

/// Working proxy for the accumulation parameter: the deepest superstable
/// anchor at level N (N + 1 if N is even).
inline CascadeRecord estimate_tstar(CascadeSolver& cs, int N) {
  if (N < 1) throw DomainError("estimate_tstar: N must be >= 1");
  return cs.superstable(CascadeSolver::anchor_level(N));
}

struct BifurcationSample {
  double t = 0;
  std::vector<double> attractor_points;
  int detected_period = 0;  // 0 means aperiodic
};

/// Attractor of 0 on a uniform parameter grid, in double precision.
inline std::vector<BifurcationSample> bifurcation_sweep(double beta, double scale_left, double scale_right,
                                                        double t_lo, double t_hi, int n_points, long transient,
                                                        int samples, int jobs = 1) {
  if (n_points < 1 || samples < 2) throw DomainError("bifurcation_sweep: need >= 1 point and >= 2 samples");
  double b0 = std::pow(scale_right, -1.0 / beta), a0 = -1.0 / scale_left;
  if (!(t_lo >= 1.0 && t_lo < t_hi && t_hi <= 1.0 + b0 + 1e-15))
    throw DomainError("bifurcation_sweep: need 1 <= t_lo < t_hi <= t_max");
  std::vector<BifurcationSample> out(static_cast<std::size_t>(n_points));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n_points; i = next++) {
      double t = n_points == 1 ? t_lo : t_lo + (t_hi - t_lo) * i / (n_points - 1);
      auto f = [&](double x) {
        double y = x < 0 ? t * (1 + scale_left * x) - 1 : t * (1 - scale_right * std::pow(x, beta)) - 1;
        return std::clamp(y, a0, b0);
      };
      double x = 0;
      for (long j = 0; j < transient; ++j) x = f(x);
      std::vector<double> orb(static_cast<std::size_t>(samples));
      for (int j = 0; j < samples; ++j) {
        orb[static_cast<std::size_t>(j)] = x;
        x = f(x);
      }
      BifurcationSample s;
      s.t = t;
      for (int p = 1; p <= samples / 2; ++p) {
        bool ok = true;
        for (int j = 0; j + p < samples && ok; ++j) {
          double a = orb[static_cast<std::size_t>(j)], b = orb[static_cast<std::size_t>(j + p)];
          ok = std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(a));
        }
        if (ok) {
          s.detected_period = p;
          break;
        }
      }
      if (s.detected_period > 0) {
        s.attractor_points.assign(orb.begin(), orb.begin() + s.detected_period);
      } else {
        s.attractor_points = orb;
      }
      std::sort(s.attractor_points.begin(), s.attractor_points.end());
      out[static_cast<std::size_t>(i)] = std::move(s);
    }
  };
  int nj = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int j = 1; j < nj; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace asymlab
