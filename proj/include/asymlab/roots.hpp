#pragma once

#include <cmath>
#include <utility>

#include "asymlab/bigreal.hpp"
#include "asymlab/errors.hpp"

namespace asymlab {

struct RootResult {
  BigReal root;
  BigReal residual;
  int iterations = 0;
  BigReal bracket_width;
};

namespace detail {

inline void check_bracket_tol(const BigReal& lo, const BigReal& hi, const BigReal& tol, const char* who) {
  BigReal scale = max(abs(lo), abs(hi));
  if (tol < ulp(scale) * 4L)
    throw PrecisionError(std::string(who) + ": tolerance " + tol.to_string(8) +
                         " is below 4 ulp of the bracket at " + std::to_string(scale.precision()) + " bits");
}

inline bool same_sign(const BigReal& a, const BigReal& b) { return a.sign() * b.sign() > 0; }

inline RootResult finish(BigReal root, BigReal residual, int it, BigReal width) {
  return RootResult{std::move(root), std::move(residual), it, std::move(width)};
}

}  // namespace detail

/// Bisection on a sign-changing continuous g over [lo, hi].
///
/// Stops when the bracket is no wider than `tol` (absolute) and returns the
/// endpoint with the smaller |g|. An exact zero ends the search immediately.
template <class G>
RootResult bisect_root(G&& g, BigReal lo, BigReal hi, const BigReal& tol) {
  if (hi < lo) std::swap(lo, hi);
  BigReal glo = g(lo), ghi = g(hi);
  if (glo.is_zero()) return detail::finish(lo, glo, 0, BigReal(0L, lo.precision()));
  if (ghi.is_zero()) return detail::finish(hi, ghi, 0, BigReal(0L, hi.precision()));
  if (detail::same_sign(glo, ghi))
    throw BracketError("bisect_root: g has the same sign at both ends of [" + lo.to_string(12) + ", " +
                       hi.to_string(12) + "]");
  detail::check_bracket_tol(lo, hi, tol, "bisect_root");
  int it = 0;
  while (hi - lo > tol) {
    BigReal mid = ldexp(lo + hi, -1);
    if (mid <= lo || mid >= hi) break;  // out of representable points
    BigReal gm = g(mid);
    ++it;
    if (gm.is_zero()) return detail::finish(mid, gm, it, hi - lo);
    if (detail::same_sign(gm, glo)) {
      lo = std::move(mid);
      glo = std::move(gm);
    } else {
      hi = std::move(mid);
      ghi = std::move(gm);
    }
  }
  BigReal width = hi - lo;
  if (abs(glo) <= abs(ghi)) return detail::finish(std::move(lo), std::move(glo), it, std::move(width));
  return detail::finish(std::move(hi), std::move(ghi), it, std::move(width));
}

/// Dekker's method: secant steps from the two latest iterates, kept inside
/// the bracket, with a bisection step whenever the secant leaves the
/// interval between the best point and the midpoint or the bracket fails to
/// halve over two iterations. Same contract as bisect_root.
template <class G>
RootResult refine_root_secant(G&& g, BigReal lo, BigReal hi, const BigReal& tol) {
  if (hi < lo) std::swap(lo, hi);
  BigReal ga = g(lo), gb = g(hi);
  if (ga.is_zero()) return detail::finish(lo, ga, 0, BigReal(0L, lo.precision()));
  if (gb.is_zero()) return detail::finish(hi, gb, 0, BigReal(0L, hi.precision()));
  if (detail::same_sign(ga, gb))
    throw BracketError("refine_root_secant: g has the same sign at both ends of [" + lo.to_string(12) + ", " +
                       hi.to_string(12) + "]");
  detail::check_bracket_tol(lo, hi, tol, "refine_root_secant");

  // b: best estimate, a: contrapoint (g(a), g(b) of opposite sign), c: previous b.
  BigReal a = lo, b = hi;
  if (abs(ga) < abs(gb)) {
    std::swap(a, b);
    std::swap(ga, gb);
  }
  BigReal c = a, gc = ga;
  BigReal half_tol = ldexp(tol, -1);
  BigReal width_old = abs(b - a);
  BigReal width_older = width_old;
  int it = 0;
  bool force_bisect = false;

  while (abs(b - a) > tol) {
    BigReal m = ldexp(a + b, -1);
    if (m == a || m == b) break;
    BigReal s = m;
    if (!force_bisect && !(gb == gc)) {
      BigReal sec = b - gb * (b - c) / (gb - gc);
      // accept only strictly between b and m
      bool inside = (b < m) ? (sec > b && sec < m) : (sec < b && sec > m);
      if (inside) s = std::move(sec);
    }
    if (abs(s - b) < half_tol) s = (b < m) ? b + half_tol : b - half_tol;
    BigReal gs = g(s);
    ++it;
    if (gs.is_zero()) return detail::finish(s, gs, it, BigReal(0L, s.precision()));
    c = b;
    gc = gb;
    if (detail::same_sign(gs, ga)) {
      // root lies between s and the old best point
      a = b;
      ga = gb;
    }
    b = std::move(s);
    gb = std::move(gs);
    if (abs(ga) < abs(gb)) {
      std::swap(a, b);
      std::swap(ga, gb);
    }
    BigReal w = abs(b - a);
    force_bisect = w > ldexp(width_older, -1);
    width_older = std::move(width_old);
    width_old = std::move(w);
  }
  return detail::finish(b, gb, it, abs(b - a));
}

/// Working precision in bits for a ladder of depth K given a guess for the
/// doubly exponential rate: ceil(beta * theta * 2^floor(K/2) / ln 2) + 256.
inline long required_precision(int K, double theta_guess, double beta) {
  if (K < 0) throw DomainError("required_precision: K must be >= 0");
  if (!(theta_guess > 0)) throw DomainError("required_precision: theta_guess must be > 0");
  double depth = std::ldexp(1.0, K / 2);
  return static_cast<long>(std::ceil(beta * theta_guess * depth / std::log(2.0))) + 256;
}

}  // namespace asymlab
