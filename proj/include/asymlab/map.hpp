#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asymlab/bigreal.hpp"
#include "asymlab/errors.hpp"

namespace asymlab {

/// Letters 1 (left branch, point < 0) and 2 (right branch, point >= 0).
using BranchWord = std::vector<std::uint8_t>;

struct Orbit {
  std::vector<BigReal> points;  // n + 1 points
  BranchWord word;              // letter of points[0..n-1]
};

/// f(x) = t(1 + sL x) - 1 for x < 0 and t(1 - sR x^beta) - 1 for x >= 0.
///
/// Domain [a0, b0] with a0 = -1/sL and b0 = sR^(-1/beta), so f(b0) = -1 and
/// f(a0) = -1 >= a0. Admissible parameters: beta > 1, 0 < sL <= 1, sR > 0 and
/// 1 <= t <= 1 + b0 (the upper limit makes f(0) = b0). For sL = sR = 1 this
/// is the standard family on [-1, 1] with t in [1, 2].
///
/// The left branch f1 is the affine formula continued past 0 up to eps0,
/// where f1(eps0) = b0.
class AsymmetricMap {
 public:
  AsymmetricMap(const BigReal& beta, const BigReal& t, const BigReal& scale_left, const BigReal& scale_right,
                mpfr_prec_t bits)
      : bits_(bits),
        beta_(beta.with_precision(bits)),
        t_(t.with_precision(bits)),
        sl_(scale_left.with_precision(bits)),
        sr_(scale_right.with_precision(bits)) {
    if (!(beta_ > 1L)) throw DomainError("AsymmetricMap: beta must be > 1, got " + beta_.to_string(20));
    if (!(sl_ > 0L) || sl_ > 1L)
      throw DomainError("AsymmetricMap: scale_left must lie in (0, 1], got " + sl_.to_string(20));
    if (!(sr_ > 0L)) throw DomainError("AsymmetricMap: scale_right must be > 0, got " + sr_.to_string(20));
    a0_ = -(BigReal(1L, bits) / sl_);
    b0_ = pow_real(sr_, -(BigReal(1L, bits) / beta_));
    if (sr_ == 1L) b0_ = BigReal(1L, bits);
    t_max_ = b0_ + 1L;
    if (t_ < 1L || t_ > t_max_)
      throw DomainError("AsymmetricMap: t must lie in [1, " + t_max_.to_string(20) + "], got " + t_.to_string(20));
    tm1_ = t_ - 1L;
    tsl_ = t_ * sl_;
    tsr_ = t_ * sr_;
    eps0_ = ((b0_ + 1L) / t_ - 1L) / sl_;
    k0_ = sr_ / sl_;
    if (beta_.is_integer() && beta_ < 1024L) beta_int_ = mpfr_get_ui(beta_.raw(), MPFR_RNDN);
  }

  /// Same map at a different parameter t.
  AsymmetricMap with_t(const BigReal& t) const { return AsymmetricMap(beta_, t, sl_, sr_, bits_); }

  mpfr_prec_t precision() const { return bits_; }
  const BigReal& beta() const { return beta_; }
  const BigReal& t() const { return t_; }
  const BigReal& scale_left() const { return sl_; }
  const BigReal& scale_right() const { return sr_; }
  const BigReal& a0() const { return a0_; }
  const BigReal& b0() const { return b0_; }
  const BigReal& eps0() const { return eps0_; }
  const BigReal& t_max() const { return t_max_; }
  /// K0 = K+ / K- = scale_right / scale_left.
  const BigReal& k0() const { return k0_; }

  bool in_domain(const BigReal& x) const { return x >= a0_ && x <= b0_; }

  BigReal eval(const BigReal& x) const {
    if (!in_domain(x))
      throw DomainError("eval: x = " + x.to_string(20) + " outside [" + a0_.to_string(20) + ", " +
                        b0_.to_string(20) + "]");
    BigReal y = x.with_precision(bits_), tmp(bits_);
    step(y.raw(), tmp.raw());
    return y;
  }

  /// One application of f in place: x at this map's precision, tmp scratch.
  /// No domain check; the result is clamped below at a0 against rounding.
  void step(mpfr_ptr x, mpfr_ptr tmp) const {
    if (mpfr_sgn(x) < 0) {
      mpfr_fma(x, tsl_.raw(), x, tm1_.raw(), MPFR_RNDN);
    } else {
      power(tmp, x);
      mpfr_fms(x, tsr_.raw(), tmp, tm1_.raw(), MPFR_RNDN);
      mpfr_neg(x, x, MPFR_RNDN);
      if (mpfr_cmp(x, a0_.raw()) < 0) mpfr_set(x, a0_.raw(), MPFR_RNDN);
    }
  }

  /// f1 (branch 1, on [a0, eps0]) or f2 (branch 2, on [0, b0]).
  BigReal eval_branch(int branch, const BigReal& x) const {
    BigReal y(bits_);
    if (branch == 1) {
      if (x < a0_ || x > eps0_)
        throw BranchDomainError("eval_branch: x = " + x.to_string(20) + " outside the f1 domain [" +
                                a0_.to_string(20) + ", " + eps0_.to_string(20) + "]");
      mpfr_fma(y.raw(), tsl_.raw(), x.with_precision(bits_).raw(), tm1_.raw(), MPFR_RNDN);
    } else if (branch == 2) {
      if (x.sign() < 0 || x > b0_)
        throw BranchDomainError("eval_branch: x = " + x.to_string(20) + " outside the f2 domain [0, " +
                                b0_.to_string(20) + "]");
      BigReal tmp(bits_);
      power(tmp.raw(), x.with_precision(bits_).raw());
      mpfr_fms(y.raw(), tsr_.raw(), tmp.raw(), tm1_.raw(), MPFR_RNDN);
      mpfr_neg(y.raw(), y.raw(), MPFR_RNDN);
    } else {
      throw DomainError("eval_branch: branch must be 1 or 2");
    }
    return y;
  }

  /// Inverse of f1 on [-1, b0] or of f2 on [-1, t - 1].
  BigReal inverse_branch(int branch, const BigReal& y) const {
    BigReal yy = y.with_precision(bits_);
    if (branch == 1) {
      if (yy < -1L || yy > b0_)
        throw BranchDomainError("inverse_branch: y = " + y.to_string(20) + " outside the f1 range");
      return ((yy + 1L) / t_ - 1L) / sl_;
    }
    if (branch == 2) {
      if (yy < -1L || yy > tm1_)
        throw BranchDomainError("inverse_branch: y = " + y.to_string(20) + " outside the f2 range");
      BigReal u = (1L - (yy + 1L) / t_) / sr_;
      if (u.sign() <= 0) return BigReal(bits_);
      return pow_real(u, BigReal(1L, bits_) / beta_);
    }
    throw DomainError("inverse_branch: branch must be 1 or 2");
  }

  BigReal derivative(const BigReal& x) const {
    if (!in_domain(x)) throw DomainError("derivative: x = " + x.to_string(20) + " outside the domain");
    if (x.is_zero()) throw NotDifferentiableError("derivative: f is not differentiable at the turning point 0");
    if (x.sign() < 0) return tsl_;
    return -(tsr_ * beta_ * pow_real(x.with_precision(bits_), beta_ - 1L));
  }

  /// Derivative of the chosen branch; branch 1 is affine on its whole domain.
  BigReal derivative_branch(int branch, const BigReal& x) const {
    if (branch == 1) return tsl_;
    if (x.is_zero()) return BigReal(bits_);
    return -(tsr_ * beta_ * pow_real(x.with_precision(bits_), beta_ - 1L));
  }

  static std::uint8_t letter(const BigReal& x) { return x.sign() < 0 ? 1 : 2; }

  Orbit iterate(const BigReal& x, long n) const {
    if (n < 0) throw DomainError("iterate: n must be >= 0");
    if (!in_domain(x)) throw DomainError("iterate: x = " + x.to_string(20) + " outside the domain");
    Orbit o;
    o.points.reserve(static_cast<std::size_t>(n) + 1);
    o.word.reserve(static_cast<std::size_t>(n));
    BigReal cur = x.with_precision(bits_), tmp(bits_);
    for (long j = 0; j < n; ++j) {
      o.points.push_back(cur);
      o.word.push_back(letter(cur));
      step(cur.raw(), tmp.raw());
    }
    o.points.push_back(std::move(cur));
    return o;
  }

  /// (f^n)'(x) by the chain rule.
  BigReal derivative_along_orbit(const BigReal& x, long n) const {
    if (!in_domain(x)) throw DomainError("derivative_along_orbit: x outside the domain");
    BigReal cur = x.with_precision(bits_), tmp(bits_), d(1L, bits_);
    for (long j = 0; j < n; ++j) {
      if (cur.is_zero())
        throw NotDifferentiableError("derivative_along_orbit: orbit hits 0 at step " + std::to_string(j));
      d *= derivative(cur);
      step(cur.raw(), tmp.raw());
    }
    return d;
  }

 private:
  void power(mpfr_ptr out, mpfr_srcptr x) const {
    if (mpfr_zero_p(x)) {
      mpfr_set_zero(out, 1);
    } else if (beta_int_ == 2) {
      mpfr_sqr(out, x, MPFR_RNDN);
    } else if (beta_int_ > 0) {
      mpfr_pow_ui(out, x, beta_int_, MPFR_RNDN);
    } else {
      mpfr_pow(out, x, beta_.raw(), MPFR_RNDN);
    }
  }

  mpfr_prec_t bits_;
  BigReal beta_, t_, sl_, sr_;
  BigReal a0_, b0_, t_max_, tm1_, tsl_, tsr_, eps0_, k0_;
  unsigned long beta_int_ = 0;
};

}  // namespace asymlab
