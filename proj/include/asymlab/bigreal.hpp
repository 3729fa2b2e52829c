#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdlib>
#include <string>
#include <string_view>
#include <utility>

#include "asymlab/errors.hpp"

namespace asymlab {

/// Arbitrary-precision binary floating point number backed by MPFR.
///
/// Every value carries its own precision in bits. Binary operations produce a
/// result at the larger of the two operand precisions, always rounded to
/// nearest. Operations with plain `long`/`double` operands keep the precision
/// of the BigReal operand. There is no reliance on MPFR's global default
/// precision, so values built on different threads never interfere.
class BigReal {
 public:
  static constexpr mpfr_prec_t kDefaultBits = 64;

  BigReal() : BigReal(kDefaultBits) {}

  explicit BigReal(mpfr_prec_t bits) {
    mpfr_init2(v_, clamp_bits(bits));
    mpfr_set_zero(v_, 1);
  }

  BigReal(double value, mpfr_prec_t bits) {
    mpfr_init2(v_, clamp_bits(bits));
    mpfr_set_d(v_, value, MPFR_RNDN);
  }

  BigReal(long value, mpfr_prec_t bits) {
    mpfr_init2(v_, clamp_bits(bits));
    mpfr_set_si(v_, value, MPFR_RNDN);
  }

  BigReal(int value, mpfr_prec_t bits) : BigReal(static_cast<long>(value), bits) {}

  /// Parses a decimal string ("0.25", "-1.5e-300", "2").
  BigReal(std::string_view decimal, mpfr_prec_t bits) {
    mpfr_init2(v_, clamp_bits(bits));
    std::string s(trim(decimal));
    char* end = nullptr;
    if (!s.empty()) mpfr_strtofr(v_, s.c_str(), &end, 10, MPFR_RNDN);
    if (s.empty() || end == nullptr || *end != '\0' || end == s.c_str()) {
      mpfr_clear(v_);
      throw DomainError("BigReal: cannot parse decimal string '" + std::string(decimal) + "'");
    }
  }

  BigReal(const BigReal& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }

  BigReal(BigReal&& other) noexcept {
    // Steal the limbs by swapping with a minimal placeholder.
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }

  BigReal& operator=(const BigReal& other) {
    if (this != &other) {
      mpfr_set_prec(v_, mpfr_get_prec(other.v_));
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }

  BigReal& operator=(BigReal&& other) noexcept {
    if (this != &other) mpfr_swap(v_, other.v_);
    return *this;
  }

  ~BigReal() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  /// Copy rounded (to nearest) to a different precision.
  BigReal with_precision(mpfr_prec_t bits) const {
    BigReal r(bits);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_integer() const { return mpfr_integer_p(v_) != 0; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Exponent e such that |x| = m * 2^e with m in [0.5, 1). Zero gives 0.
  long exponent() const { return is_zero() ? 0 : static_cast<long>(mpfr_get_exp(v_)); }

  /// Decimal digits needed for a lossless round trip at this precision.
  int round_trip_digits() const {
    return static_cast<int>(std::ceil(static_cast<double>(precision()) * 0.30102999566398120)) + 2;
  }

  /// Scientific decimal representation with `digits` significant digits;
  /// digits <= 0 selects round_trip_digits().
  std::string to_string(int digits = 0) const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    if (digits <= 0) digits = round_trip_digits();
    if (is_zero()) return "0";
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", digits - 1, v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  BigReal operator-() const {
    BigReal r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  BigReal& operator+=(const BigReal& o) { return inplace(o, mpfr_add); }
  BigReal& operator-=(const BigReal& o) { return inplace(o, mpfr_sub); }
  BigReal& operator*=(const BigReal& o) { return inplace(o, mpfr_mul); }
  BigReal& operator/=(const BigReal& o) { return inplace(o, mpfr_div); }

  friend BigReal operator+(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_add); }
  friend BigReal operator-(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_sub); }
  friend BigReal operator*(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_mul); }
  friend BigReal operator/(const BigReal& a, const BigReal& b) { return binary(a, b, mpfr_div); }

  friend BigReal operator+(const BigReal& a, long b) {
    BigReal r(a.precision());
    mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator+(long a, const BigReal& b) { return b + a; }
  friend BigReal operator-(const BigReal& a, long b) {
    BigReal r(a.precision());
    mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator-(long a, const BigReal& b) {
    BigReal r(b.precision());
    mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(const BigReal& a, long b) {
    BigReal r(a.precision());
    mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(long a, const BigReal& b) { return b * a; }
  friend BigReal operator/(const BigReal& a, long b) {
    BigReal r(a.precision());
    mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator/(long a, const BigReal& b) {
    BigReal r(b.precision());
    mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(const BigReal& a, double b) {
    BigReal r(a.precision());
    mpfr_mul_d(r.v_, a.v_, b, MPFR_RNDN);
    return r;
  }
  friend BigReal operator*(double a, const BigReal& b) { return b * a; }

  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
    if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
    int c = mpfr_cmp(a.v_, b.v_);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  friend bool operator==(const BigReal& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, long b) {
    int c = mpfr_cmp_si(a.v_, b);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }
  friend bool operator==(const BigReal& a, double b) { return mpfr_cmp_d(a.v_, b) == 0; }
  friend std::partial_ordering operator<=>(const BigReal& a, double b) {
    int c = mpfr_cmp_d(a.v_, b);
    return c < 0 ? std::partial_ordering::less
                 : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
  }

 private:
  template <class Op>
  static BigReal binary(const BigReal& a, const BigReal& b, Op op) {
    BigReal r(std::max(a.precision(), b.precision()));
    op(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  template <class Op>
  BigReal& inplace(const BigReal& o, Op op) {
    if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    op(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  static mpfr_prec_t clamp_bits(mpfr_prec_t bits) {
    return std::clamp<mpfr_prec_t>(bits, MPFR_PREC_MIN, MPFR_PREC_MAX);
  }

  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\n')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n')) s.remove_suffix(1);
    return s;
  }

  mpfr_t v_;
};

namespace detail {
template <class Op>
inline BigReal unary(const BigReal& x, Op op) {
  BigReal r(x.precision());
  op(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
}  // namespace detail

inline BigReal abs(const BigReal& x) { return detail::unary(x, mpfr_abs); }
inline BigReal sqrt(const BigReal& x) { return detail::unary(x, mpfr_sqrt); }
inline BigReal exp(const BigReal& x) { return detail::unary(x, mpfr_exp); }

inline BigReal log(const BigReal& x) {
  if (x.sign() <= 0) throw DomainError("log: argument must be positive, got " + x.to_string(20));
  return detail::unary(x, mpfr_log);
}

inline const BigReal& min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }
inline const BigReal& max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

/// x * 2^e, exact.
inline BigReal ldexp(const BigReal& x, long e) {
  BigReal r(x.precision());
  mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
  return r;
}

/// Unit in the last place of x at its own precision (for x = 0 the ulp of 1).
inline BigReal ulp(const BigReal& x) {
  BigReal one(1L, x.precision());
  long e = x.is_zero() ? one.exponent() : x.exponent();
  return ldexp(one, e - static_cast<long>(x.precision()));
}

/// Natural logarithm of 2 at the given precision.
inline BigReal ln2(mpfr_prec_t bits) {
  BigReal r(bits);
  mpfr_const_log2(r.raw(), MPFR_RNDN);
  return r;
}

/// x^beta for x >= 0 (the only transcendental the dynamics needs).
///
/// Evaluated by MPFR's correctly rounded power, i.e. exp(beta ln x) with a
/// final error of at most half an ulp, which makes the result monotone in x.
/// Integer exponents take the exact-power path. 0^beta = 0.
inline BigReal pow_real(const BigReal& x, const BigReal& beta) {
  if (x.sign() < 0) throw DomainError("pow_real: negative base " + x.to_string(20));
  BigReal r(std::max(x.precision(), beta.precision()));
  if (x.is_zero()) return r;
  if (beta.is_integer() && beta > 0L && beta < 1024L) {
    mpfr_pow_ui(r.raw(), x.raw(), mpfr_get_ui(beta.raw(), MPFR_RNDN), MPFR_RNDN);
  } else {
    mpfr_pow(r.raw(), x.raw(), beta.raw(), MPFR_RNDN);
  }
  return r;
}

/// Decimal string of x rounded to `digits` significant digits.
inline std::string to_decimal(const BigReal& x, int digits) { return x.to_string(digits); }

}  // namespace asymlab
