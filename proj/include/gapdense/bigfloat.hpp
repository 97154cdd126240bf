#pragma once

#include <mpfr.h>

#include <string>
#include <string_view>

namespace gapdense {

class Rational;

// Arbitrary-precision binary float. Every operation is correctly rounded
// (round to nearest even) at the precision of its destination, so any
// pipeline that fixes its precisions up front is bit-reproducible.
//
// Binary operators produce a result at the larger precision of the two
// operands; compound assignments round into the left operand's precision.
class BigFloat {
 public:
  BigFloat() {
    mpfr_init2(v_, kMinPrec);
    mpfr_set_nan(v_);
  }
  explicit BigFloat(long prec) {
    mpfr_init2(v_, clamp(prec));
    mpfr_set_zero(v_, 1);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, kMinPrec);
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o);
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat of_long(long v, long prec);
  static BigFloat of_double(double v, long prec);
  // Parses a decimal literal ("0.3", "-2e-5"). Throws ConfigError unless the
  // whole string is consumed.
  static BigFloat of_string(std::string_view text, long prec);
  static BigFloat of_rational(const Rational& q, long prec);
  static BigFloat two_pow(long e, long prec);  // exact 2^e
  static BigFloat factorial(unsigned long n, long prec);

  long prec() const { return mpfr_get_prec(v_); }
  BigFloat rounded_to(long prec) const;

  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sgn() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  BigFloat& operator+=(const BigFloat& o) {
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator-=(const BigFloat& o) {
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator*=(const BigFloat& o) {
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator/=(const BigFloat& o) {
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator+=(long o) {
    mpfr_add_si(v_, v_, o, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator-=(long o) {
    mpfr_sub_si(v_, v_, o, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator*=(long o) {
    mpfr_mul_si(v_, v_, o, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator/=(long o) {
    mpfr_div_si(v_, v_, o, MPFR_RNDN);
    return *this;
  }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a);

  friend BigFloat operator+(const BigFloat& a, long b);
  friend BigFloat operator-(const BigFloat& a, long b);
  friend BigFloat operator*(const BigFloat& a, long b);
  friend BigFloat operator/(const BigFloat& a, long b);
  friend BigFloat operator+(long a, const BigFloat& b);
  friend BigFloat operator-(long a, const BigFloat& b);
  friend BigFloat operator*(long a, const BigFloat& b);
  friend BigFloat operator/(long a, const BigFloat& b);

  friend bool operator==(const BigFloat& a, const BigFloat& b) {
    return mpfr_equal_p(a.v_, b.v_) != 0;
  }
  friend bool operator!=(const BigFloat& a, const BigFloat& b) {
    return !(a == b);
  }
  friend bool operator<(const BigFloat& a, const BigFloat& b) {
    return mpfr_less_p(a.v_, b.v_) != 0;
  }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) {
    return mpfr_lessequal_p(a.v_, b.v_) != 0;
  }
  friend bool operator>(const BigFloat& a, const BigFloat& b) {
    return mpfr_greater_p(a.v_, b.v_) != 0;
  }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) {
    return mpfr_greaterequal_p(a.v_, b.v_) != 0;
  }

  friend BigFloat sqrt(const BigFloat& a);
  friend BigFloat exp(const BigFloat& a);
  friend BigFloat abs(const BigFloat& a);
  friend BigFloat pow_si(const BigFloat& a, long e);
  friend BigFloat mul_2si(const BigFloat& a, long e);  // exact scaling by 2^e
  friend BigFloat max(const BigFloat& a, const BigFloat& b);
  friend BigFloat min(const BigFloat& a, const BigFloat& b);

  // Scientific notation with a fixed number of significant digits, e.g.
  // "-1.250000e-3". Deterministic for a given value.
  std::string to_scientific(long sig_digits) const;
  // Exact decimal expansion (every binary float has one). "0" for zero.
  std::string exact_decimal() const;

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  static constexpr long kMinPrec = 2;
  static long clamp(long p) { return p < kMinPrec ? kMinPrec : p; }
  mpfr_t v_;
};

}  // namespace gapdense
