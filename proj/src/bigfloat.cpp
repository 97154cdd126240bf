#include "gapdense/bigfloat.hpp"

#include <gmp.h>

#include <algorithm>
#include <cstdlib>

#include "gapdense/errors.hpp"
#include "gapdense/rational.hpp"

namespace gapdense {

namespace {

long result_prec(const BigFloat& a, const BigFloat& b) {
  return std::max(a.prec(), b.prec());
}

}  // namespace

BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this != &o) {
    mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat BigFloat::of_long(long v, long prec) {
  BigFloat r(prec);
  mpfr_set_si(r.v_, v, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::of_double(double v, long prec) {
  BigFloat r(prec);
  mpfr_set_d(r.v_, v, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::of_string(std::string_view text, long prec) {
  std::string s(text);
  if (s.empty()) throw ConfigError("empty numeric literal");
  BigFloat r(prec);
  char* end = nullptr;
  mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end != s.c_str() + s.size()) {
    throw ConfigError("invalid numeric literal '" + s + "'");
  }
  return r;
}

BigFloat BigFloat::of_rational(const Rational& q, long prec) {
  BigFloat r(prec);
  mpfr_set_q(r.v_, q.raw(), MPFR_RNDN);
  return r;
}

BigFloat BigFloat::two_pow(long e, long prec) {
  BigFloat r(prec);
  mpfr_set_si(r.v_, 1, MPFR_RNDN);
  mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::factorial(unsigned long n, long prec) {
  BigFloat r(prec);
  mpfr_fac_ui(r.v_, n, MPFR_RNDN);
  return r;
}

BigFloat BigFloat::rounded_to(long prec) const {
  BigFloat r(prec);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
  BigFloat r(result_prec(a, b));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigFloat operator-(const BigFloat& a, const BigFloat& b) {
  BigFloat r(result_prec(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigFloat operator*(const BigFloat& a, const BigFloat& b) {
  BigFloat r(result_prec(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigFloat operator/(const BigFloat& a, const BigFloat& b) {
  BigFloat r(result_prec(a, b));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigFloat operator-(const BigFloat& a) {
  BigFloat r(a.prec());
  mpfr_neg(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigFloat operator+(const BigFloat& a, long b) {
  BigFloat r(a.prec());
  mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigFloat operator-(const BigFloat& a, long b) {
  BigFloat r(a.prec());
  mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigFloat operator*(const BigFloat& a, long b) {
  BigFloat r(a.prec());
  mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigFloat operator/(const BigFloat& a, long b) {
  BigFloat r(a.prec());
  mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigFloat operator+(long a, const BigFloat& b) { return b + a; }

BigFloat operator-(long a, const BigFloat& b) {
  BigFloat r(b.prec());
  mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}

BigFloat operator*(long a, const BigFloat& b) { return b * a; }

BigFloat operator/(long a, const BigFloat& b) {
  BigFloat r(b.prec());
  mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}

BigFloat sqrt(const BigFloat& a) {
  BigFloat r(a.prec());
  mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigFloat exp(const BigFloat& a) {
  BigFloat r(a.prec());
  mpfr_exp(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigFloat abs(const BigFloat& a) {
  BigFloat r(a.prec());
  mpfr_abs(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigFloat pow_si(const BigFloat& a, long e) {
  BigFloat r(a.prec());
  mpfr_pow_si(r.v_, a.v_, e, MPFR_RNDN);
  return r;
}

BigFloat mul_2si(const BigFloat& a, long e) {
  BigFloat r(a.prec());
  mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN);
  return r;
}

BigFloat max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }

BigFloat min(const BigFloat& a, const BigFloat& b) { return b < a ? b : a; }

std::string BigFloat::to_scientific(long sig_digits) const {
  if (is_nan()) return "nan";
  if (!is_finite()) return sgn() < 0 ? "-inf" : "inf";
  if (is_zero()) return "0";
  if (sig_digits < 2) sig_digits = 2;
  mpfr_exp_t e = 0;
  char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(sig_digits), v_,
                         MPFR_RNDN);
  std::string digits(s);
  mpfr_free_str(s);
  bool neg = !digits.empty() && digits[0] == '-';
  if (neg) digits.erase(0, 1);
  // digits encode 0.ddd... * 10^e
  std::string out = digits.substr(0, 1) + "." + digits.substr(1) + "e" +
                    std::to_string(static_cast<long>(e) - 1);
  return neg ? "-" + out : out;
}

std::string BigFloat::exact_decimal() const {
  if (!is_finite()) throw DomainError("exact_decimal on non-finite value");
  if (is_zero()) return "0";
  mpz_t z;
  mpz_init(z);
  mpfr_exp_t e = mpfr_get_z_2exp(z, v_);  // value = z * 2^e
  bool neg = mpz_sgn(z) < 0;
  if (neg) mpz_neg(z, z);
  std::string out;
  if (e >= 0) {
    mpz_mul_2exp(z, z, static_cast<mp_bitcnt_t>(e));
    char* s = mpz_get_str(nullptr, 10, z);
    out = s;
    std::free(s);
  } else {
    unsigned long k = static_cast<unsigned long>(-e);
    mpz_t p5;
    mpz_init(p5);
    mpz_ui_pow_ui(p5, 5, k);
    mpz_mul(z, z, p5);
    mpz_clear(p5);
    char* s = mpz_get_str(nullptr, 10, z);
    std::string digits(s);
    std::free(s);
    if (digits.size() <= k) digits.insert(0, k + 1 - digits.size(), '0');
    digits.insert(digits.size() - k, ".");
    while (digits.back() == '0') digits.pop_back();
    if (digits.back() == '.') digits.pop_back();
    out = digits;
  }
  mpz_clear(z);
  return neg ? "-" + out : out;
}

}  // namespace gapdense
