#include "gapdense/rational.hpp"

#include <cctype>
#include <cstdlib>

#include "gapdense/bigfloat.hpp"
#include "gapdense/errors.hpp"

namespace gapdense {

Rational::Rational(long num, long den) {
  mpq_init(v_);
  if (den == 0) throw DomainError("rational with zero denominator");
  mpq_set_si(v_, num, 1);
  Rational d;
  mpq_set_si(d.v_, den, 1);
  mpq_div(v_, v_, d.v_);
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw DomainError("rational division by zero");
  mpq_div(v_, v_, o.v_);
  return *this;
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw DomainError("rational division by zero");
  Rational r;
  mpq_div(r.v_, a.v_, b.v_);
  return r;
}

Rational Rational::of_string(std::string_view text) {
  std::string s(text);
  Rational r;
  if (s.empty() || mpq_set_str(r.v_, s.c_str(), 10) != 0) {
    throw ConfigError("invalid rational literal '" + s + "'");
  }
  if (mpz_sgn(mpq_denref(r.v_)) == 0) {
    throw DomainError("rational with zero denominator");
  }
  mpq_canonicalize(r.v_);
  return r;
}

Rational Rational::of_decimal(std::string_view text) {
  // [+-]? digits [ '.' digits ] [ (e|E) [+-]? digits ]
  std::string s(text);
  size_t i = 0;
  auto fail = [&]() -> Rational {
    throw ConfigError("invalid decimal literal '" + s + "'");
  };
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  std::string digits;
  size_t int_len = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    digits += s[i++];
  }
  int_len = digits.size();
  if (int_len == 0) return fail();
  long frac_len = 0;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i++];
      ++frac_len;
    }
    if (frac_len == 0) return fail();
  }
  long exp10 = 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = s[i++] == '-';
    std::string edig;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      edig += s[i++];
    }
    if (edig.empty() || edig.size() > 9) return fail();
    exp10 = std::atol(edig.c_str());
    if (eneg) exp10 = -exp10;
  }
  if (i != s.size()) return fail();

  Rational r;
  mpz_set_str(mpq_numref(r.v_), digits.c_str(), 10);
  long scale = exp10 - frac_len;
  mpz_t p10;
  mpz_init(p10);
  mpz_ui_pow_ui(p10, 10,
                static_cast<unsigned long>(scale >= 0 ? scale : -scale));
  if (scale >= 0) {
    mpz_mul(mpq_numref(r.v_), mpq_numref(r.v_), p10);
  } else {
    mpz_set(mpq_denref(r.v_), p10);
  }
  mpz_clear(p10);
  mpq_canonicalize(r.v_);
  if (neg) mpq_neg(r.v_, r.v_);
  return r;
}

Rational Rational::abs() const {
  Rational r;
  mpq_abs(r.v_, v_);
  return r;
}

std::string Rational::to_string() const {
  char* s = mpq_get_str(nullptr, 10, v_);
  std::string out(s);
  std::free(s);
  return out;
}

BigFloat Rational::to_bigfloat(long prec) const {
  return BigFloat::of_rational(*this, prec);
}

}  // namespace gapdense
