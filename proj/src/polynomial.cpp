#include "gapdense/polynomial.hpp"

#include <algorithm>
#include <utility>

#include "gapdense/errors.hpp"

namespace gapdense {

namespace {

long coeff_prec(const std::vector<BigFloat>& c, long fallback = 64) {
  long p = 0;
  for (const auto& v : c) p = std::max(p, v.prec());
  return p > 0 ? p : fallback;
}

}  // namespace

Polynomial::Polynomial(std::vector<BigFloat> coeffs)
    : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  for (const auto& c : coeffs_) {
    if (c.is_nan()) throw DomainError("polynomial coefficient is NaN");
  }
}

Polynomial Polynomial::constant(BigFloat value) {
  std::vector<BigFloat> c;
  c.push_back(std::move(value));
  return Polynomial(std::move(c));
}

Polynomial Polynomial::monomial(long k, BigFloat coeff) {
  if (k < 0) throw DomainError("monomial with negative degree");
  std::vector<BigFloat> c(static_cast<size_t>(k), BigFloat(coeff.prec()));
  c.push_back(std::move(coeff));
  return Polynomial(std::move(c));
}

BigFloat Polynomial::coefficient(long k) const {
  if (k < 0 || k >= static_cast<long>(coeffs_.size())) {
    return BigFloat(coeff_prec(coeffs_));
  }
  return coeffs_[static_cast<size_t>(k)];
}

BigFloat Polynomial::eval(const BigFloat& x, long prec) const {
  BigFloat acc(prec);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

Polynomial Polynomial::derivative(long order) const {
  if (order < 0) throw DomainError("negative derivative order");
  std::vector<BigFloat> c = coeffs_;
  for (long pass = 0; pass < order; ++pass) {
    if (c.empty()) break;
    std::vector<BigFloat> d;
    d.reserve(c.size() - 1);
    for (size_t k = 1; k < c.size(); ++k) {
      d.push_back(c[k] * static_cast<long>(k));
    }
    c = std::move(d);
  }
  return Polynomial(std::move(c));
}

BigFloat Polynomial::derivative_at_zero(long j, long prec) const {
  if (j < 0) throw DomainError("negative derivative order");
  return coefficient(j).rounded_to(prec) * BigFloat::factorial(
                                               static_cast<unsigned long>(j),
                                               prec);
}

Polynomial Polynomial::times_x_power(long k) const {
  if (k < 0) throw DomainError("negative shift");
  if (is_zero()) return Polynomial();
  std::vector<BigFloat> c(static_cast<size_t>(k),
                          BigFloat(coeff_prec(coeffs_)));
  c.insert(c.end(), coeffs_.begin(), coeffs_.end());
  return Polynomial(std::move(c));
}

BigFloat Polynomial::max_abs_coeff(long prec) const {
  BigFloat m(prec);
  for (const auto& c : coeffs_) m = max(m, abs(c).rounded_to(prec));
  return m;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
  long prec = std::max(coeff_prec(a.coeffs_), coeff_prec(b.coeffs_));
  std::vector<BigFloat> c;
  c.reserve(n);
  for (size_t k = 0; k < n; ++k) {
    c.push_back(a.coefficient(static_cast<long>(k)).rounded_to(prec) +
                b.coefficient(static_cast<long>(k)).rounded_to(prec));
  }
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
  long prec = std::max(coeff_prec(a.coeffs_), coeff_prec(b.coeffs_));
  std::vector<BigFloat> c;
  c.reserve(n);
  for (size_t k = 0; k < n; ++k) {
    c.push_back(a.coefficient(static_cast<long>(k)).rounded_to(prec) -
                b.coefficient(static_cast<long>(k)).rounded_to(prec));
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  long prec = std::max(coeff_prec(a.coeffs_), coeff_prec(b.coeffs_));
  std::vector<BigFloat> c(a.coeffs_.size() + b.coeffs_.size() - 1,
                          BigFloat(prec));
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (size_t j = 0; j < b.coeffs_.size(); ++j) {
      c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const BigFloat& s) {
  std::vector<BigFloat> c;
  c.reserve(a.coeffs_.size());
  for (const auto& v : a.coeffs_) c.push_back(v * s);
  return Polynomial(std::move(c));
}

}  // namespace gapdense
