#pragma once

#include <vector>

#include "gapdense/bigfloat.hpp"

namespace gapdense {

// Monomial-basis polynomial with big-float coefficients c_0..c_d. The top
// coefficient is nonzero unless the polynomial is zero (exact zero tails are
// trimmed at construction). Horner evaluation is the canonical evaluation.
class Polynomial {
 public:
  Polynomial() = default;  // zero polynomial
  explicit Polynomial(std::vector<BigFloat> coeffs);

  static Polynomial constant(BigFloat value);
  static Polynomial monomial(long k, BigFloat coeff);

  bool is_zero() const { return coeffs_.empty(); }
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  // Coefficient value, zero outside the stored range.
  BigFloat coefficient(long k) const;
  const std::vector<BigFloat>& coeffs() const { return coeffs_; }

  BigFloat eval(const BigFloat& x, long prec) const;
  Polynomial derivative(long order = 1) const;
  // p^(j)(0) = j! * c_j
  BigFloat derivative_at_zero(long j, long prec) const;

  Polynomial times_x_power(long k) const;
  BigFloat max_abs_coeff(long prec) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const BigFloat& s);

 private:
  std::vector<BigFloat> coeffs_;
};

}  // namespace gapdense
