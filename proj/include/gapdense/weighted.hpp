#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gapdense/measure.hpp"
#include "gapdense/orthopoly.hpp"
#include "gapdense/polynomial.hpp"

namespace gapdense {

// t(x) = c x^s prod_j (1 - x/x_j) kept in factored form: the t_k family and
// the t/t_k quotients are then exact list operations. Numeric fields are
// decimal strings, materialized at whatever precision a caller works at.
class TFactor {
 public:
  TFactor(std::string c_text, long s, std::vector<std::string> zero_texts);

  // "c,s,x1,x2,..." as used on the command line.
  static TFactor parse(std::string_view spec);

  const std::string& c_text() const { return c_text_; }
  long s() const { return s_; }
  long factor_count() const { return static_cast<long>(zeros_.size()); }
  long degree() const { return s_ + factor_count(); }
  const std::vector<std::string>& zero_texts() const { return zeros_; }

  BigFloat c(long prec) const;
  BigFloat zero(long i, long prec) const;  // 0-based
  BigFloat eval(const BigFloat& x, long prec) const;
  Polynomial as_polynomial(long prec) const;
  // Expression over the density grammar, with the original literals embedded.
  std::string expression_text() const;
  bool vanishes_at(const BigFloat& x, long prec) const;

 private:
  std::string c_text_;
  long s_;
  std::vector<std::string> zeros_;
};

// t_k: drops one power of x while k <= s, then peels leading linear factors.
TFactor t_family(const TFactor& t, long k);

// The exact polynomial quotient t / t_k, degree exactly k.
Polynomial t_over_tk(const TFactor& t, long k, long prec);

// Orthonormal system p_{n,t} for t^2 dmu together with the induced functions
// q_n = t * p_{n,t}, which are orthonormal for dmu itself.
class WeightedSystem {
 public:
  WeightedSystem(TFactor t, Measure base, Measure weighted,
                 OrthonormalSystem inner);

  const TFactor& t() const { return t_; }
  const Measure& base_measure() const { return base_; }
  const Measure& weighted_measure_used() const { return weighted_; }
  const OrthonormalSystem& inner() const { return inner_; }
  long max_index() const { return inner_.max_degree(); }

  BigFloat q_eval(long n, const BigFloat& x, long prec) const;
  Polynomial q_polynomial(long n, long prec) const;
  Evaluable q_evaluable(long n) const;

 private:
  TFactor t_;
  Measure base_;
  Measure weighted_;
  OrthonormalSystem inner_;
};

WeightedSystem build_weighted_system(const Measure& mu, const TFactor& t,
                                     long n_max, const PrecisionContext& ctx);

// | ||t f||^2_{H_1} - ||f||^2_{H_t} | for a polynomial f, the two sides
// integrated by structurally different routes.
BigFloat isometry_residual(const Polynomial& f, const TFactor& t,
                           const Measure& mu, const PrecisionContext& ctx);

struct QExpansion {
  std::vector<BigFloat> coeffs;     // <f, q_n> for n = 0..N
  std::vector<BigFloat> residuals;  // r_N = ||f - sum_{n<=N} <f,q_n> q_n||
};

QExpansion expand_in_q(const Evaluable& f, const WeightedSystem& ws, long n_max,
                       const PrecisionContext& ctx);

// mu = Lebesgue on [0,2] plus an atom of weight w at 1; t(x) = -(1 - x) has
// its zero exactly on the atom. The two functions below agree off the atom,
// so the H_t distance vanishes while multiplying by t separates them in H_1.
struct CounterexampleResult {
  BigFloat d_t;          // ||f_1 - f_2||_{H_t}, exactly zero
  BigFloat d_1;          // ||t f_1 - t f_2||_{H_1}
  BigFloat d1_squared;   // equals the atom weight exactly
  BigFloat atom_weight;  // w as materialized at the working precision
};

CounterexampleResult counterexample_demo(const std::string& w_text,
                                         const PrecisionContext& ctx);

}  // namespace gapdense
