#pragma once

#include <utility>
#include <vector>

#include "gapdense/measure.hpp"
#include "gapdense/polynomial.hpp"

namespace gapdense {

// Element of H = L^2(mu) (+) R^{n+1}: a function paired with a jet of
// derivative values at 0.
struct SobolevVector {
  Evaluable f;
  std::vector<BigFloat> beta;
};

// (p, (p(0), p'(0), ..., p^{(n)}(0))), the derivatives read off the
// coefficients.
SobolevVector embed(const Polynomial& p, long n);

BigFloat sobolev_inner(const SobolevVector& u, const SobolevVector& v,
                       const Measure& mu, const PrecisionContext& ctx);

struct PenalizedFit {
  Polynomial p;
  BigFloat objective;  // ||g - p||^2 + sum_{i<=n} (p^{(i)}(0))^2
};

// Minimizes the squared H-distance from (g, 0) over polynomials of degree
// <= N: the Hankel Gram plus the diagonal derivative penalty (i!)^2 on the
// first n+1 coefficients.
PenalizedFit penalized_fit(const Evaluable& g, long n, long n_max,
                           const Measure& mu, const PrecisionContext& ctx);

// p = q + x^{n+1} r with deg(q) <= n; an exact coefficient split.
std::pair<Polynomial, Polynomial> split_gap(const Polynomial& p, long n);

struct DemoRow {
  long top_degree;       // N
  BigFloat objective;
  BigFloat q_norm;       // ||q_N||_{H_1}
  BigFloat gap_residual; // ||g - x^{n+1} r_N||_{H_1}
  BigFloat p_at_zero;
};

// For each N: penalized fit, gap split, and the triangle-inequality bound
// gap_residual <= sqrt(objective) + ||q_N|| (checked row-wise). Requires
// supp(mu) in [0, inf) with no atom at 0.
std::vector<DemoRow> maindense2_demo(const Evaluable& g, long n,
                                     const std::vector<long>& n_list,
                                     const Measure& mu,
                                     const PrecisionContext& ctx);

struct RatioTable {
  long k;
  std::vector<std::pair<long, BigFloat>> rows;  // (n, |gamma_{n,k}/gamma_{n,k+1}|)
  bool support_gap_warning;  // the support stays away from 0
};

RatioTable ratio_table(const Measure& mu, long k, const std::vector<long>& ns,
                       const PrecisionContext& ctx);

}  // namespace gapdense
