#pragma once

#include <vector>

#include "gapdense/measure.hpp"
#include "gapdense/polynomial.hpp"

namespace gapdense {

enum class ProjectionMethod { NormalEquations, WeightedQ };

// Best L^2(mu) approximation of f from span{x^j, ..., x^N}.
struct ApproximationReport {
  long gap = 0;         // j, the lowest retained exponent
  long top_degree = 0;  // N
  std::vector<BigFloat> coeffs;  // c_j..c_N
  BigFloat residual;
  ProjectionMethod method = ProjectionMethod::NormalEquations;

  Polynomial as_polynomial() const;
};

// Normal equations with the shifted Hankel Gram matrix (m_{p+q})_{p,q>=j}.
// The residual from the quadratic form is cross-checked against a direct
// integration of the error; disagreement beyond tolerance means the working
// precision did not suffice.
ApproximationReport gap_project_normal(const Evaluable& f, long j, long n_max,
                                       const Measure& mu,
                                       const PrecisionContext& ctx);

// Projection onto span{q_{0,t}, ..., q_{N-j,t}} with t = x^j, re-expanded in
// the monomial basis. Requires mu({0}) = 0 when j >= 1.
ApproximationReport gap_project_weighted(const Evaluable& f, long j, long n_max,
                                         const Measure& mu,
                                         const PrecisionContext& ctx);

std::vector<ApproximationReport> convergence_table(
    const Evaluable& f, long j, const std::vector<long>& n_list,
    const Measure& mu, const PrecisionContext& ctx);

// Partial sums S_i = sum_{j<=i} lambda_j / (lambda_j^2 + 1). Diagnostic
// only; no density verdict is derivable from finitely many terms.
std::vector<BigFloat> muntz_partial_sums(const std::vector<BigFloat>& lambdas,
                                         long j_count);

}  // namespace gapdense
