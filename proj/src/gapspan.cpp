#include "gapdense/gapspan.hpp"

#include <utility>

#include "gapdense/errors.hpp"
#include "gapdense/linalg.hpp"
#include "gapdense/weighted.hpp"

namespace gapdense {

Polynomial ApproximationReport::as_polynomial() const {
  Polynomial p;
  for (size_t i = 0; i < coeffs.size(); ++i) {
    p = p + Polynomial::monomial(gap + static_cast<long>(i), coeffs[i]);
  }
  return p;
}

namespace {

// <f, x^p> for p = j..N, followed by ||f||^2; one shared rule.
std::vector<BigFloat> f_moments_and_norm(const Evaluable& f, long j, long n_max,
                                         const Measure& mu,
                                         const PrecisionContext& ctx) {
  size_t dim = static_cast<size_t>(n_max - j + 1) + 1;
  return integrate_many(
      mu,
      [&](const BigFloat& x, long prec) {
        std::vector<BigFloat> out;
        out.reserve(dim);
        BigFloat fv = f(x, prec);
        BigFloat xp = pow_si(x.rounded_to(prec), j);
        for (long p = j; p <= n_max; ++p) {
          out.push_back(fv * xp);
          xp *= x;
        }
        out.push_back(fv * fv);
        return out;
      },
      dim, 2 * n_max + 2, ctx);
}

}  // namespace

ApproximationReport gap_project_normal(const Evaluable& f, long j, long n_max,
                                       const Measure& mu,
                                       const PrecisionContext& ctx) {
  if (j < 0 || j > n_max) throw DomainError("gap projection needs 0 <= j <= N");
  const long prec = ctx.mantissa_bits();
  const long size = n_max - j + 1;

  MomentSequence mom = moments(mu, 2 * n_max, ctx);
  Mat gram = hankel_matrix(mom.values, j, size, prec);

  std::vector<BigFloat> rhs_and_norm = f_moments_and_norm(f, j, n_max, mu, ctx);
  std::vector<BigFloat> rhs(rhs_and_norm.begin(), rhs_and_norm.end() - 1);
  BigFloat f_norm2 = rhs_and_norm.back();

  std::vector<BigFloat> c = spd_solve(gram, rhs, prec);

  BigFloat res2 = f_norm2;
  for (long i = 0; i < size; ++i) {
    res2 -= c[static_cast<size_t>(i)] * rhs[static_cast<size_t>(i)];
  }
  if (res2.sgn() < 0) res2 = BigFloat(prec);

  ApproximationReport rep;
  rep.gap = j;
  rep.top_degree = n_max;
  rep.coeffs = std::move(c);
  rep.method = ProjectionMethod::NormalEquations;
  rep.residual = sqrt(res2);

  // Re-verify by integrating the error directly.
  Polynomial approx = rep.as_polynomial();
  BigFloat res2_direct = integrate(
      mu,
      Evaluable{[&f, &approx](const BigFloat& x, long p) {
                  BigFloat e = f(x, p) - approx.eval(x, p);
                  return e * e;
                },
                {}},
      ctx);
  BigFloat slack =
      100 * ctx.rel_tol() * max(BigFloat::of_long(1, prec), f_norm2);
  if (abs(res2 - res2_direct) > slack) {
    throw PrecisionExhausted(
        "normal-equation residual disagrees with direct integration");
  }
  return rep;
}

ApproximationReport gap_project_weighted(const Evaluable& f, long j, long n_max,
                                         const Measure& mu,
                                         const PrecisionContext& ctx) {
  if (j < 0 || j > n_max) throw DomainError("gap projection needs 0 <= j <= N");
  const long prec = ctx.mantissa_bits();
  TFactor t("1", j, {});
  WeightedSystem ws = build_weighted_system(mu, t, n_max - j, ctx);
  QExpansion exp = expand_in_q(f, ws, n_max - j, ctx);

  // Monomial re-expansion: q_n = x^j p_{n,t} contributes to c_j..c_N only.
  Polynomial sum;
  for (long n = 0; n <= n_max - j; ++n) {
    sum = sum + ws.inner().poly(n) * exp.coeffs[static_cast<size_t>(n)];
  }
  Polynomial approx = sum.times_x_power(j);
  std::vector<BigFloat> coeffs;
  coeffs.reserve(static_cast<size_t>(n_max - j + 1));
  for (long p = j; p <= n_max; ++p) {
    coeffs.push_back(approx.coefficient(p).rounded_to(prec));
  }

  ApproximationReport rep;
  rep.gap = j;
  rep.top_degree = n_max;
  rep.coeffs = std::move(coeffs);
  rep.method = ProjectionMethod::WeightedQ;
  rep.residual = exp.residuals.back();
  return rep;
}

std::vector<ApproximationReport> convergence_table(
    const Evaluable& f, long j, const std::vector<long>& n_list,
    const Measure& mu, const PrecisionContext& ctx) {
  for (size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] <= n_list[i - 1]) {
      throw DomainError("convergence_table needs strictly increasing N values");
    }
  }
  std::vector<ApproximationReport> out;
  out.reserve(n_list.size());
  for (long n : n_list) {
    out.push_back(gap_project_normal(f, j, n, mu, ctx));
  }
  return out;
}

std::vector<BigFloat> muntz_partial_sums(const std::vector<BigFloat>& lambdas,
                                         long j_count) {
  if (j_count < 1 || static_cast<size_t>(j_count) > lambdas.size()) {
    throw DomainError("muntz_partial_sums needs 1 <= J <= #lambdas");
  }
  long prec = 64;
  for (const auto& l : lambdas) prec = std::max(prec, l.prec());
  BigFloat prev(prec);
  for (size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > BigFloat(prec)) || (i > 0 && !(lambdas[i] > prev))) {
      throw DomainError("lambdas must be positive and strictly increasing");
    }
    prev = lambdas[i];
  }
  std::vector<BigFloat> sums;
  sums.reserve(static_cast<size_t>(j_count));
  BigFloat acc(prec);
  for (long i = 0; i < j_count; ++i) {
    const BigFloat& l = lambdas[static_cast<size_t>(i)];
    acc += l / (l * l + 1);
    sums.push_back(acc);
  }
  return sums;
}

}  // namespace gapdense
