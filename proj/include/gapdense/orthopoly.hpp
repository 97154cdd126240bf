#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gapdense/measure.hpp"
#include "gapdense/polynomial.hpp"
#include "gapdense/precision.hpp"

namespace gapdense {

// Orthonormal polynomials p_0..p_N for one measure, each of exact degree n
// with positive leading coefficient, together with the Jacobi recurrence
//   x p_n = b_{n+1} p_{n+1} + a_n p_n + b_n p_{n-1}.
// Immutable once built.
class OrthonormalSystem {
 public:
  OrthonormalSystem(std::vector<Polynomial> polys, std::vector<BigFloat> a,
                    std::vector<BigFloat> b, std::optional<Measure> measure,
                    long bits);

  long max_degree() const { return static_cast<long>(polys_.size()) - 1; }
  const Polynomial& poly(long n) const;
  // a_n for 0 <= n <= N-1
  BigFloat a(long n) const;
  // b_n for 1 <= n <= N (all positive)
  BigFloat b(long n) const;
  const std::vector<BigFloat>& recurrence_a() const { return a_; }
  const std::vector<BigFloat>& recurrence_b() const { return b_; }
  const std::optional<Measure>& source_measure() const { return measure_; }
  long bits() const { return bits_; }

 private:
  std::vector<Polynomial> polys_;
  std::vector<BigFloat> a_;  // a_0..a_{N-1}
  std::vector<BigFloat> b_;  // b_1..b_N
  std::optional<Measure> measure_;
  long bits_;
};

// Builds the system from raw moments (length >= 2N+1). The Hankel matrix is
// factorized at the context precision -- a lost pivot throws
// PrecisionExhausted -- and the inverse-transpose Cholesky coefficients are
// then polished against the moments as given, so passing moments carrying
// more precision than the context yields coefficients accurate to the last
// working bit.
OrthonormalSystem orthonormalize(const MomentSequence& mom, long n_max,
                                 const PrecisionContext& ctx);

// Canonical builder: computes moments from the measure (at an elevated
// internal precision for the polish step), then orthonormalizes.
OrthonormalSystem orthonormal_system(const Measure& mu, long n_max,
                                     const PrecisionContext& ctx);

// Recurrence coefficients by the Stieltjes procedure: direct integration
// against mu, independent of the moment-matrix factorization path. Returns
// (a_0..a_{N-1}, b_1..b_N).
std::pair<std::vector<BigFloat>, std::vector<BigFloat>> stieltjes_recurrence(
    const Measure& mu, long n_max, const PrecisionContext& ctx);

// Rebuilds p_0..p_N in the monomial basis from recurrence coefficients.
std::vector<Polynomial> polynomials_from_recurrence(
    const std::vector<BigFloat>& a, const std::vector<BigFloat>& b,
    const BigFloat& m0, long n_max, const PrecisionContext& ctx);

// The n zeros of p_n, sorted ascending: eigenvalues of the order-n Jacobi
// truncation, located by bisection with Sturm sign counts.
std::vector<BigFloat> zeros(const OrthonormalSystem& sys, long n,
                            const PrecisionContext& ctx);

// Zeros of the j-th derivative of p_n, bracketed by the zeros one derivative
// level down. j = 0 delegates to zeros().
std::vector<BigFloat> derivative_zeros(const OrthonormalSystem& sys, long n,
                                       long j, const PrecisionContext& ctx);

// |gamma_{n,k} / gamma_{n,k+1}| for the monomial coefficients of p_n.
BigFloat coefficient_ratio(const OrthonormalSystem& sys, long n, long k);

// Relative difference between p_n^{(j+1)}(0)/p_n^{(j)}(0) read off the
// coefficients and the sum over zeros of p_n^{(j)} of 1/(-zero).
BigFloat log_derivative_identity_residual(const OrthonormalSystem& sys, long n,
                                          long j, const PrecisionContext& ctx);

// K_N(x, y) = sum_{n<=N} p_n(x) p_n(y)
BigFloat christoffel_kernel(const OrthonormalSystem& sys, const BigFloat& x,
                            const BigFloat& y, long n_max);

}  // namespace gapdense
