#pragma once

#include <vector>

#include "gapdense/bigfloat.hpp"

namespace gapdense {

// Small dense symmetric systems only; everything here runs at an explicit
// precision and is deterministic.
using Mat = std::vector<std::vector<BigFloat>>;

Mat make_mat(long n, long prec);

// A[p][q] = moments[lo + p + lo + q], p, q in [0, size)
Mat hankel_matrix(const std::vector<BigFloat>& moments, long lo, long size,
                  long prec);

// Lower Cholesky factor. Throws PrecisionExhausted when a pivot is
// non-positive or non-finite.
Mat cholesky_lower(const Mat& a, long prec);

// Solves L y = b.
std::vector<BigFloat> forward_subst(const Mat& l, const std::vector<BigFloat>& b,
                                    long prec);
// Solves L^T x = y.
std::vector<BigFloat> backward_subst_transposed(const Mat& l,
                                                const std::vector<BigFloat>& y,
                                                long prec);

std::vector<BigFloat> spd_solve(const Mat& a, const std::vector<BigFloat>& b,
                                long prec);

// C = L^{-T}; upper triangular with positive diagonal.
Mat upper_inverse_transpose(const Mat& l, long prec);

}  // namespace gapdense
