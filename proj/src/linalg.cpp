#include "gapdense/linalg.hpp"

#include "gapdense/errors.hpp"

namespace gapdense {

Mat make_mat(long n, long prec) {
  return Mat(static_cast<size_t>(n),
             std::vector<BigFloat>(static_cast<size_t>(n), BigFloat(prec)));
}

Mat hankel_matrix(const std::vector<BigFloat>& moments, long lo, long size,
                  long prec) {
  if (lo < 0 || size < 1) throw DomainError("bad Hankel block shape");
  if (static_cast<size_t>(2 * (lo + size - 1)) >= moments.size()) {
    throw DomainError("moment sequence too short for requested Hankel block");
  }
  Mat a = make_mat(size, prec);
  for (long p = 0; p < size; ++p) {
    for (long q = 0; q < size; ++q) {
      a[p][q] = moments[static_cast<size_t>(2 * lo + p + q)].rounded_to(prec);
    }
  }
  return a;
}

Mat cholesky_lower(const Mat& a, long prec) {
  long n = static_cast<long>(a.size());
  Mat l = make_mat(n, prec);
  for (long j = 0; j < n; ++j) {
    BigFloat d = a[j][j].rounded_to(prec);
    for (long k = 0; k < j; ++k) d -= l[j][k] * l[j][k];
    if (!d.is_finite() || d.sgn() <= 0) {
      throw PrecisionExhausted(
          "Cholesky pivot lost at row " + std::to_string(j) +
          "; raise the working precision");
    }
    l[j][j] = sqrt(d);
    for (long i = j + 1; i < n; ++i) {
      BigFloat s = a[i][j].rounded_to(prec);
      for (long k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      l[i][j] = s / l[j][j];
    }
  }
  return l;
}

std::vector<BigFloat> forward_subst(const Mat& l, const std::vector<BigFloat>& b,
                                    long prec) {
  long n = static_cast<long>(l.size());
  std::vector<BigFloat> y(static_cast<size_t>(n), BigFloat(prec));
  for (long i = 0; i < n; ++i) {
    BigFloat s = b[static_cast<size_t>(i)].rounded_to(prec);
    for (long k = 0; k < i; ++k) s -= l[i][k] * y[static_cast<size_t>(k)];
    y[static_cast<size_t>(i)] = s / l[i][i];
  }
  return y;
}

std::vector<BigFloat> backward_subst_transposed(const Mat& l,
                                                const std::vector<BigFloat>& y,
                                                long prec) {
  long n = static_cast<long>(l.size());
  std::vector<BigFloat> x(static_cast<size_t>(n), BigFloat(prec));
  for (long i = n - 1; i >= 0; --i) {
    BigFloat s = y[static_cast<size_t>(i)].rounded_to(prec);
    for (long k = i + 1; k < n; ++k) s -= l[k][i] * x[static_cast<size_t>(k)];
    x[static_cast<size_t>(i)] = s / l[i][i];
  }
  return x;
}

std::vector<BigFloat> spd_solve(const Mat& a, const std::vector<BigFloat>& b,
                                long prec) {
  Mat l = cholesky_lower(a, prec);
  return backward_subst_transposed(l, forward_subst(l, b, prec), prec);
}

Mat upper_inverse_transpose(const Mat& l, long prec) {
  long n = static_cast<long>(l.size());
  Mat c = make_mat(n, prec);
  for (long col = 0; col < n; ++col) {
    // Solve L^T v = e_col; v vanishes above index... entries beyond col are 0.
    c[col][col] = BigFloat::of_long(1, prec) / l[col][col];
    for (long i = col - 1; i >= 0; --i) {
      BigFloat s(prec);
      for (long k = i + 1; k <= col; ++k) s -= l[k][i] * c[k][col];
      c[i][col] = s / l[i][i];
    }
  }
  return c;
}

}  // namespace gapdense
