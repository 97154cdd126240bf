#include "gapdense/orthopoly.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "gapdense/errors.hpp"
#include "gapdense/linalg.hpp"

namespace gapdense {

OrthonormalSystem::OrthonormalSystem(std::vector<Polynomial> polys,
                                     std::vector<BigFloat> a,
                                     std::vector<BigFloat> b,
                                     std::optional<Measure> measure, long bits)
    : polys_(std::move(polys)),
      a_(std::move(a)),
      b_(std::move(b)),
      measure_(std::move(measure)),
      bits_(bits) {
  if (polys_.empty()) throw DomainError("empty orthonormal system");
  for (size_t n = 0; n < polys_.size(); ++n) {
    if (polys_[n].degree() != static_cast<long>(n)) {
      throw DomainError("orthonormal polynomial of wrong degree");
    }
    if (polys_[n].coefficient(static_cast<long>(n)).sgn() <= 0) {
      throw DomainError("leading coefficients must be positive");
    }
  }
  for (const auto& bn : b_) {
    if (!(bn > BigFloat(bits_))) {
      throw PrecisionExhausted("non-positive off-diagonal recurrence entry");
    }
  }
}

const Polynomial& OrthonormalSystem::poly(long n) const {
  if (n < 0 || n > max_degree()) throw DomainError("polynomial index out of range");
  return polys_[static_cast<size_t>(n)];
}

BigFloat OrthonormalSystem::a(long n) const {
  if (n < 0 || n >= static_cast<long>(a_.size())) {
    throw DomainError("recurrence index out of range");
  }
  return a_[static_cast<size_t>(n)];
}

BigFloat OrthonormalSystem::b(long n) const {
  if (n < 1 || n > static_cast<long>(b_.size())) {
    throw DomainError("recurrence index out of range");
  }
  return b_[static_cast<size_t>(n - 1)];
}

namespace {

// One re-orthonormalization sweep: with G = C^T H C = I + D for small D,
// replacing C by C chol(G)^{-T} squares the defect. Residual Grams are
// evaluated at the (elevated) precision of H.
void polish_coefficients(Mat& c, const Mat& h, long sp, long work_bits) {
  const long n = static_cast<long>(c.size());
  BigFloat target = BigFloat::two_pow(-(work_bits + work_bits / 2), sp);
  BigFloat prev_defect(sp);
  for (int sweep = 0; sweep < 4; ++sweep) {
    // G = C^T H C; C is upper triangular, so column j of C ends at row j.
    Mat hc = make_mat(n, sp);
    for (long i = 0; i < n; ++i) {
      for (long j = 0; j < n; ++j) {
        BigFloat s(sp);
        for (long k = 0; k <= j; ++k) s += h[i][k] * c[k][j];
        hc[i][j] = s;
      }
    }
    Mat g = make_mat(n, sp);
    BigFloat defect(sp);
    for (long i = 0; i < n; ++i) {
      for (long j = 0; j < n; ++j) {
        BigFloat s(sp);
        for (long k = 0; k <= i; ++k) s += c[k][i] * hc[k][j];
        g[i][j] = s;
        BigFloat dev = abs(i == j ? s - 1 : s);
        if (!dev.is_finite()) {
          throw PrecisionExhausted("orthonormality polish diverged");
        }
        defect = max(defect, dev);
      }
    }
    if (defect <= target) return;
    if (sweep > 0 && defect >= prev_defect) return;  // rounding floor
    prev_defect = defect;
    Mat s = cholesky_lower(g, sp);
    // C <- C S^{-T}: solve S y = row^T for every row.
    for (long i = 0; i < n; ++i) {
      std::vector<BigFloat> row(static_cast<size_t>(n), BigFloat(sp));
      for (long k = 0; k < n; ++k) row[static_cast<size_t>(k)] = c[i][k];
      std::vector<BigFloat> y = forward_subst(s, row, sp);
      for (long k = 0; k < n; ++k) c[i][k] = y[static_cast<size_t>(k)];
    }
  }
}

}  // namespace

OrthonormalSystem orthonormalize(const MomentSequence& mom, long n_max,
                                 const PrecisionContext& ctx) {
  if (n_max < 0) throw DomainError("orthonormalize needs n_max >= 0");
  if (mom.values.size() < static_cast<size_t>(2 * n_max + 1)) {
    throw DomainError("moment sequence too short: need 2*n_max + 1 values");
  }
  const long wb = ctx.mantissa_bits();
  const long size = n_max + 1;

  // Gate: factorize at the working precision exactly. This is where an
  // under-provisioned context fails.
  Mat h_work = hankel_matrix(mom.values, 0, size, wb);
  Mat l = cholesky_lower(h_work, wb);
  Mat c = upper_inverse_transpose(l, wb);

  // Polish against the moments as given.
  long mom_prec = 0;
  for (const auto& v : mom.values) mom_prec = std::max(mom_prec, v.prec());
  long sp = std::max(2 * wb + (51 * n_max + 9) / 10 + 64, mom_prec);
  Mat h_s = hankel_matrix(mom.values, 0, size, sp);
  Mat c_s = make_mat(size, sp);
  for (long i = 0; i < size; ++i) {
    for (long j = 0; j < size; ++j) c_s[i][j] = c[i][j].rounded_to(sp);
  }
  polish_coefficients(c_s, h_s, sp, wb);

  std::vector<Polynomial> polys;
  polys.reserve(static_cast<size_t>(size));
  for (long n = 0; n < size; ++n) {
    std::vector<BigFloat> coeffs;
    coeffs.reserve(static_cast<size_t>(n + 1));
    for (long i = 0; i <= n; ++i) coeffs.push_back(c_s[i][n].rounded_to(wb));
    if (coeffs.back().sgn() < 0) {
      for (auto& v : coeffs) v = -v;
    }
    polys.emplace_back(std::move(coeffs));
  }

  // Recurrence from coefficient ratios:
  //   b_{n+1} = gamma_{n,n} / gamma_{n+1,n+1}
  //   a_n = gamma_{n,n-1}/gamma_{n,n} - gamma_{n+1,n}/gamma_{n+1,n+1}
  std::vector<BigFloat> a, b;
  for (long n = 0; n + 1 <= n_max; ++n) {
    BigFloat lead_n = polys[static_cast<size_t>(n)].coefficient(n);
    BigFloat lead_n1 = polys[static_cast<size_t>(n + 1)].coefficient(n + 1);
    BigFloat sub_n = polys[static_cast<size_t>(n)].coefficient(n - 1);
    BigFloat sub_n1 = polys[static_cast<size_t>(n + 1)].coefficient(n);
    a.push_back((sub_n / lead_n - sub_n1 / lead_n1).rounded_to(wb));
    b.push_back((lead_n / lead_n1).rounded_to(wb));
  }
  return OrthonormalSystem(std::move(polys), std::move(a), std::move(b),
                           std::nullopt, wb);
}

OrthonormalSystem orthonormal_system(const Measure& mu, long n_max,
                                     const PrecisionContext& ctx) {
  PrecisionContext sctx = scratch_context(ctx, n_max);
  MomentSequence mom = moments(mu, 2 * n_max, sctx);
  OrthonormalSystem sys = orthonormalize(mom, n_max, ctx);
  std::vector<Polynomial> polys;
  polys.reserve(static_cast<size_t>(sys.max_degree() + 1));
  for (long n = 0; n <= sys.max_degree(); ++n) polys.push_back(sys.poly(n));
  return OrthonormalSystem(std::move(polys), sys.recurrence_a(),
                           sys.recurrence_b(), mu, ctx.mantissa_bits());
}

std::pair<std::vector<BigFloat>, std::vector<BigFloat>> stieltjes_recurrence(
    const Measure& mu, long n_max, const PrecisionContext& ctx) {
  if (n_max < 1) throw DomainError("stieltjes_recurrence needs n_max >= 1");
  const long prec = ctx.mantissa_bits();

  // Assemble one node set: quadrature nodes (weights carry the density) plus
  // the atoms.
  std::vector<BigFloat> xs, ws;
  if (mu.continuous()) {
    QuadratureRule rule =
        build_quadrature(mu.lower(prec), mu.upper(prec),
                         mu.continuous()->density, ctx, 2 * n_max + 2);
    xs = rule.nodes;
    ws = rule.weights;
  }
  for (size_t i = 0; i < mu.atoms().size(); ++i) {
    xs.push_back(mu.atom_location(i, prec));
    ws.push_back(mu.atom_weight(i, prec));
  }
  const size_t m = xs.size();
  auto dot = [&](const std::vector<BigFloat>& u,
                 const std::vector<BigFloat>& v) {
    BigFloat s(prec);
    for (size_t i = 0; i < m; ++i) s += ws[i] * u[i] * v[i];
    return s;
  };

  BigFloat m0(prec);
  for (const auto& w : ws) m0 += w;
  if (!(m0 > BigFloat(prec))) throw QuadratureError("measure has no mass");

  std::vector<BigFloat> a, b;
  std::vector<BigFloat> p_prev(m, BigFloat(prec));
  std::vector<BigFloat> p_cur(m, BigFloat::of_long(1, prec) / sqrt(m0));
  std::vector<BigFloat> xp(m, BigFloat(prec));
  for (long n = 0; n < n_max; ++n) {
    for (size_t i = 0; i < m; ++i) xp[i] = xs[i] * p_cur[i];
    BigFloat an = dot(xp, p_cur);
    a.push_back(an);
    std::vector<BigFloat> t(m, BigFloat(prec));
    for (size_t i = 0; i < m; ++i) {
      t[i] = xp[i] - an * p_cur[i];
      if (n > 0) t[i] -= b.back() * p_prev[i];
    }
    BigFloat norm2 = dot(t, t);
    if (!norm2.is_finite() || norm2.sgn() <= 0) {
      throw PrecisionExhausted(
          "Stieltjes norm vanished at step " + std::to_string(n + 1));
    }
    BigFloat bn = sqrt(norm2);
    b.push_back(bn);
    p_prev = p_cur;
    for (size_t i = 0; i < m; ++i) p_cur[i] = t[i] / bn;
  }
  return {std::move(a), std::move(b)};
}

std::vector<Polynomial> polynomials_from_recurrence(
    const std::vector<BigFloat>& a, const std::vector<BigFloat>& b,
    const BigFloat& m0, long n_max, const PrecisionContext& ctx) {
  const long prec = ctx.mantissa_bits();
  std::vector<Polynomial> p;
  p.push_back(Polynomial::constant(BigFloat::of_long(1, prec) / sqrt(m0)));
  if (n_max == 0) return p;
  for (long n = 0; n < n_max; ++n) {
    // p_{n+1} = ((x - a_n) p_n - b_n p_{n-1}) / b_{n+1}
    Polynomial t = p.back().times_x_power(1) -
                   p.back() * a[static_cast<size_t>(n)];
    if (n > 0) {
      t = t - p[static_cast<size_t>(n - 1)] * b[static_cast<size_t>(n - 1)];
    }
    p.push_back(t * (BigFloat::of_long(1, prec) / b[static_cast<size_t>(n)]));
  }
  return p;
}

namespace {

// Number of eigenvalues of the order-n Jacobi truncation strictly below
// lambda, via the LDL^T sign count.
long sturm_count(const OrthonormalSystem& sys, long n, const BigFloat& lambda,
                 long prec) {
  long count = 0;
  BigFloat d(prec);
  // An exact-zero pivot means lambda hits an eigenvalue of a leading minor;
  // counting it as negative keeps the bisection brackets consistent.
  BigFloat tiny = BigFloat::two_pow(-2 * prec, prec) *
                  max(BigFloat::of_long(1, prec), abs(lambda));
  for (long k = 0; k < n; ++k) {
    BigFloat dk = sys.a(k).rounded_to(prec) - lambda;
    if (k > 0) dk -= sys.b(k) * sys.b(k) / d;
    if (dk.is_zero()) dk = -tiny;
    if (dk.sgn() < 0) ++count;
    d = dk;
  }
  return count;
}

std::vector<BigFloat> poly_roots_bracketed(const Polynomial& p,
                                           const std::vector<BigFloat>& brackets,
                                           long prec) {
  // Each consecutive bracket pair encloses exactly one simple root.
  std::vector<BigFloat> roots;
  BigFloat stop_scale = BigFloat::two_pow(-(prec - 16), prec);
  for (size_t i = 0; i + 1 < brackets.size(); ++i) {
    BigFloat lo = brackets[i], hi = brackets[i + 1];
    int sl = p.eval(lo, prec).sgn();
    int sh = p.eval(hi, prec).sgn();
    if (sl == 0) {
      roots.push_back(lo);
      continue;
    }
    if (sh == 0) {
      roots.push_back(hi);
      continue;
    }
    if (sl == sh) {
      throw BracketingError("derivative root bracket has equal endpoint signs");
    }
    BigFloat width = hi - lo;
    BigFloat stop = stop_scale * max(BigFloat::of_long(1, prec),
                                     max(abs(lo), abs(hi)));
    while (width > stop) {
      BigFloat mid = (lo + hi) / 2;
      int sm = p.eval(mid, prec).sgn();
      if (sm == 0) {
        lo = mid;
        hi = mid;
        break;
      }
      if (sm == sl) {
        lo = mid;
      } else {
        hi = mid;
      }
      width = hi - lo;
    }
    roots.push_back((lo + hi) / 2);
  }
  return roots;
}

}  // namespace

std::vector<BigFloat> zeros(const OrthonormalSystem& sys, long n,
                            const PrecisionContext& ctx) {
  if (n < 1 || n > sys.max_degree()) {
    throw DomainError("zeros: n out of range");
  }
  const long prec = ctx.mantissa_bits();
  // Gershgorin bounds for the order-n truncation.
  BigFloat lo(prec), hi(prec);
  for (long k = 0; k < n; ++k) {
    BigFloat r(prec);
    if (k >= 1) r += sys.b(k);
    if (k + 1 <= n - 1) r += sys.b(k + 1);
    BigFloat ak = sys.a(k).rounded_to(prec);
    BigFloat l = ak - r, h = ak + r;
    if (k == 0 || l < lo) lo = l;
    if (k == 0 || h > hi) hi = h;
  }
  lo -= 1;
  hi += 1;

  BigFloat stop_scale = BigFloat::two_pow(-(prec - 8), prec);
  std::vector<BigFloat> out;
  out.reserve(static_cast<size_t>(n));
  for (long idx = 1; idx <= n; ++idx) {
    BigFloat a = lo, b = hi;
    BigFloat stop =
        stop_scale * max(BigFloat::of_long(1, prec), max(abs(lo), abs(hi)));
    while (b - a > stop) {
      BigFloat mid = (a + b) / 2;
      if (sturm_count(sys, n, mid, prec) >= idx) {
        b = mid;
      } else {
        a = mid;
      }
    }
    out.push_back((a + b) / 2);
  }
  return out;
}

std::vector<BigFloat> derivative_zeros(const OrthonormalSystem& sys, long n,
                                       long j, const PrecisionContext& ctx) {
  if (j < 0 || j >= n) throw DomainError("derivative_zeros: need 0 <= j < n");
  std::vector<BigFloat> level = zeros(sys, n, ctx);
  Polynomial d = sys.poly(n);
  for (long lvl = 1; lvl <= j; ++lvl) {
    d = d.derivative();
    level = poly_roots_bracketed(d, level, ctx.mantissa_bits());
  }
  return level;
}

BigFloat coefficient_ratio(const OrthonormalSystem& sys, long n, long k) {
  if (k < 0 || k + 1 > n || n > sys.max_degree()) {
    throw DomainError("coefficient_ratio: need 0 <= k, k+1 <= n <= N");
  }
  const Polynomial& p = sys.poly(n);
  const long prec = sys.bits();
  BigFloat denom = p.coefficient(k + 1);
  BigFloat floor = BigFloat::two_pow(-(prec - 16), prec) * p.max_abs_coeff(prec);
  if (abs(denom) <= floor) {
    throw DivisionByNegligible(
        "coefficient gamma_{n,k+1} is negligible at working precision");
  }
  return abs(p.coefficient(k) / denom);
}

BigFloat log_derivative_identity_residual(const OrthonormalSystem& sys, long n,
                                          long j,
                                          const PrecisionContext& ctx) {
  if (j < 0 || j + 1 >= n || n > sys.max_degree()) {
    throw DomainError("log_derivative_identity_residual: need j+1 < n <= N");
  }
  const long prec = ctx.mantissa_bits();
  const Polynomial& p = sys.poly(n);

  BigFloat cj = p.coefficient(j);
  BigFloat floor = BigFloat::two_pow(-(prec - 16), prec) * p.max_abs_coeff(prec);
  if (abs(cj) <= floor) {
    throw DivisionByNegligible("p^(j)(0) is negligible at working precision");
  }
  // (j+1)! c_{j+1} / (j! c_j) = (j+1) c_{j+1} / c_j
  BigFloat lhs = (j + 1) * p.coefficient(j + 1).rounded_to(prec) / cj;

  std::vector<BigFloat> zs = derivative_zeros(sys, n, j, ctx);
  BigFloat rhs(prec);
  for (const auto& z : zs) rhs -= BigFloat::of_long(1, prec) / z;

  BigFloat scale = max(abs(lhs), abs(rhs));
  if (scale.is_zero()) return BigFloat(prec);
  return abs(lhs - rhs) / scale;
}

BigFloat christoffel_kernel(const OrthonormalSystem& sys, const BigFloat& x,
                            const BigFloat& y, long n_max) {
  if (n_max < 0 || n_max > sys.max_degree()) {
    throw DomainError("christoffel_kernel: N out of range");
  }
  const long prec = sys.bits();
  BigFloat s(prec);
  for (long n = 0; n <= n_max; ++n) {
    s += sys.poly(n).eval(x, prec) * sys.poly(n).eval(y, prec);
  }
  return s;
}

}  // namespace gapdense
