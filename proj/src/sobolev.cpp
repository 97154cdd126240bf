#include "gapdense/sobolev.hpp"

#include <algorithm>
#include <utility>

#include "gapdense/errors.hpp"
#include "gapdense/linalg.hpp"
#include "gapdense/orthopoly.hpp"

namespace gapdense {

namespace {
constexpr long kValidatePrec = 320;

void require_support_in_halfline(const Measure& mu, bool reject_atom_at_zero) {
  if (mu.continuous()) {
    if (mu.lower(kValidatePrec).sgn() < 0) {
      throw DomainError("support must lie in [0, inf)");
    }
  }
  for (size_t i = 0; i < mu.atoms().size(); ++i) {
    int s = mu.atom_location(i, kValidatePrec).sgn();
    if (s < 0) throw DomainError("support must lie in [0, inf)");
    if (s == 0 && reject_atom_at_zero) {
      throw AtomAtZeroOfT("measure has an atom at 0");
    }
  }
}

}  // namespace

SobolevVector embed(const Polynomial& p, long n) {
  if (n < 0) throw DomainError("embed needs n >= 0");
  long prec = 64;
  for (const auto& c : p.coeffs()) prec = std::max(prec, c.prec());
  std::vector<BigFloat> beta;
  beta.reserve(static_cast<size_t>(n + 1));
  for (long i = 0; i <= n; ++i) beta.push_back(p.derivative_at_zero(i, prec));
  return SobolevVector{Evaluable::of_polynomial(p), std::move(beta)};
}

BigFloat sobolev_inner(const SobolevVector& u, const SobolevVector& v,
                       const Measure& mu, const PrecisionContext& ctx) {
  if (u.beta.size() != v.beta.size()) {
    throw DomainError("sobolev_inner: beta length mismatch");
  }
  BigFloat out = integrate(
      mu,
      Evaluable{[&u, &v](const BigFloat& x, long p) {
                  return u.f(x, p) * v.f(x, p);
                },
                {}},
      ctx);
  for (size_t i = 0; i < u.beta.size(); ++i) out += u.beta[i] * v.beta[i];
  return out;
}

PenalizedFit penalized_fit(const Evaluable& g, long n, long n_max,
                           const Measure& mu, const PrecisionContext& ctx) {
  if (n < 0 || n_max < n + 1) throw DomainError("penalized_fit needs N >= n+1");
  const long prec = ctx.mantissa_bits();
  const long size = n_max + 1;

  MomentSequence mom = moments(mu, 2 * n_max, ctx);
  Mat a = hankel_matrix(mom.values, 0, size, prec);
  for (long i = 0; i <= n; ++i) {
    BigFloat fac = BigFloat::factorial(static_cast<unsigned long>(i), prec);
    a[i][i] += fac * fac;
  }

  size_t dim = static_cast<size_t>(size) + 1;
  std::vector<BigFloat> rhs_and_norm = integrate_many(
      mu,
      [&](const BigFloat& x, long p) {
        std::vector<BigFloat> out;
        out.reserve(dim);
        BigFloat gv = g(x, p);
        BigFloat xp = BigFloat::of_long(1, p);
        for (long q = 0; q <= n_max; ++q) {
          out.push_back(gv * xp);
          xp *= x;
        }
        out.push_back(gv * gv);
        return out;
      },
      dim, 2 * n_max + 2, ctx);
  std::vector<BigFloat> rhs(rhs_and_norm.begin(), rhs_and_norm.end() - 1);
  BigFloat g_norm2 = rhs_and_norm.back();

  std::vector<BigFloat> c = spd_solve(a, rhs, prec);

  BigFloat objective = g_norm2;
  for (long i = 0; i < size; ++i) {
    objective -= c[static_cast<size_t>(i)] * rhs[static_cast<size_t>(i)];
  }
  if (objective.sgn() < 0) objective = BigFloat(prec);
  return PenalizedFit{Polynomial(std::move(c)), objective};
}

std::pair<Polynomial, Polynomial> split_gap(const Polynomial& p, long n) {
  if (n < 0) throw DomainError("split_gap needs n >= 0");
  const auto& c = p.coeffs();
  std::vector<BigFloat> low(c.begin(),
                            c.begin() + std::min<size_t>(c.size(),
                                                         static_cast<size_t>(n + 1)));
  std::vector<BigFloat> high;
  if (c.size() > static_cast<size_t>(n + 1)) {
    high.assign(c.begin() + (n + 1), c.end());
  }
  return {Polynomial(std::move(low)), Polynomial(std::move(high))};
}

std::vector<DemoRow> maindense2_demo(const Evaluable& g, long n,
                                     const std::vector<long>& n_list,
                                     const Measure& mu,
                                     const PrecisionContext& ctx) {
  require_support_in_halfline(mu, /*reject_atom_at_zero=*/true);
  const long prec = ctx.mantissa_bits();
  std::vector<DemoRow> rows;
  rows.reserve(n_list.size());
  for (long n_max : n_list) {
    PenalizedFit fit = penalized_fit(g, n, n_max, mu, ctx);
    auto [q, r] = split_gap(fit.p, n);

    BigFloat q_norm2 = integrate(
        mu,
        Evaluable{[&q](const BigFloat& x, long p) {
                    BigFloat v = q.eval(x, p);
                    return v * v;
                  },
                  {}},
        ctx);
    BigFloat gap_res2 = integrate(
        mu,
        Evaluable{[&g, &r, n](const BigFloat& x, long p) {
                    BigFloat e =
                        g(x, p) - pow_si(x.rounded_to(p), n + 1) * r.eval(x, p);
                    return e * e;
                  },
                  {}},
        ctx);
    DemoRow row{n_max, fit.objective, sqrt(q_norm2), sqrt(gap_res2),
                fit.p.coefficient(0).rounded_to(prec)};
    BigFloat bound = sqrt(row.objective) + row.q_norm +
                     10 * ctx.rel_tol() *
                         max(BigFloat::of_long(1, prec), row.gap_residual);
    if (row.gap_residual > bound) {
      throw PrecisionExhausted(
          "triangle bound violated in maindense2_demo row N=" +
          std::to_string(n_max));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

RatioTable ratio_table(const Measure& mu, long k, const std::vector<long>& ns,
                       const PrecisionContext& ctx) {
  if (k < 0) throw DomainError("ratio_table needs k >= 0");
  if (ns.empty()) throw DomainError("ratio_table needs at least one n");
  if (mu.continuous() && mu.lower(kValidatePrec).sgn() < 0) {
    throw DomainError("continuous support must lie in [0, inf)");
  }
  long n_top = 0;
  for (long n : ns) {
    if (n < k + 1) throw DomainError("ratio_table needs every n >= k+1");
    n_top = std::max(n_top, n);
  }

  // The lemma's hypothesis wants 0 in the support; report when it is not.
  bool warn = false;
  if (mu.continuous()) {
    BigFloat inf = mu.lower(kValidatePrec);
    for (size_t i = 0; i < mu.atoms().size(); ++i) {
      inf = min(inf, mu.atom_location(i, kValidatePrec));
    }
    warn = inf.sgn() > 0;
  } else {
    BigFloat inf = mu.atom_location(0, kValidatePrec);
    for (size_t i = 1; i < mu.atoms().size(); ++i) {
      inf = min(inf, mu.atom_location(i, kValidatePrec));
    }
    warn = inf.sgn() > 0;
  }

  OrthonormalSystem sys = orthonormal_system(mu, n_top, ctx);
  RatioTable table{k, {}, warn};
  table.rows.reserve(ns.size());
  for (long n : ns) {
    table.rows.emplace_back(n, coefficient_ratio(sys, n, k));
  }
  return table;
}

}  // namespace gapdense
