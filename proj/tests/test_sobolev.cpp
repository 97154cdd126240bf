#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gapdense/errors.hpp"
#include "gapdense/sobolev.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace gapdense;
using oracle::Rational;
using testutil::ctx256;
using testutil::rel_err;
using testutil::tol10;
using testutil::uniform01;

namespace {

Evaluable expr(const char* text) {
  return Evaluable::of_expr(DensityExpr::parse(text));
}

Polynomial poly(std::initializer_list<long> coeffs, long prec = 256) {
  std::vector<BigFloat> c;
  for (long v : coeffs) c.push_back(BigFloat::of_long(v, prec));
  return Polynomial(std::move(c));
}

// The embedded-distance minimization for g = 1, n = 0, N = 5, solved exactly
// in rationals: (H + e_0 e_0^T) c = rhs with Hilbert-segment H.
struct ExactFit {
  oracle::RationalVec c;
  Rational objective;
  Rational p_at_zero;
};

ExactFit exact_penalized_n0(long n_max) {
  long size = n_max + 1;
  oracle::RationalVec mom =
      oracle::uniform_moments(Rational(0), Rational(1), 2 * n_max);
  oracle::RationalMat a(size, oracle::RationalVec(size));
  oracle::RationalVec rhs(size);
  for (long p = 0; p < size; ++p) {
    rhs[p] = Rational(1, p + 1);
    for (long q = 0; q < size; ++q) a[p][q] = mom[p + q];
  }
  a[0][0] += Rational(1);
  ExactFit fit;
  fit.c = oracle::solve_linear(a, rhs);
  fit.objective = Rational(1);
  for (long p = 0; p < size; ++p) fit.objective -= fit.c[p] * rhs[p];
  fit.p_at_zero = fit.c[0];
  return fit;
}

}  // namespace

TEST_CASE("embed reads derivatives off the coefficients") {
  SobolevVector v = embed(poly({0, 0, 1}), 2);  // x^2
  REQUIRE(v.beta.size() == 3);
  CHECK(v.beta[0].is_zero());
  CHECK(v.beta[1].is_zero());
  CHECK(v.beta[2] == BigFloat::of_long(2, 256));

  SobolevVector one = embed(poly({1}), 0);
  CHECK(one.beta[0] == BigFloat::of_long(1, 256));

  SobolevVector lin = embed(poly({1, 3}), 1);
  CHECK(lin.beta[0] == BigFloat::of_long(1, 256));
  CHECK(lin.beta[1] == BigFloat::of_long(3, 256));
}

TEST_CASE("sobolev inner product") {
  auto ctx = ctx256();
  SobolevVector u = embed(poly({1}), 0);
  CHECK(rel_err(sobolev_inner(u, u, uniform01(), ctx),
                BigFloat::of_long(2, 320)) <= 10 * ctx.rel_tol());

  // orthogonal components: zero function against a pure jet
  SobolevVector fz{expr("0"), {BigFloat(256)}};
  SobolevVector jet{expr("0"), {BigFloat::of_long(4, 256)}};
  CHECK(abs(sobolev_inner(fz, jet, uniform01(), ctx)) <= ctx.rel_tol());

  SobolevVector ux = embed(poly({0, 1}), 1);
  SobolevVector u1 = embed(poly({1}), 1);
  CHECK(rel_err(sobolev_inner(ux, u1, uniform01(), ctx),
                BigFloat::of_string("0.5", 320)) <= 10 * ctx.rel_tol());

  SobolevVector wrong{expr("0"), {BigFloat(256), BigFloat(256)}};
  CHECK_THROWS_AS(sobolev_inner(fz, wrong, uniform01(), ctx), DomainError);
}

TEST_CASE("penalized fit closed form and exact-rational certificate") {
  auto ctx = ctx256();
  for (long n_max : {5L, 10L, 20L}) {
    PenalizedFit fit = penalized_fit(expr("1"), 0, n_max, uniform01(), ctx);
    Rational want(1, 1 + (n_max + 1) * (n_max + 1));
    CHECK(rel_err(fit.objective, want.to_bigfloat(320)) <= tol10("1e-20"));
  }

  // independent exact solve at N = 5
  ExactFit exact = exact_penalized_n0(5);
  CHECK(exact.objective == Rational(1, 37));
  CHECK(exact.p_at_zero == Rational(1, 37));
  PenalizedFit fit5 = penalized_fit(expr("1"), 0, 5, uniform01(), ctx);
  CHECK(rel_err(fit5.objective, exact.objective.to_bigfloat(320)) <=
        tol10("1e-25"));
  for (long p = 0; p <= 5; ++p) {
    CHECK(rel_err(fit5.p.coefficient(p), exact.c[p].to_bigfloat(320)) <=
          tol10("1e-25"));
  }
}

TEST_CASE("penalized fit degenerate targets") {
  auto ctx = ctx256();
  PenalizedFit zero = penalized_fit(expr("0"), 1, 4, uniform01(), ctx);
  CHECK(zero.objective <= tol10("1e-70"));
  CHECK(zero.p.max_abs_coeff(256) <= tol10("1e-70"));

  // g = x^{n+1} already has a vanishing jet, so the fit returns g itself
  PenalizedFit self = penalized_fit(expr("x^2"), 1, 4, uniform01(), ctx);
  CHECK(self.objective < ctx.rel_tol());
  CHECK(abs(self.p.coefficient(2) - 1) < ctx.rel_tol());

  CHECK_THROWS_AS(penalized_fit(expr("1"), 2, 2, uniform01(), ctx),
                  DomainError);
}

TEST_CASE("penalized objective matches an independent evaluation") {
  auto ctx = ctx256();
  Evaluable g = expr("exp(x)");
  BigFloat prev;
  for (long n_max : {4L, 6L, 8L}) {
    PenalizedFit fit = penalized_fit(g, 1, n_max, uniform01(), ctx);
    BigFloat direct = integrate(
        uniform01(),
        Evaluable{[&](const BigFloat& x, long p) {
                    BigFloat e = g(x, p) - fit.p.eval(x, p);
                    return e * e;
                  },
                  {}},
        ctx);
    for (long i = 0; i <= 1; ++i) {
      BigFloat d = fit.p.derivative_at_zero(i, 256);
      direct += d * d;
    }
    CHECK(abs(fit.objective - direct) <= 10 * ctx.rel_tol());
    if (n_max > 4) CHECK(fit.objective <= prev + 10 * ctx.rel_tol());
    prev = fit.objective;
  }
}

TEST_CASE("split_gap is an exact coefficient split") {
  Polynomial p = poly({1, 1, 0, 1});  // 1 + x + x^3
  auto [q, r] = split_gap(p, 1);
  CHECK(q.degree() == 1);
  CHECK(q.coefficient(0) == BigFloat::of_long(1, 256));
  CHECK(q.coefficient(1) == BigFloat::of_long(1, 256));
  CHECK(r.degree() == 1);
  CHECK(r.coefficient(0).is_zero());
  CHECK(r.coefficient(1) == BigFloat::of_long(1, 256));

  auto [q2, r2] = split_gap(poly({5, 7}), 3);
  CHECK(r2.is_zero());
  CHECK(q2.coefficient(1) == BigFloat::of_long(7, 256));

  auto [q3, r3] = split_gap(Polynomial::monomial(4, BigFloat::of_long(1, 256)), 3);
  CHECK(q3.is_zero());
  CHECK(r3.degree() == 0);

  // reassembly is the identity, bit for bit
  testutil::DetRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<BigFloat> c;
    for (int k = 0; k < 9; ++k) {
      c.push_back(BigFloat::of_double(rng.next_unit(), 256));
    }
    Polynomial f(c);
    long n = trial % 6;
    auto [qq, rr] = split_gap(f, n);
    Polynomial back = qq + rr.times_x_power(n + 1);
    for (long k = 0; k <= f.degree(); ++k) {
      CHECK(back.coefficient(k) == f.coefficient(k));
    }
  }
}

TEST_CASE("maindense2 demo rows") {
  auto ctx = PrecisionContext::with_bits(304);
  auto rows = maindense2_demo(expr("1"), 0, {5, 10, 20, 40}, uniform01(), ctx);
  REQUIRE(rows.size() == 4);
  for (size_t i = 0; i < rows.size(); ++i) {
    long n1 = rows[i].top_degree + 1;
    CHECK(rel_err(rows[i].objective,
                  Rational(1, 1 + n1 * n1).to_bigfloat(320)) <= tol10("1e-15"));
    CHECK(rows[i].gap_residual <=
          sqrt(rows[i].objective) + rows[i].q_norm + tol10("1e-20"));
    if (i > 0) {
      CHECK(rows[i].gap_residual < rows[i - 1].gap_residual);
      CHECK(abs(rows[i].p_at_zero) < abs(rows[i - 1].p_at_zero));
    }
  }
  // closed-form value checked at N = 5 only, against the exact solve
  ExactFit exact = exact_penalized_n0(5);
  CHECK(rel_err(rows[0].p_at_zero, exact.p_at_zero.to_bigfloat(320)) <=
        tol10("1e-25"));

  // a target already inside the gapped span is matched to rounding level
  auto ctx2 = ctx256();
  auto inspan = maindense2_demo(expr("x+x^2"), 0, {3, 6}, uniform01(), ctx2);
  CHECK(inspan.back().gap_residual < 10 * ctx2.rel_tol());
}

TEST_CASE("maindense2 demo rejects unsupported measures") {
  auto ctx = ctx256();
  Measure atom0 = Measure::from_json_text(
      R"({"continuous": {"support": ["0","1"], "density": "1"},
          "atoms": [{"x": "0", "w": "0.2"}]})");
  CHECK_THROWS_AS(maindense2_demo(expr("1"), 0, {5}, atom0, ctx),
                  AtomAtZeroOfT);

  Measure neg = Measure::from_json_text(
      R"({"continuous": {"support": ["-1","1"], "density": "1"}, "atoms": []})");
  CHECK_THROWS_AS(maindense2_demo(expr("1"), 0, {5}, neg, ctx), DomainError);

  Measure neg_atom = Measure::from_json_text(
      R"({"continuous": {"support": ["0","1"], "density": "1"},
          "atoms": [{"x": "-1", "w": "0.1"}]})");
  CHECK_THROWS_AS(maindense2_demo(expr("1"), 0, {5}, neg_atom, ctx),
                  DomainError);
}

TEST_CASE("ratio table delegates and warns") {
  auto ctx = ctx256();
  RatioTable t = ratio_table(uniform01(), 0, {5, 10, 20}, ctx);
  CHECK(!t.support_gap_warning);
  CHECK(rel_err(t.rows[0].second, Rational(1, 30).to_bigfloat(320)) <=
        tol10("1e-25"));
  CHECK(rel_err(t.rows[1].second, Rational(1, 110).to_bigfloat(320)) <=
        tol10("1e-25"));
  CHECK(rel_err(t.rows[2].second, Rational(1, 420).to_bigfloat(320)) <=
        tol10("1e-25"));

  // negative atoms keep the table total and still decreasing
  Measure neg = Measure::from_json_text(
      R"({"continuous": {"support": ["0","1"], "density": "1"},
          "atoms": [{"x": "-1", "w": "0.1"}, {"x": "-2", "w": "0.1"}]})");
  auto ctx320 = PrecisionContext::with_bits(320);
  std::vector<long> ns;
  for (long n = 5; n <= 14; ++n) ns.push_back(n);
  RatioTable tn = ratio_table(neg, 0, ns, ctx320);
  CHECK(!tn.support_gap_warning);
  for (size_t i = 1; i < tn.rows.size(); ++i) {
    CHECK(tn.rows[i].second < tn.rows[i - 1].second);
  }

  // support away from zero: emitted as-is, flagged
  Measure m12 = Measure::from_json_text(
      R"({"continuous": {"support": ["1","2"], "density": "1"}, "atoms": []})");
  RatioTable tw = ratio_table(m12, 0, {5, 10}, ctx);
  CHECK(tw.support_gap_warning);
  CHECK(tw.rows.size() == 2);

  CHECK_THROWS_AS(ratio_table(uniform01(), 0, {0}, ctx), DomainError);
  Measure negsup = Measure::from_json_text(
      R"({"continuous": {"support": ["-1","1"], "density": "1"}, "atoms": []})");
  CHECK_THROWS_AS(ratio_table(negsup, 0, {5}, ctx), DomainError);
}
