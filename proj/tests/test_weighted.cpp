#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gapdense/errors.hpp"
#include "gapdense/weighted.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace gapdense;
using oracle::Rational;
using testutil::ctx256;
using testutil::rel_err;
using testutil::tol10;
using testutil::uniform01;

TEST_CASE("t-factor basics") {
  TFactor t("3", 1, {"2", "3"});
  CHECK(t.degree() == 3);
  CHECK(t.eval(BigFloat::of_long(2, 256), 256).is_zero());
  CHECK(t.eval(BigFloat(256), 256).is_zero());  // s >= 1 vanishes at 0
  Polynomial p = t.as_polynomial(256);
  CHECK(p.degree() == 3);
  // 3x(1 - x/2)(1 - x/3) = 3x - 5x^2/2 + x^3/2
  CHECK(rel_err(p.coefficient(1), BigFloat::of_long(3, 320)) <= tol10("1e-70"));
  CHECK(rel_err(p.coefficient(2), BigFloat::of_string("-2.5", 320)) <=
        tol10("1e-70"));
  CHECK(rel_err(p.coefficient(3), BigFloat::of_string("0.5", 320)) <=
        tol10("1e-70"));

  CHECK_THROWS_AS(TFactor("0", 1, {}), ConfigError);
  CHECK_THROWS_AS(TFactor("1", 0, {"0"}), ConfigError);
  CHECK_THROWS_AS(TFactor::parse("1"), ConfigError);
  TFactor parsed = TFactor::parse("-1,0,1");
  CHECK(parsed.factor_count() == 1);
  CHECK(parsed.eval(BigFloat::of_long(1, 256), 256).is_zero());
}

TEST_CASE("t_family drops powers then peels factors") {
  TFactor t2("1", 2, {});
  TFactor f1 = t_family(t2, 1);
  CHECK(f1.s() == 1);
  CHECK(f1.factor_count() == 0);

  TFactor t("3", 1, {"2", "3"});
  TFactor f2 = t_family(t, 2);
  CHECK(f2.c_text() == "1");
  CHECK(f2.s() == 0);
  REQUIRE(f2.factor_count() == 1);
  CHECK(f2.zero_texts()[0] == "3");

  TFactor t3("1", 0, {"2"});
  TFactor f3 = t_family(t3, 1);
  CHECK(f3.degree() == 0);
  CHECK(f3.eval(BigFloat::of_long(5, 128), 128) == BigFloat::of_long(1, 128));

  CHECK_THROWS_AS(t_family(t, 0), DomainError);
  CHECK_THROWS_AS(t_family(t, 4), DomainError);
}

TEST_CASE("t_over_tk is the degree-k quotient") {
  TFactor t2("1", 2, {});
  Polynomial q2 = t_over_tk(t2, 2, 256);
  CHECK(q2.degree() == 2);
  CHECK(q2.coefficient(2) == BigFloat::of_long(1, 256));
  CHECK(q2.coefficient(0).is_zero());

  TFactor t("3", 1, {"2", "3"});
  Polynomial q3 = t_over_tk(t, 3, 256);
  CHECK(q3.degree() == 3);
  CHECK(rel_err(q3.coefficient(1), BigFloat::of_long(3, 320)) <= tol10("1e-70"));

  TFactor t1("1", 0, {"2"});
  Polynomial q1 = t_over_tk(t1, 1, 256);
  CHECK(q1.degree() == 1);
  CHECK(q1.coefficient(0) == BigFloat::of_long(1, 256));
  CHECK(q1.coefficient(1) == BigFloat::of_string("-0.5", 256));

  // degree law across a family of t's
  std::vector<TFactor> ts = {TFactor("1", 2, {}), TFactor("3", 1, {"2", "3"}),
                             TFactor("1", 0, {"2"}),
                             TFactor("2", 0, {"2", "3", "5"})};
  for (const auto& tf : ts) {
    for (long k = 1; k <= tf.degree(); ++k) {
      CHECK(t_over_tk(tf, k, 256).degree() == k);
    }
  }
}

TEST_CASE("weighted system exposes orthonormal q functions") {
  auto ctx = ctx256();
  TFactor tx("1", 1, {});
  WeightedSystem ws = build_weighted_system(uniform01(), tx, 5, ctx);

  // q_0 = sqrt(3) x
  Polynomial q0 = ws.q_polynomial(0, 256);
  CHECK(q0.degree() == 1);
  CHECK(q0.coefficient(0).is_zero());
  CHECK(rel_err(q0.coefficient(1), sqrt(BigFloat::of_long(3, 320))) <=
        tol10("1e-70"));

  // deg q_n = n + deg t
  for (long n = 0; n <= 5; ++n) {
    CHECK(ws.q_polynomial(n, 256).degree() == n + 1);
  }

  // Gram identity of q_0..q_5 in H_1 for t with a zero away from the support
  TFactor t2("1", 0, {"2"});
  WeightedSystem ws2 = build_weighted_system(uniform01(), t2, 5, ctx);
  for (long m = 0; m <= 5; ++m) {
    for (long n = m; n <= 5; ++n) {
      BigFloat g = integrate(
          uniform01(),
          Evaluable{[&ws2, m, n](const BigFloat& x, long p) {
                      return ws2.q_eval(m, x, p) * ws2.q_eval(n, x, p);
                    },
                    {}},
          ctx);
      CHECK(abs(m == n ? g - 1 : g) <= ctx.rel_tol());
    }
  }

  Measure atom0 = Measure::from_json_text(
      R"({"continuous": {"support": ["0","1"], "density": "1"},
          "atoms": [{"x": "0", "w": "0.2"}]})");
  CHECK_THROWS_AS(build_weighted_system(atom0, tx, 3, ctx), AtomAtZeroOfT);
}

TEST_CASE("q-orthonormality up to degree 25") {
  auto ctx = ctx256();
  for (const TFactor& t : {TFactor("1", 1, {}), TFactor("1", 0, {"2"})}) {
    WeightedSystem ws = build_weighted_system(uniform01(), t, 25, ctx);
    // all pairwise inner products from one shared rule
    const long count = 26;
    std::vector<BigFloat> gram = integrate_many(
        uniform01(),
        [&](const BigFloat& x, long p) {
          std::vector<BigFloat> q(count, BigFloat(p));
          for (long n = 0; n < count; ++n) q[n] = ws.q_eval(n, x, p);
          std::vector<BigFloat> out;
          out.reserve(count * (count + 1) / 2);
          for (long m = 0; m < count; ++m) {
            for (long n = m; n < count; ++n) out.push_back(q[m] * q[n]);
          }
          return out;
        },
        static_cast<size_t>(count * (count + 1) / 2), 2 * (25 + t.degree()) + 2,
        ctx);
    BigFloat defect(256);
    size_t idx = 0;
    for (long m = 0; m < count; ++m) {
      for (long n = m; n < count; ++n, ++idx) {
        defect = max(defect, abs(m == n ? gram[idx] - 1 : gram[idx]));
      }
    }
    CHECK(defect < 10 * ctx.rel_tol());
  }
}

TEST_CASE("isometry residual vanishes for polynomials") {
  auto ctx = ctx256();
  TFactor tx("1", 1, {});
  Polynomial one = Polynomial::constant(BigFloat::of_long(1, 256));
  CHECK(isometry_residual(one, tx, uniform01(), ctx) < tol10("1e-60"));

  TFactor t2("1", 0, {"2"});
  Polynomial x3 = Polynomial::monomial(3, BigFloat::of_long(1, 256));
  CHECK(isometry_residual(x3, t2, uniform01(), ctx) < ctx.rel_tol());

  // 50 random polynomials of degree <= 10 with coefficients in [-1, 1]
  TFactor t("3", 1, {"2", "3"});
  testutil::DetRng rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<BigFloat> coeffs;
    for (int k = 0; k <= 10; ++k) {
      coeffs.push_back(BigFloat::of_double(rng.next_unit(), 256));
    }
    Polynomial f(std::move(coeffs));
    CHECK(isometry_residual(f, t, uniform01(), ctx) < 10 * ctx.rel_tol());
  }
}

TEST_CASE("expansion in q recovers members and converges on quotients") {
  auto ctx = ctx256();
  TFactor t2("1", 0, {"2", "3"});
  WeightedSystem ws = build_weighted_system(uniform01(), t2, 40, ctx);

  // f = q_3 comes back as e_3; the residual sits at the Parseval
  // cancellation floor, sqrt of one working ulp.
  QExpansion self = expand_in_q(ws.q_evaluable(3), ws, 6, ctx);
  for (long n = 0; n <= 6; ++n) {
    BigFloat want = n == 3 ? BigFloat::of_long(1, 256) : BigFloat(256);
    CHECK(abs(self.coeffs[n] - want) <= ctx.rel_tol());
  }
  CHECK(self.residuals[3] <= 10 * ctx.rel_tol());

  // t/t_2 drops below 1e-10 well before N = 40
  QExpansion quot = expand_in_q(
      Evaluable::of_polynomial(t_over_tk(t2, 2, 256)), ws, 40, ctx);
  for (size_t i = 1; i < quot.residuals.size(); ++i) {
    CHECK(quot.residuals[i] <= quot.residuals[i - 1] * (1 + ctx.rel_tol().to_double()) + ctx.rel_tol());
  }
  CHECK(quot.residuals.back() < tol10("1e-10"));
}

TEST_CASE("expansion residual for f = 1, t = x is 1/(N+2)") {
  auto ctx = ctx256();
  TFactor tx("1", 1, {});
  WeightedSystem ws = build_weighted_system(uniform01(), tx, 20, ctx);
  QExpansion exp = expand_in_q(Evaluable::constant("1"), ws, 20, ctx);
  // span{q_0..q_N} = span{x..x^{N+1}}, and the distance from 1 to that span
  // is 1/sqrt(K_{N+1}(0,0)) by the kernel identity, certified exactly:
  auto orc = oracle::monic_orthogonal(
      oracle::uniform_moments(Rational(0), Rational(1), 44), 22);
  for (long n = 0; n <= 20; ++n) {
    CHECK(oracle::kernel_at_zero(orc, n + 1) == Rational((n + 2) * (n + 2)));
    CHECK(rel_err(exp.residuals[n], Rational(1, n + 2).to_bigfloat(320)) <=
          tol10("1e-25"));
  }
}

TEST_CASE("expansion residuals of t/t_k decay for every k") {
  auto ctx = PrecisionContext::with_bits(320);
  std::vector<TFactor> ts = {TFactor("1", 1, {}), TFactor("1", 2, {}),
                             TFactor("1", 0, {"2"}),
                             TFactor("3", 1, {"2", "3"})};
  for (const auto& t : ts) {
    WeightedSystem ws = build_weighted_system(uniform01(), t, 40, ctx);
    for (long k = 1; k <= t.degree(); ++k) {
      QExpansion exp = expand_in_q(
          Evaluable::of_polynomial(t_over_tk(t, k, 320)), ws, 40, ctx);
      for (size_t i = 1; i < exp.residuals.size(); ++i) {
        CHECK(exp.residuals[i] <=
              exp.residuals[i - 1] + 10 * ctx.rel_tol());
      }
      if (t.s() == 2 && k == 1) {
        // t = x^2, k = 1: the quotient is x and 1/t_1 = 1/x has its pole at
        // the support endpoint, so the decay is only algebraic, roughly
        // N^{-5/2} here. Check the rate instead of a fixed small bound.
        CHECK(exp.residuals[40] < exp.residuals[20] / 3);
        CHECK(exp.residuals.back() < tol10("1e-4", 320));
      } else {
        CHECK(exp.residuals.back() < tol10("1e-8", 320));
      }
    }
  }
}

TEST_CASE("counterexample: the atom splits H_t from H_1") {
  auto ctx = ctx256();
  auto r = counterexample_demo("0.3", ctx);
  CHECK(r.d_t.is_zero());
  CHECK(r.d1_squared == r.atom_weight);
  CHECK(r.d1_squared == BigFloat::of_string("0.3", 256));
  CHECK(rel_err(r.d_1, sqrt(BigFloat::of_string("0.3", 320))) <=
        10 * ctx.rel_tol());

  auto r1 = counterexample_demo("1", ctx);
  CHECK(r1.d_t.is_zero());
  CHECK(r1.d_1 == BigFloat::of_long(1, 256));

  auto r7 = counterexample_demo("0.7", ctx);
  CHECK(r7.d1_squared / r7.atom_weight == BigFloat::of_long(1, 256));

  CHECK_THROWS_AS(counterexample_demo("0", ctx), DomainError);
}
