#include "gapdense/weighted.hpp"

#include <utility>

#include "gapdense/errors.hpp"

namespace gapdense {

namespace {
constexpr long kValidatePrec = 320;
}

TFactor::TFactor(std::string c_text, long s, std::vector<std::string> zero_texts)
    : c_text_(std::move(c_text)), s_(s), zeros_(std::move(zero_texts)) {
  if (s_ < 0) throw ConfigError("t-factor power s must be nonnegative");
  if (BigFloat::of_string(c_text_, kValidatePrec).is_zero()) {
    throw ConfigError("t-factor constant c must be nonzero");
  }
  for (const auto& z : zeros_) {
    if (BigFloat::of_string(z, kValidatePrec).is_zero()) {
      throw ConfigError("t-factor zeros must be nonzero");
    }
  }
}

TFactor TFactor::parse(std::string_view spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : spec) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() < 2) {
    throw ConfigError("t-factor spec must be 'c,s[,x1,x2,...]'");
  }
  long s = 0;
  try {
    size_t used = 0;
    s = std::stol(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
  } catch (const std::exception&) {
    throw ConfigError("t-factor s must be an integer, got '" + parts[1] + "'");
  }
  std::vector<std::string> zeros(parts.begin() + 2, parts.end());
  return TFactor(parts[0], s, std::move(zeros));
}

BigFloat TFactor::c(long prec) const {
  return BigFloat::of_string(c_text_, prec);
}

BigFloat TFactor::zero(long i, long prec) const {
  return BigFloat::of_string(zeros_.at(static_cast<size_t>(i)), prec);
}

BigFloat TFactor::eval(const BigFloat& x, long prec) const {
  BigFloat v = c(prec);
  if (s_ > 0) v *= pow_si(x.rounded_to(prec), s_);
  BigFloat one = BigFloat::of_long(1, prec);
  for (long i = 0; i < factor_count(); ++i) {
    v *= one - x.rounded_to(prec) / zero(i, prec);
  }
  return v;
}

Polynomial TFactor::as_polynomial(long prec) const {
  Polynomial p = Polynomial::constant(c(prec)).times_x_power(s_);
  BigFloat one = BigFloat::of_long(1, prec);
  for (long i = 0; i < factor_count(); ++i) {
    std::vector<BigFloat> lin;
    lin.push_back(one);
    lin.push_back(-(one / zero(i, prec)));
    p = p * Polynomial(std::move(lin));
  }
  return p;
}

std::string TFactor::expression_text() const {
  std::string out = "(" + c_text_ + ")";
  if (s_ > 0) out += "*x^" + std::to_string(s_);
  for (const auto& z : zeros_) out += "*(1-x/(" + z + "))";
  return out;
}

bool TFactor::vanishes_at(const BigFloat& x, long prec) const {
  if (s_ > 0 && x.is_zero()) return true;
  for (long i = 0; i < factor_count(); ++i) {
    if (x.rounded_to(prec) == zero(i, prec)) return true;
  }
  return false;
}

TFactor t_family(const TFactor& t, long k) {
  if (k < 1 || k > t.degree()) {
    throw DomainError("t_family: need 1 <= k <= s + M");
  }
  if (k <= t.s()) return TFactor(t.c_text(), t.s() - k, t.zero_texts());
  long i = k - t.s();  // peel the first i linear factors
  std::vector<std::string> tail(t.zero_texts().begin() + i,
                                t.zero_texts().end());
  return TFactor("1", 0, std::move(tail));
}

Polynomial t_over_tk(const TFactor& t, long k, long prec) {
  if (k < 1 || k > t.degree()) {
    throw DomainError("t_over_tk: need 1 <= k <= s + M");
  }
  if (k <= t.s()) {
    return Polynomial::monomial(k, BigFloat::of_long(1, prec));
  }
  long i = k - t.s();
  std::vector<std::string> head(t.zero_texts().begin(),
                                t.zero_texts().begin() + i);
  TFactor quotient(t.c_text(), t.s(), std::move(head));
  return quotient.as_polynomial(prec);
}

Measure weighted_measure(const Measure& mu, const TFactor& t,
                         const PrecisionContext& ctx) {
  const long prec = ctx.mantissa_bits();
  for (size_t i = 0; i < mu.atoms().size(); ++i) {
    if (t.vanishes_at(mu.atom_location(i, kValidatePrec), kValidatePrec)) {
      throw AtomAtZeroOfT("atom at x = " + mu.atoms()[i].location +
                          " sits on a zero of t");
    }
  }
  std::optional<ContinuousPart> cont;
  if (mu.continuous()) {
    ContinuousPart part;
    part.lower = mu.continuous()->lower;
    part.upper = mu.continuous()->upper;
    part.density = DensityExpr::parse("(" + mu.continuous()->density.text() +
                                      ")*(" + t.expression_text() + ")^2");
    cont = std::move(part);
  }
  std::vector<MeasureAtom> atoms;
  for (size_t i = 0; i < mu.atoms().size(); ++i) {
    BigFloat tv = t.eval(mu.atom_location(i, prec), prec);
    BigFloat w = mu.atom_weight(i, prec) * tv * tv;
    atoms.push_back({mu.atoms()[i].location, w.exact_decimal()});
  }
  return Measure(std::move(cont), std::move(atoms));
}

WeightedSystem::WeightedSystem(TFactor t, Measure base, Measure weighted,
                               OrthonormalSystem inner)
    : t_(std::move(t)),
      base_(std::move(base)),
      weighted_(std::move(weighted)),
      inner_(std::move(inner)) {}

BigFloat WeightedSystem::q_eval(long n, const BigFloat& x, long prec) const {
  return t_.eval(x, prec) * inner_.poly(n).eval(x, prec);
}

Polynomial WeightedSystem::q_polynomial(long n, long prec) const {
  return t_.as_polynomial(prec) * inner_.poly(n);
}

Evaluable WeightedSystem::q_evaluable(long n) const {
  TFactor t = t_;
  Polynomial p = inner_.poly(n);
  return Evaluable{[t, p](const BigFloat& x, long prec) {
                     return t.eval(x, prec) * p.eval(x, prec);
                   },
                   {}};
}

WeightedSystem build_weighted_system(const Measure& mu, const TFactor& t,
                                     long n_max, const PrecisionContext& ctx) {
  Measure wm = weighted_measure(mu, t, ctx);
  OrthonormalSystem inner = orthonormal_system(wm, n_max, ctx);
  return WeightedSystem(t, mu, std::move(wm), std::move(inner));
}

BigFloat isometry_residual(const Polynomial& f, const TFactor& t,
                           const Measure& mu, const PrecisionContext& ctx) {
  const long prec = ctx.mantissa_bits();
  // Route 1: expand t*f and integrate the square via moments of mu.
  Polynomial tf = t.as_polynomial(prec) * f;
  long deg = tf.is_zero() ? 0 : tf.degree();
  MomentSequence mom = moments(mu, 2 * deg, ctx);
  BigFloat lhs(prec);
  for (long i = 0; i <= tf.degree(); ++i) {
    for (long j = 0; j <= tf.degree(); ++j) {
      lhs += tf.coefficient(i) * tf.coefficient(j) *
             mom.values[static_cast<size_t>(i + j)];
    }
  }
  // Route 2: pointwise t(x)^2 f(x)^2 with t evaluated in factored form.
  BigFloat rhs = integrate(
      mu,
      Evaluable{[&t, &f](const BigFloat& x, long p) {
                  BigFloat tv = t.eval(x, p);
                  BigFloat fv = f.eval(x, p);
                  return tv * tv * fv * fv;
                },
                {}},
      ctx);
  return abs(lhs - rhs);
}

QExpansion expand_in_q(const Evaluable& f, const WeightedSystem& ws, long n_max,
                       const PrecisionContext& ctx) {
  if (n_max < 0 || n_max > ws.max_index()) {
    throw DomainError("expand_in_q: N out of range for this system");
  }
  const long prec = ctx.mantissa_bits();
  const TFactor& t = ws.t();
  size_t dim = static_cast<size_t>(n_max + 1) + 1;  // coefficients plus ||f||^2
  long degree_hint = 2 * (n_max + t.degree()) + 2;
  std::vector<BigFloat> vals = integrate_many(
      ws.base_measure(),
      [&](const BigFloat& x, long p) {
        std::vector<BigFloat> out;
        out.reserve(dim);
        BigFloat fv = f(x, p);
        BigFloat tv = t.eval(x, p);
        // p_{n,t} values by the inner recurrence; q_n = t * p_{n,t}.
        const OrthonormalSystem& inner = ws.inner();
        BigFloat p_prev(p), p_cur = inner.poly(0).coefficient(0).rounded_to(p);
        for (long n = 0; n <= n_max; ++n) {
          out.push_back(fv * tv * p_cur);
          if (n < n_max) {
            BigFloat p_next =
                ((x - inner.a(n)) * p_cur -
                 (n > 0 ? inner.b(n) * p_prev : BigFloat(p))) /
                inner.b(n + 1);
            p_prev = p_cur;
            p_cur = p_next;
          }
        }
        out.push_back(fv * fv);
        return out;
      },
      dim, degree_hint, ctx);

  QExpansion exp;
  exp.coeffs.assign(vals.begin(), vals.begin() + (n_max + 1));
  BigFloat f_norm2 = vals.back();
  BigFloat acc(prec);
  exp.residuals.reserve(static_cast<size_t>(n_max + 1));
  for (long n = 0; n <= n_max; ++n) {
    acc += exp.coeffs[static_cast<size_t>(n)] * exp.coeffs[static_cast<size_t>(n)];
    BigFloat r2 = f_norm2 - acc;
    if (r2.sgn() < 0) r2 = BigFloat(prec);
    exp.residuals.push_back(sqrt(r2));
  }
  return exp;
}

CounterexampleResult counterexample_demo(const std::string& w_text,
                                         const PrecisionContext& ctx) {
  const long prec = ctx.mantissa_bits();
  BigFloat w = BigFloat::of_string(w_text, prec);
  if (!(w > BigFloat(prec))) {
    throw DomainError("counterexample weight must be positive");
  }
  ContinuousPart cont{"0", "2", DensityExpr::parse("1")};
  Measure mu(cont, {{"1", w_text}});
  TFactor t("-1", 0, {"1"});
  BigFloat one_pt = BigFloat::of_string("1", prec);

  // f_1 = 1/(x-1) and f_2 = (1 - chi_{1})/(x-1) share the same formula off
  // the atom; their pinned values at the atom are irrelevant in H_t because
  // t(1) = 0 exactly. The quadrature sees the difference 0 at every node, so
  // d_t is exactly zero.
  auto f_formula = [](const BigFloat& x, long p) {
    return BigFloat::of_long(1, p) / (x.rounded_to(p) - 1);
  };
  Evaluable f1{f_formula, {{one_pt, BigFloat(prec)}}};
  Evaluable f2{f_formula, {{one_pt, BigFloat(prec)}}};

  Evaluable ht_diff{[&](const BigFloat& x, long p) {
                      BigFloat d = f1(x, p) - f2(x, p);
                      BigFloat tv = t.eval(x, p);
                      return tv * tv * d * d;
                    },
                    {}};
  BigFloat dt2 = integrate(mu, ht_diff, ctx);

  // t f_1 is identically 1 while t f_2 is 1 - chi_{1}: the products differ
  // only at the atom, where they are pinned to their function-class values.
  Evaluable tf1{[](const BigFloat&, long p) { return BigFloat::of_long(1, p); },
                {{one_pt, BigFloat::of_long(1, prec)}}};
  Evaluable tf2{[](const BigFloat&, long p) { return BigFloat::of_long(1, p); },
                {{one_pt, BigFloat(prec)}}};
  Evaluable h1_diff{[&](const BigFloat& x, long p) {
                      BigFloat d = tf1(x, p) - tf2(x, p);
                      return d * d;
                    },
                    {}};
  BigFloat d1_sq = integrate(mu, h1_diff, ctx);

  CounterexampleResult out{sqrt(dt2), sqrt(d1_sq), d1_sq, w};
  return out;
}

}  // namespace gapdense
