#include "gapdense/measure.hpp"

#include <json.hpp>

#include <algorithm>
#include <utility>

#include "gapdense/errors.hpp"

namespace gapdense {

namespace {

// Structural validation (interval ordering, atom distinctness) runs at a
// fixed precision independent of any caller context.
constexpr long kValidatePrec = 320;

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<const char*> keys,
                  const char* where) {
  for (const char* k : keys) {
    if (!obj.contains(k)) {
      throw ConfigError(std::string("missing field '") + k + "' in " + where);
    }
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) {
      throw ConfigError("unknown field '" + it.key() + "' in " + where);
    }
  }
}

std::string real_string(const json& v, const char* where) {
  if (!v.is_string()) {
    throw ConfigError(std::string("real in ") + where +
                      " must be a decimal string");
  }
  std::string s = v.get<std::string>();
  BigFloat::of_string(s, 64);  // validates the literal
  return s;
}

}  // namespace

Measure::Measure(std::optional<ContinuousPart> continuous,
                 std::vector<MeasureAtom> atoms)
    : continuous_(std::move(continuous)), atoms_(std::move(atoms)) {
  if (!continuous_ && atoms_.empty()) {
    throw ConfigError("measure needs a continuous part or at least one atom");
  }
  if (continuous_) {
    BigFloat a = BigFloat::of_string(continuous_->lower, kValidatePrec);
    BigFloat b = BigFloat::of_string(continuous_->upper, kValidatePrec);
    if (!(a < b)) throw ConfigError("support interval must satisfy a < b");
  }
  for (size_t i = 0; i < atoms_.size(); ++i) {
    BigFloat w = BigFloat::of_string(atoms_[i].weight, kValidatePrec);
    if (!(w > BigFloat(kValidatePrec))) {
      throw ConfigError("atom weights must be positive");
    }
    BigFloat xi = BigFloat::of_string(atoms_[i].location, kValidatePrec);
    for (size_t j = 0; j < i; ++j) {
      if (xi == BigFloat::of_string(atoms_[j].location, kValidatePrec)) {
        throw ConfigError("atom locations must be pairwise distinct");
      }
    }
  }
}

Measure Measure::from_json_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("measure JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("measure JSON must be an object");
  require_keys(j, {"continuous", "atoms"}, "measure");

  std::optional<ContinuousPart> cont;
  const json& c = j["continuous"];
  if (!c.is_null()) {
    if (!c.is_object()) throw ConfigError("'continuous' must be an object");
    require_keys(c, {"support", "density"}, "continuous part");
    const json& sup = c["support"];
    if (!sup.is_array() || sup.size() != 2) {
      throw ConfigError("'support' must be a [lower, upper] pair");
    }
    if (!c["density"].is_string()) {
      throw ConfigError("'density' must be an expression string");
    }
    ContinuousPart part;
    part.lower = real_string(sup[0], "support");
    part.upper = real_string(sup[1], "support");
    part.density = DensityExpr::parse(c["density"].get<std::string>());
    cont = std::move(part);
  }

  std::vector<MeasureAtom> atoms;
  const json& arr = j["atoms"];
  if (!arr.is_array()) throw ConfigError("'atoms' must be an array");
  for (const json& a : arr) {
    if (!a.is_object()) throw ConfigError("atoms must be objects");
    require_keys(a, {"x", "w"}, "atom");
    atoms.push_back({real_string(a["x"], "atom"), real_string(a["w"], "atom")});
  }
  return Measure(std::move(cont), std::move(atoms));
}

std::string Measure::to_json_text() const {
  json j;
  if (continuous_) {
    j["continuous"] = {
        {"support", {continuous_->lower, continuous_->upper}},
        {"density", continuous_->density.text()},
    };
  } else {
    j["continuous"] = nullptr;
  }
  j["atoms"] = json::array();
  for (const auto& a : atoms_) {
    j["atoms"].push_back({{"x", a.location}, {"w", a.weight}});
  }
  return j.dump();
}

BigFloat Measure::lower(long prec) const {
  if (!continuous_) throw DomainError("measure has no continuous part");
  return BigFloat::of_string(continuous_->lower, prec);
}

BigFloat Measure::upper(long prec) const {
  if (!continuous_) throw DomainError("measure has no continuous part");
  return BigFloat::of_string(continuous_->upper, prec);
}

BigFloat Measure::atom_location(size_t i, long prec) const {
  return BigFloat::of_string(atoms_.at(i).location, prec);
}

BigFloat Measure::atom_weight(size_t i, long prec) const {
  return BigFloat::of_string(atoms_.at(i).weight, prec);
}

BigFloat Measure::total_mass(const PrecisionContext& ctx) const {
  return integrate(*this, Evaluable::constant("1"), ctx);
}

BigFloat Evaluable::operator()(const BigFloat& x, long prec) const {
  for (const auto& [where, value] : point_values) {
    if (x == where) return value.rounded_to(prec);
  }
  return fn(x, prec);
}

Evaluable Evaluable::constant(const std::string& literal) {
  return Evaluable{
      [literal](const BigFloat&, long prec) {
        return BigFloat::of_string(literal, prec);
      },
      {}};
}

Evaluable Evaluable::of_expr(DensityExpr e) {
  return Evaluable{[e = std::move(e)](const BigFloat& x, long prec) {
                     return e.eval(x, prec);
                   },
                   {}};
}

Evaluable Evaluable::of_polynomial(Polynomial p) {
  return Evaluable{[p = std::move(p)](const BigFloat& x, long prec) {
                     return p.eval(x, prec);
                   },
                   {}};
}

BigFloat QuadratureRule::weight_sum(long prec) const {
  BigFloat s(prec);
  for (const auto& w : weights) s += w;
  return s;
}

namespace {

struct GaussRef {
  std::vector<BigFloat> xi;  // ascending on (-1, 1)
  std::vector<BigFloat> wi;
};

// (P_m(x), P_m'(x)) by the Legendre three-term recurrence.
std::pair<BigFloat, BigFloat> legendre_pair(long m, const BigFloat& x,
                                            long prec) {
  BigFloat p0 = BigFloat::of_long(1, prec);
  BigFloat p1 = x.rounded_to(prec);
  if (m == 0) return {p0, BigFloat(prec)};
  for (long k = 2; k <= m; ++k) {
    BigFloat p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  // P_m' from (1-x^2) P_m'(x) = m (P_{m-1}(x) - x P_m(x))
  BigFloat one = BigFloat::of_long(1, prec);
  BigFloat dp = m * (p0 - x * p1) / (one - x * x);
  return {p1, dp};
}

// m-point Gauss-Legendre reference rule on [-1, 1]. Roots are computed for
// one half and mirrored so the rule is exactly symmetric.
GaussRef legendre_rule(long m, long prec) {
  long wp = prec + 32;
  GaussRef ref;
  ref.xi.assign(static_cast<size_t>(m), BigFloat(prec));
  ref.wi.assign(static_cast<size_t>(m), BigFloat(prec));

  BigFloat pi(wp);
  mpfr_const_pi(pi.raw(), MPFR_RNDN);
  BigFloat stop = BigFloat::two_pow(-(prec + 8), wp);

  long half = m / 2;
  for (long i = 0; i < half; ++i) {
    // i-th root from the right; positive half.
    BigFloat theta = pi * (4 * i + 3) / (4 * m + 2);
    BigFloat x(wp);
    mpfr_cos(x.raw(), theta.raw(), MPFR_RNDN);
    BigFloat dp(wp);
    for (int it = 0; it < 200; ++it) {
      auto [p, d] = legendre_pair(m, x, wp);
      dp = d;
      BigFloat dx = p / d;
      x -= dx;
      if (abs(dx) <= stop) break;
    }
    auto [p_unused, d_final] = legendre_pair(m, x, wp);
    (void)p_unused;
    BigFloat one = BigFloat::of_long(1, wp);
    BigFloat w = 2 / ((one - x * x) * d_final * d_final);
    ref.xi[static_cast<size_t>(m - 1 - i)] = x.rounded_to(prec);
    ref.xi[static_cast<size_t>(i)] = (-x).rounded_to(prec);
    ref.wi[static_cast<size_t>(m - 1 - i)] = w.rounded_to(prec);
    ref.wi[static_cast<size_t>(i)] = w.rounded_to(prec);
  }
  if (m % 2 == 1) {
    BigFloat zero(wp);
    auto [p0, d0] = legendre_pair(m, zero, wp);
    (void)p0;
    ref.xi[static_cast<size_t>(half)] = BigFloat(prec);
    ref.wi[static_cast<size_t>(half)] = (2 / (d0 * d0)).rounded_to(prec);
  }
  return ref;
}

long points_for_degree(long degree_hint, const DensityExpr& density) {
  long db = density.polynomial_degree_bound();
  if (db < 0 || db > 24) db = 24;
  long m = (degree_hint + db) / 2 + 6;
  if (m < 24) m = 24;
  if (m > 256) m = 256;
  return m;
}

// Shared panel-doubling engine. Runs fn at every node of each refinement
// level and accepts once the accumulated vector stops moving. When out_rule
// is non-null, the accepted level's nodes and weights are stored there.
std::vector<BigFloat> adaptive_continuous(
    const ContinuousPart& cont, const PrecisionContext& ctx, long m,
    const std::function<std::vector<BigFloat>(const BigFloat& x, long prec)>&
        fn,
    size_t dim, QuadratureRule* out_rule) {
  const long prec = ctx.mantissa_bits();
  const BigFloat a = BigFloat::of_string(cont.lower, prec);
  const BigFloat b = BigFloat::of_string(cont.upper, prec);
  const BigFloat len = b - a;
  GaussRef ref = legendre_rule(m, prec);

  constexpr int kMaxLevels = 20;
  std::vector<BigFloat> prev;
  for (int level = 0; level <= kMaxLevels; ++level) {
    long panels = 1L << level;
    std::vector<BigFloat> acc(dim, BigFloat(prec));
    std::vector<BigFloat> nodes, weights;
    if (out_rule) {
      nodes.reserve(static_cast<size_t>(m * panels));
      weights.reserve(static_cast<size_t>(m * panels));
    }
    for (long p = 0; p < panels; ++p) {
      BigFloat half = len / (2 * panels);
      BigFloat mid = a + len * (2 * p + 1) / (2 * panels);
      for (long i = 0; i < m; ++i) {
        BigFloat x = mid + half * ref.xi[static_cast<size_t>(i)];
        BigFloat dens = cont.density.eval(x, prec);
        if (!dens.is_finite()) {
          throw QuadratureError("density is not finite at a quadrature node");
        }
        if (dens.sgn() < 0) {
          throw QuadratureError("negative density detected at a node");
        }
        BigFloat w = half * ref.wi[static_cast<size_t>(i)] * dens;
        std::vector<BigFloat> vals = fn(x, prec);
        for (size_t d = 0; d < dim; ++d) {
          if (!vals[d].is_finite()) {
            throw QuadratureError("non-finite integrand value");
          }
          acc[d] += w * vals[d];
        }
        if (out_rule) {
          nodes.push_back(x);
          weights.push_back(w);
        }
      }
    }
    if (!prev.empty()) {
      bool stable = true;
      for (size_t d = 0; d < dim && stable; ++d) {
        BigFloat scale = max(BigFloat::of_long(1, prec), abs(acc[d]));
        stable = abs(acc[d] - prev[d]) <= ctx.rel_tol() * scale;
      }
      if (stable) {
        if (out_rule) {
          out_rule->nodes = std::move(nodes);
          out_rule->weights = std::move(weights);
          out_rule->level = level;
        }
        return acc;
      }
    }
    prev = std::move(acc);
  }
  throw QuadratureError(
      "quadrature failed to stabilize within 20 refinement levels");
}

std::vector<BigFloat> power_values(const BigFloat& x, long prec, long n_max) {
  std::vector<BigFloat> v;
  v.reserve(static_cast<size_t>(n_max + 1));
  BigFloat p = BigFloat::of_long(1, prec);
  v.push_back(p);
  for (long k = 1; k <= n_max; ++k) {
    p *= x;
    v.push_back(p);
  }
  return v;
}

}  // namespace

QuadratureRule build_quadrature(const BigFloat& lo, const BigFloat& hi,
                                const DensityExpr& density,
                                const PrecisionContext& ctx,
                                long stabilize_degree) {
  if (!(lo < hi)) throw DomainError("quadrature interval must satisfy a < b");
  if (stabilize_degree < 0) stabilize_degree = 0;
  ContinuousPart cont{lo.exact_decimal(), hi.exact_decimal(), density};
  long m = points_for_degree(stabilize_degree, density);
  QuadratureRule rule;
  adaptive_continuous(
      cont, ctx, m,
      [&](const BigFloat& x, long prec) {
        return power_values(x, prec, stabilize_degree);
      },
      static_cast<size_t>(stabilize_degree + 1), &rule);
  if (!(rule.weight_sum(ctx.mantissa_bits()) > ctx.zero())) {
    throw QuadratureError("measure has non-positive continuous mass");
  }
  return rule;
}

std::vector<BigFloat> integrate_many(
    const Measure& mu,
    const std::function<std::vector<BigFloat>(const BigFloat& x, long prec)>&
        values,
    std::size_t dim, long degree_hint, const PrecisionContext& ctx) {
  const long prec = ctx.mantissa_bits();
  std::vector<BigFloat> atom_part(dim, BigFloat(prec));
  for (size_t i = 0; i < mu.atoms().size(); ++i) {
    BigFloat loc = mu.atom_location(i, prec);
    BigFloat w = mu.atom_weight(i, prec);
    std::vector<BigFloat> vals = values(loc, prec);
    for (size_t d = 0; d < dim; ++d) {
      if (!vals[d].is_finite()) {
        throw QuadratureError("non-finite integrand value at an atom");
      }
      atom_part[d] += w * vals[d];
    }
  }
  if (!mu.continuous()) return atom_part;

  long m = points_for_degree(degree_hint, mu.continuous()->density);
  std::vector<BigFloat> cont = adaptive_continuous(
      *mu.continuous(), ctx, m, values, dim, nullptr);
  for (size_t d = 0; d < dim; ++d) cont[d] += atom_part[d];
  return cont;
}

MomentSequence moments(const Measure& mu, long n_max,
                       const PrecisionContext& ctx) {
  if (n_max < 0) throw DomainError("moments need n_max >= 0");
  auto vals = integrate_many(
      mu,
      [&](const BigFloat& x, long prec) {
        return power_values(x, prec, n_max);
      },
      static_cast<size_t>(n_max + 1), n_max, ctx);
  return MomentSequence{std::move(vals)};
}

BigFloat integrate(const Measure& mu, const Evaluable& f,
                   const PrecisionContext& ctx) {
  auto vals = integrate_many(
      mu,
      [&](const BigFloat& x, long prec) {
        return std::vector<BigFloat>{f(x, prec)};
      },
      1, 32, ctx);
  return vals[0];
}

}  // namespace gapdense
