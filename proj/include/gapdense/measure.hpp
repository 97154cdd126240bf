#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gapdense/bigfloat.hpp"
#include "gapdense/density.hpp"
#include "gapdense/polynomial.hpp"
#include "gapdense/precision.hpp"

namespace gapdense {

class TFactor;

// All reals attached to a measure are kept as decimal strings and converted
// at the precision of the computation that consumes them, so one measure can
// serve several working precisions without re-parsing files.
struct ContinuousPart {
  std::string lower;
  std::string upper;
  DensityExpr density;
};

struct MeasureAtom {
  std::string location;
  std::string weight;
};

// Finite positive measure: an optional density on a compact interval plus
// finitely many atoms. Immutable after construction.
class Measure {
 public:
  Measure(std::optional<ContinuousPart> continuous,
          std::vector<MeasureAtom> atoms);

  static Measure from_json_text(std::string_view text);
  std::string to_json_text() const;

  bool infinite_support() const { return continuous_.has_value(); }
  const std::optional<ContinuousPart>& continuous() const {
    return continuous_;
  }
  const std::vector<MeasureAtom>& atoms() const { return atoms_; }

  BigFloat lower(long prec) const;
  BigFloat upper(long prec) const;
  BigFloat atom_location(size_t i, long prec) const;
  BigFloat atom_weight(size_t i, long prec) const;

  BigFloat total_mass(const PrecisionContext& ctx) const;

 private:
  std::optional<ContinuousPart> continuous_;
  std::vector<MeasureAtom> atoms_;
};

// Pointwise-evaluable integrand. Values at specific points can be pinned via
// the override table; that is how functions differing only on a measure atom
// are told apart.
struct Evaluable {
  std::function<BigFloat(const BigFloat& x, long prec)> fn;
  std::vector<std::pair<BigFloat, BigFloat>> point_values;

  BigFloat operator()(const BigFloat& x, long prec) const;

  static Evaluable constant(const std::string& literal);
  static Evaluable of_expr(DensityExpr e);
  static Evaluable of_polynomial(Polynomial p);
};

// Nodes carry the density folded into the weights, so integrating f against
// the continuous part is a plain weighted sum of f values.
struct QuadratureRule {
  std::vector<BigFloat> nodes;
  std::vector<BigFloat> weights;
  int level = 0;  // panel-doubling refinements used

  BigFloat weight_sum(long prec) const;
};

// Composite Gauss-Legendre rule, panels doubled until the monomial moments
// 0..stabilize_degree are stable to ctx.rel_tol between refinement levels.
QuadratureRule build_quadrature(const BigFloat& lo, const BigFloat& hi,
                                const DensityExpr& density,
                                const PrecisionContext& ctx,
                                long stabilize_degree = 32);

struct MomentSequence {
  std::vector<BigFloat> values;  // values[k] = integral of x^k
};

MomentSequence moments(const Measure& mu, long n_max,
                       const PrecisionContext& ctx);

BigFloat integrate(const Measure& mu, const Evaluable& f,
                   const PrecisionContext& ctx);

// Joint adaptive integration of `dim` integrands sharing one rule; the rule
// is refined until every component is stable. Atom contributions included.
std::vector<BigFloat> integrate_many(
    const Measure& mu,
    const std::function<std::vector<BigFloat>(const BigFloat& x, long prec)>&
        values,
    std::size_t dim, long degree_hint, const PrecisionContext& ctx);

// dnu = t(x)^2 dmu. Throws AtomAtZeroOfT when an atom of mu sits on a zero
// of t (including 0 when t has a positive power of x).
Measure weighted_measure(const Measure& mu, const TFactor& t,
                         const PrecisionContext& ctx);

}  // namespace gapdense
