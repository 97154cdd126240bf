#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "gapdense/bigfloat.hpp"

namespace gapdense {

// Parsed expression over the density grammar: decimal literals, the variable
// `x`, binary + - * / ^ (with `^` right-associative and restricted to integer
// exponents), unary minus, exp(...), sqrt(...), and parentheses.
//
// The grammar is deliberately tiny so evaluation is deterministic: literals
// are stored as text and converted at the evaluation precision.
class DensityExpr {
 public:
  DensityExpr() = default;

  static DensityExpr parse(std::string_view text);

  BigFloat eval(const BigFloat& x, long prec) const;

  // Degree when the expression is a polynomial in x; -1 otherwise.
  long polynomial_degree_bound() const;

  const std::string& text() const { return text_; }
  bool empty() const { return root_ == nullptr; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace gapdense
