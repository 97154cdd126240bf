#include "gapdense/density.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>
#include <vector>

#include "gapdense/errors.hpp"

namespace gapdense {

struct DensityExpr::Node {
  enum class Kind { Literal, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Sqrt };
  Kind kind;
  std::shared_ptr<const Node> a, b;
  std::string literal;
  long exponent = 0;
};

namespace {

using Node = DensityExpr::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

struct Token {
  enum Kind { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind;
  std::string text;
  size_t offset;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i])))
        ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        size_t frac = 0;
        while (i < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[i]))) {
          ++i;
          ++frac;
        }
        if (frac == 0) throw SyntaxError("digits expected after '.'", i);
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        size_t save = i;
        ++i;
        if (i < src.size() && (src[i] == '+' || src[i] == '-')) ++i;
        size_t ed = 0;
        while (i < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[i]))) {
          ++i;
          ++ed;
        }
        if (ed == 0) i = save;  // not an exponent; 'e' belongs elsewhere
      }
      out.push_back({Token::Num, std::string(src.substr(start, i - start)),
                     start});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      while (i < src.size() &&
             std::isalpha(static_cast<unsigned char>(src[i])))
        ++i;
      out.push_back({Token::Ident, std::string(src.substr(start, i - start)),
                     start});
      continue;
    }
    ++i;
    switch (c) {
      case '+': out.push_back({Token::Plus, "+", start}); break;
      case '-': out.push_back({Token::Minus, "-", start}); break;
      case '*': out.push_back({Token::Star, "*", start}); break;
      case '/': out.push_back({Token::Slash, "/", start}); break;
      case '^': out.push_back({Token::Caret, "^", start}); break;
      case '(': out.push_back({Token::LParen, "(", start}); break;
      case ')': out.push_back({Token::RParen, ")", start}); break;
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'",
                          start);
    }
  }
  out.push_back({Token::End, "", src.size()});
  return out;
}

// Folds literal arithmetic so exponents like -2 or 2^3 resolve to integers.
std::optional<long> fold_integer(const NodePtr& n) {
  switch (n->kind) {
    case Node::Kind::Literal: {
      for (char c : n->literal) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
      }
      if (n->literal.size() > 9) return std::nullopt;
      return std::atol(n->literal.c_str());
    }
    case Node::Kind::Neg: {
      auto v = fold_integer(n->a);
      if (!v) return std::nullopt;
      return -*v;
    }
    case Node::Kind::Pow: {
      auto v = fold_integer(n->a);
      if (!v || n->exponent < 0 || n->exponent > 30) return std::nullopt;
      long r = 1;
      for (long i = 0; i < n->exponent; ++i) r *= *v;
      return r;
    }
    default:
      return std::nullopt;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  NodePtr run() {
    NodePtr e = expr();
    expect(Token::End, "end of input");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  void expect(Token::Kind k, const char* what) {
    if (peek().kind != k) {
      throw SyntaxError(std::string("expected ") + what, peek().offset);
    }
    ++pos_;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (peek().kind == Token::Plus || peek().kind == Token::Minus) {
      Token op = take();
      NodePtr rhs = term();
      lhs = make(op.kind == Token::Plus ? Node::Kind::Add : Node::Kind::Sub,
                 lhs, rhs);
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (peek().kind == Token::Star || peek().kind == Token::Slash) {
      Token op = take();
      NodePtr rhs = unary();
      lhs = make(op.kind == Token::Star ? Node::Kind::Mul : Node::Kind::Div,
                 lhs, rhs);
    }
    return lhs;
  }

  NodePtr unary() {
    if (peek().kind == Token::Minus) {
      take();
      return make(Node::Kind::Neg, unary());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (peek().kind != Token::Caret) return base;
    Token caret = take();
    NodePtr rhs =
        peek().kind == Token::Minus ? (take(), make(Node::Kind::Neg, power()))
                                    : power();  // right-associative
    auto e = fold_integer(rhs);
    if (!e) throw SyntaxError("exponent must be an integer", caret.offset);
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Pow;
    n->a = base;
    n->exponent = *e;
    return n;
  }

  NodePtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Num: {
        Token num = take();
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Literal;
        n->literal = num.text;
        return n;
      }
      case Token::Ident: {
        Token id = take();
        if (id.text == "x") {
          return make(Node::Kind::Var);
        }
        if (id.text == "exp" || id.text == "sqrt") {
          expect(Token::LParen, "'('");
          NodePtr arg = expr();
          expect(Token::RParen, "')'");
          return make(id.text == "exp" ? Node::Kind::Exp : Node::Kind::Sqrt,
                      arg);
        }
        throw UnknownIdentifierError(id.text, id.offset);
      }
      case Token::LParen: {
        take();
        NodePtr e = expr();
        expect(Token::RParen, "')'");
        return e;
      }
      default:
        throw SyntaxError("expected a value", t.offset);
    }
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

BigFloat eval_node(const Node& n, const BigFloat& x, long prec) {
  switch (n.kind) {
    case Node::Kind::Literal:
      return BigFloat::of_string(n.literal, prec);
    case Node::Kind::Var:
      return x.rounded_to(prec);
    case Node::Kind::Add:
      return eval_node(*n.a, x, prec) + eval_node(*n.b, x, prec);
    case Node::Kind::Sub:
      return eval_node(*n.a, x, prec) - eval_node(*n.b, x, prec);
    case Node::Kind::Mul:
      return eval_node(*n.a, x, prec) * eval_node(*n.b, x, prec);
    case Node::Kind::Div:
      return eval_node(*n.a, x, prec) / eval_node(*n.b, x, prec);
    case Node::Kind::Neg:
      return -eval_node(*n.a, x, prec);
    case Node::Kind::Pow:
      return pow_si(eval_node(*n.a, x, prec), n.exponent);
    case Node::Kind::Exp:
      return exp(eval_node(*n.a, x, prec));
    case Node::Kind::Sqrt:
      return sqrt(eval_node(*n.a, x, prec));
  }
  throw Error("unreachable");
}

long degree_bound(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Literal:
      return 0;
    case Node::Kind::Var:
      return 1;
    case Node::Kind::Add:
    case Node::Kind::Sub: {
      long a = degree_bound(*n.a), b = degree_bound(*n.b);
      return (a < 0 || b < 0) ? -1 : (a > b ? a : b);
    }
    case Node::Kind::Mul: {
      long a = degree_bound(*n.a), b = degree_bound(*n.b);
      return (a < 0 || b < 0) ? -1 : a + b;
    }
    case Node::Kind::Div: {
      long a = degree_bound(*n.a), b = degree_bound(*n.b);
      return (a < 0 || b != 0) ? -1 : a;
    }
    case Node::Kind::Neg:
      return degree_bound(*n.a);
    case Node::Kind::Pow: {
      long a = degree_bound(*n.a);
      if (a < 0) return -1;
      if (n.exponent < 0) return a == 0 ? 0 : -1;
      return a * n.exponent;
    }
    case Node::Kind::Exp:
    case Node::Kind::Sqrt:
      return degree_bound(*n.a) == 0 ? 0 : -1;
  }
  return -1;
}

}  // namespace

DensityExpr DensityExpr::parse(std::string_view text) {
  if (text.empty()) throw SyntaxError("empty expression", 0);
  DensityExpr e;
  e.root_ = Parser(text).run();
  e.text_ = std::string(text);
  return e;
}

BigFloat DensityExpr::eval(const BigFloat& x, long prec) const {
  if (!root_) throw DomainError("evaluating an empty expression");
  return eval_node(*root_, x, prec);
}

long DensityExpr::polynomial_degree_bound() const {
  if (!root_) return -1;
  return degree_bound(*root_);
}

}  // namespace gapdense
