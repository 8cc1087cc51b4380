#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ars2d/error.hpp"

namespace ars2d {

enum class Var { X, Y };

/// Immutable expression tree over the variables x and y.
///
/// Nodes are shared, so copying an Expr is cheap and safe across threads.
/// The grammar is closed under differentiation: literals, `pi`, `x`, `y`,
/// the binary operators + - * /, integer powers, unary minus and the
/// functions sin, cos, exp, sqrt, atan.
class Expr {
 public:
  enum class Kind {
    Number,
    Pi,
    VarX,
    VarY,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Neg,
    Sin,
    Cos,
    Exp,
    Sqrt,
    Atan,
  };

  /// The literal 0.
  Expr();

  static Expr number(double value);
  static Expr pi();
  static Expr var(Var v);

  // Builders without folding; the parser uses these so that the tree
  // mirrors the source text.
  static Expr binary(Kind kind, Expr lhs, Expr rhs);
  static Expr unary(Kind kind, Expr operand);
  static Expr power(Expr base, int exponent);

  Kind kind() const;
  double value() const;  // Number only
  int exponent() const;  // Pow only
  const Expr& lhs() const;
  const Expr& rhs() const;
  const Expr& operand() const;  // Neg and functions

  bool is_number() const { return kind() == Kind::Number; }
  bool is_number(double v) const { return is_number() && value() == v; }

  double eval(double x, double y) const;

  /// Structural equality.
  bool operator==(const Expr& other) const;

  std::string to_string() const;

  struct Node;  // opaque

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

// Folding constructors: collapse literal arithmetic and the neutral/absorbing
// elements 0 and 1. They never reorder or factor.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, int exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr sqrt(const Expr& a);
Expr atan(const Expr& a);

Expr parse(std::string_view text);
Expr differentiate(const Expr& e, Var v);

/// Applies the folding constructors bottom-up.
Expr fold(const Expr& e);

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what);
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class DomainError : public Error {
 public:
  DomainError(const std::string& reason, std::string subexpression);
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

}  // namespace ars2d
