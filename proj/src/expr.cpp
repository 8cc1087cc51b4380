#include "ars2d/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <system_error>

namespace ars2d {

struct Expr::Node {
  Kind kind = Kind::Number;
  double value = 0.0;
  int exponent = 0;
  // Leaf nodes leave these null.
  Expr a{std::shared_ptr<const Node>()};
  Expr b{std::shared_ptr<const Node>()};
};

namespace {

std::shared_ptr<const Expr::Node> zero_node() {
  static const auto node = std::make_shared<const Expr::Node>();
  return node;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

const char* function_name(Expr::Kind k) {
  switch (k) {
    case Expr::Kind::Sin: return "sin";
    case Expr::Kind::Cos: return "cos";
    case Expr::Kind::Exp: return "exp";
    case Expr::Kind::Sqrt: return "sqrt";
    case Expr::Kind::Atan: return "atan";
    default: return "?";
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction and access

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::number(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::pi() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pi;
  return Expr(std::move(n));
}

Expr Expr::var(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = v == Var::X ? Kind::VarX : Kind::VarY;
  return Expr(std::move(n));
}

Expr Expr::binary(Kind kind, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->a = std::move(lhs);
  n->b = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::unary(Kind kind, Expr operand) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->a = std::move(operand);
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->a = std::move(base);
  n->exponent = exponent;
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
int Expr::exponent() const { return node_->exponent; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }
const Expr& Expr::operand() const { return node_->a; }

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Number:
      return value() == other.value();
    case Kind::Pi:
    case Kind::VarX:
    case Kind::VarY:
      return true;
    case Kind::Pow:
      return exponent() == other.exponent() && lhs() == other.lhs();
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
      return lhs() == other.lhs() && rhs() == other.rhs();
    default:
      return operand() == other.operand();
  }
}

// ---------------------------------------------------------------------------
// Evaluation

double Expr::eval(double x, double y) const {
  double r = 0.0;
  switch (kind()) {
    case Kind::Number: return value();
    case Kind::Pi: return std::numbers::pi;
    case Kind::VarX: return x;
    case Kind::VarY: return y;
    case Kind::Add: r = lhs().eval(x, y) + rhs().eval(x, y); break;
    case Kind::Sub: r = lhs().eval(x, y) - rhs().eval(x, y); break;
    case Kind::Mul: r = lhs().eval(x, y) * rhs().eval(x, y); break;
    case Kind::Div: {
      const double den = rhs().eval(x, y);
      if (den == 0.0) throw DomainError("division by zero", to_string());
      r = lhs().eval(x, y) / den;
      break;
    }
    case Kind::Pow: {
      const double base = lhs().eval(x, y);
      if (base == 0.0 && exponent() < 0) throw DomainError("negative power of zero", to_string());
      r = std::pow(base, exponent());
      break;
    }
    case Kind::Neg: return -operand().eval(x, y);
    case Kind::Sin: r = std::sin(operand().eval(x, y)); break;
    case Kind::Cos: r = std::cos(operand().eval(x, y)); break;
    case Kind::Exp: r = std::exp(operand().eval(x, y)); break;
    case Kind::Sqrt: {
      const double arg = operand().eval(x, y);
      if (arg < 0.0) throw DomainError("square root of a negative number", to_string());
      r = std::sqrt(arg);
      break;
    }
    case Kind::Atan: r = std::atan(operand().eval(x, y)); break;
  }
  if (!std::isfinite(r)) throw DomainError("non-finite value", to_string());
  return r;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength of the printed form of a node.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Neg:
      return 3;
    case Expr::Kind::Pow:
      return 4;
    case Expr::Kind::Number:
      return e.value() < 0 || std::signbit(e.value()) ? 0 : 5;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, std::fabs(v));
  std::string digits(buf, res.ptr);
  if (std::signbit(v)) return "(-" + digits + ")";
  return digits;
}

void print(const Expr& e, int min_prec, std::string& out) {
  const int prec = precedence(e);
  const bool wrap = prec < min_prec && !(e.is_number() && std::signbit(e.value()));
  if (wrap) out += '(';
  switch (e.kind()) {
    case Expr::Kind::Number: out += format_number(e.value()); break;
    case Expr::Kind::Pi: out += "pi"; break;
    case Expr::Kind::VarX: out += 'x'; break;
    case Expr::Kind::VarY: out += 'y'; break;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      print(e.lhs(), 1, out);
      out += e.kind() == Expr::Kind::Add ? " + " : " - ";
      print(e.rhs(), 2, out);
      break;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      print(e.lhs(), 2, out);
      out += e.kind() == Expr::Kind::Mul ? "*" : "/";
      print(e.rhs(), 3, out);
      break;
    case Expr::Kind::Neg:
      out += '-';
      print(e.operand(), 3, out);
      break;
    case Expr::Kind::Pow:
      print(e.lhs(), 5, out);
      out += '^';
      out += std::to_string(e.exponent());
      break;
    default:
      out += function_name(e.kind());
      out += '(';
      print(e.operand(), 0, out);
      out += ')';
      break;
  }
  if (wrap) out += ')';
}

}  // namespace

std::string Expr::to_string() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Folding constructors

namespace {

Expr literal_or(double v, Expr fallback) {
  if (std::isfinite(v)) return Expr::number(v);
  return fallback;
}

}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) {
    return literal_or(a.value() + b.value(), Expr::binary(Expr::Kind::Add, a, b));
  }
  if (a.is_number(0.0)) return b;
  if (b.is_number(0.0)) return a;
  return Expr::binary(Expr::Kind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) {
    return literal_or(a.value() - b.value(), Expr::binary(Expr::Kind::Sub, a, b));
  }
  if (b.is_number(0.0)) return a;
  if (a.is_number(0.0)) return -b;
  return Expr::binary(Expr::Kind::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) {
    return literal_or(a.value() * b.value(), Expr::binary(Expr::Kind::Mul, a, b));
  }
  if (a.is_number(0.0) || b.is_number(0.0)) return Expr::number(0.0);
  if (a.is_number(1.0)) return b;
  if (b.is_number(1.0)) return a;
  if (a.is_number(-1.0)) return -b;
  if (b.is_number(-1.0)) return -a;
  return Expr::binary(Expr::Kind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number() && b.value() != 0.0) {
    return literal_or(a.value() / b.value(), Expr::binary(Expr::Kind::Div, a, b));
  }
  if (b.is_number(1.0)) return a;
  if (a.is_number(0.0) && !b.is_number(0.0)) return Expr::number(0.0);
  return Expr::binary(Expr::Kind::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_number()) return Expr::number(-a.value() + 0.0);
  if (a.kind() == Expr::Kind::Neg) return a.operand();
  return Expr::unary(Expr::Kind::Neg, a);
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0) return Expr::number(1.0);
  if (exponent == 1) return base;
  if (base.is_number() && !(base.value() == 0.0 && exponent < 0)) {
    return literal_or(std::pow(base.value(), exponent), Expr::power(base, exponent));
  }
  return Expr::power(base, exponent);
}

Expr sin(const Expr& a) { return a.is_number(0.0) ? Expr::number(0.0) : Expr::unary(Expr::Kind::Sin, a); }
Expr cos(const Expr& a) { return a.is_number(0.0) ? Expr::number(1.0) : Expr::unary(Expr::Kind::Cos, a); }
Expr exp(const Expr& a) { return a.is_number(0.0) ? Expr::number(1.0) : Expr::unary(Expr::Kind::Exp, a); }
Expr sqrt(const Expr& a) { return Expr::unary(Expr::Kind::Sqrt, a); }
Expr atan(const Expr& a) { return a.is_number(0.0) ? Expr::number(0.0) : Expr::unary(Expr::Kind::Atan, a); }

Expr fold(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Number:
    case K::Pi:
    case K::VarX:
    case K::VarY:
      return e;
    case K::Add: return fold(e.lhs()) + fold(e.rhs());
    case K::Sub: return fold(e.lhs()) - fold(e.rhs());
    case K::Mul: return fold(e.lhs()) * fold(e.rhs());
    case K::Div: return fold(e.lhs()) / fold(e.rhs());
    case K::Pow: return pow(fold(e.lhs()), e.exponent());
    case K::Neg: return -fold(e.operand());
    case K::Sin: return sin(fold(e.operand()));
    case K::Cos: return cos(fold(e.operand()));
    case K::Exp: return exp(fold(e.operand()));
    case K::Sqrt: return sqrt(fold(e.operand()));
    case K::Atan: return atan(fold(e.operand()));
  }
  return e;
}

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e, Var v) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Number:
    case K::Pi:
      return Expr::number(0.0);
    case K::VarX: return Expr::number(v == Var::X ? 1.0 : 0.0);
    case K::VarY: return Expr::number(v == Var::Y ? 1.0 : 0.0);
    case K::Add: return differentiate(e.lhs(), v) + differentiate(e.rhs(), v);
    case K::Sub: return differentiate(e.lhs(), v) - differentiate(e.rhs(), v);
    case K::Mul: {
      const Expr& a = e.lhs();
      const Expr& b = e.rhs();
      return differentiate(a, v) * b + a * differentiate(b, v);
    }
    case K::Div: {
      const Expr& a = e.lhs();
      const Expr& b = e.rhs();
      return (differentiate(a, v) * b - a * differentiate(b, v)) / pow(b, 2);
    }
    case K::Pow: {
      const int n = e.exponent();
      return Expr::number(n) * pow(e.lhs(), n - 1) * differentiate(e.lhs(), v);
    }
    case K::Neg: return -differentiate(e.operand(), v);
    case K::Sin: return differentiate(e.operand(), v) * cos(e.operand());
    case K::Cos: return -(differentiate(e.operand(), v) * sin(e.operand()));
    case K::Exp: return differentiate(e.operand(), v) * e;
    case K::Sqrt: return differentiate(e.operand(), v) / (Expr::number(2.0) * e);
    case K::Atan:
      return differentiate(e.operand(), v) / (Expr::number(1.0) + pow(e.operand(), 2));
  }
  return Expr::number(0.0);
}

// ---------------------------------------------------------------------------
// Parsing

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
    : Error("parse error at offset " + std::to_string(offset) + ": " + what +
            (expected.empty() ? std::string() : " (expected " + join(expected) + ")")),
      offset_(offset),
      expected_(std::move(expected)) {}

DomainError::DomainError(const std::string& reason, std::string subexpression)
    : Error(reason + " in '" + subexpression + "'"), subexpression_(std::move(subexpression)) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_sum();
    skip_space();
    if (pos_ != text_.size()) {
      fail({"operator", "end of input"}, "unexpected '" + std::string(1, text_[pos_]) + "'");
    }
    return e;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& what) const {
    throw ParseError(pos_, std::move(expected), what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Expr::Kind::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = Expr::binary(Expr::Kind::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Expr::Kind::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary(Expr::Kind::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::unary(Expr::Kind::Neg, parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    while (accept('^')) {
      skip_space();
      const bool negative = accept('-');
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail({"integer exponent"}, "exponent must be an integer literal");
      if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
        fail({"integer exponent"}, "exponent must be an integer literal");
      }
      int value = 0;
      auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
      if (res.ec != std::errc()) {
        pos_ = start;
        fail({"integer exponent"}, "exponent out of range");
      }
      base = Expr::power(base, negative ? -value : value);
    }
    return base;
  }

  Expr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail(expression_start(), "expected expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_sum();
      if (!accept(')')) fail({")"}, "unbalanced parenthesis");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail(expression_start(), "expected expression");
  }

  static std::vector<std::string> expression_start() { return {"number", "identifier", "(", "-"}; }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto is_digit = [&](std::size_t i) {
      return i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]));
    };
    while (is_digit(pos_)) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (is_digit(pos_)) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (is_digit(p)) {
        pos_ = p;
        while (is_digit(pos_)) ++pos_;
      }
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
      pos_ = start;
      fail({"number"}, "malformed number");
    }
    return Expr::number(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return Expr::var(Var::X);
    if (name == "y") return Expr::var(Var::Y);
    if (name == "pi") return Expr::pi();

    Expr::Kind fn;
    if (name == "sin") {
      fn = Expr::Kind::Sin;
    } else if (name == "cos") {
      fn = Expr::Kind::Cos;
    } else if (name == "exp") {
      fn = Expr::Kind::Exp;
    } else if (name == "sqrt") {
      fn = Expr::Kind::Sqrt;
    } else if (name == "atan") {
      fn = Expr::Kind::Atan;
    } else {
      pos_ = start;
      fail({"x", "y", "pi", "sin", "cos", "exp", "sqrt", "atan"},
           "unknown identifier '" + std::string(name) + "'");
    }
    if (!accept('(')) fail({"("}, "expected '(' after function name");
    Expr arg = parse_sum();
    if (!accept(')')) fail({")"}, "unbalanced parenthesis");
    return Expr::unary(fn, arg);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace ars2d
