#include "radsob/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "radsob/error.hpp"

namespace radsob {

namespace {

Jet add(Jet a, Jet b) { return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2}; }
Jet sub(Jet a, Jet b) { return {a.value - b.value, a.d1 - b.d1, a.d2 - b.d2}; }
Jet mul(Jet a, Jet b) {
  return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
          a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2};
}
Jet div(Jet a, Jet b) {
  const double q = a.value / b.value;
  const double q1 = (a.d1 - q * b.d1) / b.value;
  const double q2 = (a.d2 - 2.0 * q1 * b.d1 - q * b.d2) / b.value;
  return {q, q1, q2};
}
// g(u) given g, g', g'' at u.
Jet chain(Jet u, double g0, double g1, double g2) {
  return {g0, g1 * u.d1, g2 * u.d1 * u.d1 + g1 * u.d2};
}

}  // namespace

struct Expression::Node {
  enum class Op { constant, variable, add, sub, mul, div, neg, pow, call } op = Op::constant;
  double constant = 0.0;
  std::string name;
  std::vector<std::shared_ptr<const Node>> args;

  Jet eval(double r) const {
    switch (op) {
      case Op::constant: return {constant, 0.0, 0.0};
      case Op::variable: return {r, 1.0, 0.0};
      case Op::add: return add(args[0]->eval(r), args[1]->eval(r));
      case Op::sub: return sub(args[0]->eval(r), args[1]->eval(r));
      case Op::mul: return mul(args[0]->eval(r), args[1]->eval(r));
      case Op::div: return div(args[0]->eval(r), args[1]->eval(r));
      case Op::neg: {
        Jet a = args[0]->eval(r);
        return {-a.value, -a.d1, -a.d2};
      }
      case Op::pow: return power(args[0]->eval(r), args[1]->eval(r));
      case Op::call: return call(r);
    }
    return {};
  }

  static Jet power(Jet u, Jet w) {
    if (w.d1 == 0.0 && w.d2 == 0.0) {
      const double p = w.value;
      if (p == 0.0) return {1.0, 0.0, 0.0};
      if (p == 1.0) return u;
      if (p == 2.0) return mul(u, u);
      return chain(u, std::pow(u.value, p), p * std::pow(u.value, p - 1.0),
                   p * (p - 1.0) * std::pow(u.value, p - 2.0));
    }
    // u^w = exp(w log u)
    const double lu = std::log(u.value);
    Jet logu = chain(u, lu, 1.0 / u.value, -1.0 / (u.value * u.value));
    Jet e = mul(w, logu);
    const double ev = std::exp(e.value);
    return chain(e, ev, ev, ev);
  }

  Jet call(double r) const {
    const Jet u = args[0]->eval(r);
    const double x = u.value;
    if (name == "sinh") return chain(u, std::sinh(x), std::cosh(x), std::sinh(x));
    if (name == "cosh") return chain(u, std::cosh(x), std::sinh(x), std::cosh(x));
    if (name == "tanh") {
      const double t = std::tanh(x), s2 = 1.0 - t * t;
      return chain(u, t, s2, -2.0 * t * s2);
    }
    if (name == "exp") return chain(u, std::exp(x), std::exp(x), std::exp(x));
    if (name == "log") return chain(u, std::log(x), 1.0 / x, -1.0 / (x * x));
    if (name == "sqrt") {
      const double s = std::sqrt(x);
      return chain(u, s, 0.5 / s, -0.25 / (s * x));
    }
    if (name == "sin") return chain(u, std::sin(x), std::cos(x), -std::sin(x));
    if (name == "cos") return chain(u, std::cos(x), -std::sin(x), -std::cos(x));
    return power(u, args[1]->eval(r));  // pow
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::parse, "formula: " + msg + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  static NodePtr binary(Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->args = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) lhs = binary(Op::add, lhs, term());
      else if (accept('-')) lhs = binary(Op::sub, lhs, term());
      else return lhs;
    }
  }
  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) lhs = binary(Op::mul, lhs, unary());
      else if (accept('/')) lhs = binary(Op::div, lhs, unary());
      else return lhs;
    }
  }
  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Expression::Node>();
      n->op = Op::neg;
      n->args = {unary()};
      return n;
    }
    if (accept('+')) return unary();
    return power();
  }
  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return binary(Op::pow, base, unary());
    return base;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of formula");
    if (accept('(')) {
      NodePtr e = expr();
      expect(')');
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      auto n = std::make_shared<Expression::Node>();
      n->constant = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      auto n = std::make_shared<Expression::Node>();
      if (name == "r") {
        n->op = Op::variable;
        return n;
      }
      if (name == "pi") {
        n->constant = std::numbers::pi;
        return n;
      }
      static const char* unary_fns[] = {"sinh", "cosh", "tanh", "exp", "log", "sqrt", "sin", "cos"};
      bool known = name == "pow";
      for (const char* f : unary_fns) known = known || name == f;
      if (!known) {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      n->op = Op::call;
      n->name = name;
      expect('(');
      n->args.push_back(expr());
      if (name == "pow") {
        expect(',');
        n->args.push_back(expr());
      }
      expect(')');
      return n;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.text_ = std::string(text);
  return e;
}

Jet Expression::eval(double r) const {
  if (!root_) throw Error(ErrorKind::domain, "empty expression");
  return root_->eval(r);
}

}  // namespace radsob
