#include "rheocontrol/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace rheo {

class ExpressionParser {
public:
  explicit ExpressionParser(const std::string& text) : s_(text) {}

  Expression run() {
    Expression e;
    e.text_ = s_;
    nodes_ = &e.nodes_;
    pos_ = 0;
    e.root_ = parse_expr(0);
    skip_ws();
    if (pos_ != s_.size())
      throw ConfigError("expression: unexpected trailing input at position " + std::to_string(pos_) +
                        " in '" + s_ + "'");
    return e;
  }

private:
  using Op = Expression::Op;

  int add(Op op, double v = 0.0, int a = -1, int b = -1) {
    nodes_->push_back({op, v, a, b});
    return static_cast<int>(nodes_->size()) - 1;
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& why) {
    throw ConfigError("expression: " + why + " at position " + std::to_string(pos_) + " in '" + s_ +
                      "'");
  }

  int parse_expr(int depth) {
    if (depth > 128) fail("nesting too deep");
    int lhs = parse_term(depth);
    for (;;) {
      if (eat('+'))
        lhs = add(Op::Add, 0, lhs, parse_term(depth));
      else if (eat('-'))
        lhs = add(Op::Sub, 0, lhs, parse_term(depth));
      else
        return lhs;
    }
  }

  int parse_term(int depth) {
    int lhs = parse_factor(depth);
    for (;;) {
      if (eat('*'))
        lhs = add(Op::Mul, 0, lhs, parse_factor(depth));
      else if (eat('/'))
        lhs = add(Op::Div, 0, lhs, parse_factor(depth));
      else
        return lhs;
    }
  }

  int parse_factor(int depth) {
    int base = parse_unary(depth);
    if (eat('^')) return add(Op::Pow, 0, base, parse_factor(depth + 1));
    return base;
  }

  int parse_unary(int depth) {
    if (eat('-')) return add(Op::Neg, 0, parse_unary(depth));
    if (eat('+')) return parse_unary(depth);
    return parse_primary(depth);
  }

  int parse_primary(int depth) {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return add(Op::Num, v);
    }
    if (c == '(') {
      ++pos_;
      const int e = parse_expr(depth + 1);
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_'))
        ++end;
      const std::string name = s_.substr(pos_, end - pos_);
      pos_ = end;
      if (name == "pi") return add(Op::Num, M_PI);
      if (name == "x1") return add(Op::X1);
      if (name == "x2") return add(Op::X2);
      Op f;
      if (name == "sin")
        f = Op::Sin;
      else if (name == "cos")
        f = Op::Cos;
      else if (name == "exp")
        f = Op::Exp;
      else if (name == "sqrt")
        f = Op::Sqrt;
      else if (name == "abs")
        f = Op::Abs;
      else
        fail("unknown identifier '" + name + "' (allowed: x1, x2, pi, sin, cos, exp, sqrt, abs)");
      if (!eat('(')) fail("expected '(' after function name '" + name + "'");
      const int arg = parse_expr(depth + 1);
      if (!eat(')')) fail("missing ')'");
      return add(f, 0, arg);
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  const std::string& s_;
  std::vector<Expression::Node>* nodes_ = nullptr;
  std::size_t pos_ = 0;
};

Expression Expression::parse(const std::string& text) {
  if (text.empty()) throw ConfigError("expression: empty string");
  return ExpressionParser(text).run();
}

double Expression::eval(double x1, double x2) const {
  // Nodes are created bottom-up, so a single forward sweep evaluates the DAG.
  std::vector<double> v(nodes_.size());
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const Node& nd = nodes_[n];
    switch (nd.op) {
      case Op::Num: v[n] = nd.value; break;
      case Op::X1: v[n] = x1; break;
      case Op::X2: v[n] = x2; break;
      case Op::Add: v[n] = v[static_cast<std::size_t>(nd.a)] + v[static_cast<std::size_t>(nd.b)]; break;
      case Op::Sub: v[n] = v[static_cast<std::size_t>(nd.a)] - v[static_cast<std::size_t>(nd.b)]; break;
      case Op::Mul: v[n] = v[static_cast<std::size_t>(nd.a)] * v[static_cast<std::size_t>(nd.b)]; break;
      case Op::Div: v[n] = v[static_cast<std::size_t>(nd.a)] / v[static_cast<std::size_t>(nd.b)]; break;
      case Op::Pow:
        v[n] = std::pow(v[static_cast<std::size_t>(nd.a)], v[static_cast<std::size_t>(nd.b)]);
        break;
      case Op::Neg: v[n] = -v[static_cast<std::size_t>(nd.a)]; break;
      case Op::Sin: v[n] = std::sin(v[static_cast<std::size_t>(nd.a)]); break;
      case Op::Cos: v[n] = std::cos(v[static_cast<std::size_t>(nd.a)]); break;
      case Op::Exp: v[n] = std::exp(v[static_cast<std::size_t>(nd.a)]); break;
      case Op::Sqrt: v[n] = std::sqrt(v[static_cast<std::size_t>(nd.a)]); break;
      case Op::Abs: v[n] = std::abs(v[static_cast<std::size_t>(nd.a)]); break;
    }
  }
  return v[static_cast<std::size_t>(root_)];
}

}  // namespace rheo
