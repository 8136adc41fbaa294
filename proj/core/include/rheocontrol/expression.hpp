#pragma once

#include <string>
#include <vector>

#include "rheocontrol/errors.hpp"

namespace rheo {

// Small arithmetic expression over the spatial coordinates, used to define
// analytic exponent fields in configuration files.  Supported grammar:
//
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := unary ('^' factor)?            (right associative power)
//   unary   := ('-'|'+') unary | primary
//   primary := NUMBER | 'pi' | 'x1' | 'x2' | FUNC '(' expr ')' | '(' expr ')'
//   FUNC    := sin | cos | exp | sqrt | abs
//
// Anything else (unknown identifiers in particular) is rejected at parse
// time with a ConfigError, so config files cannot smuggle in unchecked
// functions.
class Expression {
public:
  static Expression parse(const std::string& text);

  double eval(double x1, double x2) const;

  const std::string& text() const { return text_; }

private:
  enum class Op { Num, X1, X2, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Sqrt, Abs };

  struct Node {
    Op op;
    double value = 0.0;
    int a = -1;
    int b = -1;
  };

  Expression() = default;

  std::vector<Node> nodes_;
  int root_ = -1;
  std::string text_;

  friend class ExpressionParser;
};

}  // namespace rheo
