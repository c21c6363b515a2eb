#pragma once

// A small arithmetic expression language used by fixture files.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?          (right associative)
//   primary := number | name | name '(' expr ')' | '(' expr ')'
//
// Names resolve to a declared variable, a named constant (`pi`, `e`, plus
// any caller-supplied parameters), or one of the functions exp, log, sqrt,
// sin, cos, atan. Exponents that are integer literals are evaluated by
// repeated multiplication; other exponents use pow(base, value) and must be
// constant.

#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "srgb/jet.hpp"

namespace srgb {

class ExpressionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Expression {
 public:
  enum class Op { Constant, Variable, Neg, Add, Sub, Mul, Div, IntPow, RealPow, Exp, Log, Sqrt, Sin, Cos, Atan };

  struct Node {
    Op op;
    double value = 0.0;  // constant, or exponent for powers
    int var = -1;
    int lhs = -1;
    int rhs = -1;
  };

  Expression() : nodes_{Node{Op::Constant, 0.0}} {}

  static Expression parse(const std::string& text, const std::vector<std::string>& variables,
                          const std::map<std::string, double>& parameters = {});
  static Expression constant(double v);

  const std::string& source() const { return source_; }
  int variableCount() const { return variableCount_; }
  bool isConstant() const;

  template <typename T>
  T eval(std::span<const T> vars) const {
    return evalNode<T>(root_, vars);
  }
  template <typename T, std::size_t N>
  T eval(const std::array<T, N>& vars) const {
    return eval<T>(std::span<const T>(vars.data(), N));
  }

 private:
  template <typename T>
  T evalNode(int i, std::span<const T> vars) const {
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    using std::atan;
    const Node& n = nodes_[i];
    switch (n.op) {
      case Op::Constant: return T(n.value);
      case Op::Variable: return vars[n.var];
      case Op::Neg: return -evalNode<T>(n.lhs, vars);
      case Op::Add: return evalNode<T>(n.lhs, vars) + evalNode<T>(n.rhs, vars);
      case Op::Sub: return evalNode<T>(n.lhs, vars) - evalNode<T>(n.rhs, vars);
      case Op::Mul: return evalNode<T>(n.lhs, vars) * evalNode<T>(n.rhs, vars);
      case Op::Div: return evalNode<T>(n.lhs, vars) / evalNode<T>(n.rhs, vars);
      case Op::IntPow: return integerPow(evalNode<T>(n.lhs, vars), static_cast<int>(n.value));
      case Op::RealPow: {
        using std::pow;
        return pow(evalNode<T>(n.lhs, vars), n.value);
      }
      case Op::Exp: return exp(evalNode<T>(n.lhs, vars));
      case Op::Log: return log(evalNode<T>(n.lhs, vars));
      case Op::Sqrt: return sqrt(evalNode<T>(n.lhs, vars));
      case Op::Sin: return sin(evalNode<T>(n.lhs, vars));
      case Op::Cos: return cos(evalNode<T>(n.lhs, vars));
      case Op::Atan: return atan(evalNode<T>(n.lhs, vars));
    }
    return T(0.0);
  }

  friend class ExpressionParser;
  std::vector<Node> nodes_;
  int root_ = 0;
  int variableCount_ = 0;
  std::string source_;
};

}  // namespace srgb
