#include "srgb/expr.hpp"

#include <cctype>
#include <numbers>

namespace srgb {

class ExpressionParser {
 public:
  ExpressionParser(const std::string& text, const std::vector<std::string>& vars,
                   const std::map<std::string, double>& params)
      : text_(text), vars_(vars), params_(params) {}

  Expression run() {
    Expression e;
    e.nodes_.clear();
    out_ = &e;
    e.root_ = parseExpr();
    skipSpace();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    e.variableCount_ = static_cast<int>(vars_.size());
    e.source_ = text_;
    return e;
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError("expression \"" + text_ + "\" at " + std::to_string(pos_) + ": " + what);
  }

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int add(Expression::Node n) {
    out_->nodes_.push_back(n);
    return static_cast<int>(out_->nodes_.size()) - 1;
  }
  const Expression::Node& node(int i) const { return out_->nodes_[i]; }

  int binary(Op op, int l, int r) {
    if (node(l).op == Op::Constant && node(r).op == Op::Constant) {
      const double a = node(l).value, b = node(r).value;
      double v = 0;
      switch (op) {
        case Op::Add: v = a + b; break;
        case Op::Sub: v = a - b; break;
        case Op::Mul: v = a * b; break;
        case Op::Div: v = a / b; break;
        default: break;
      }
      return add({Op::Constant, v});
    }
    return add({op, 0.0, -1, l, r});
  }

  int parseExpr() {
    int l = parseTerm();
    for (;;) {
      if (accept('+')) l = binary(Op::Add, l, parseTerm());
      else if (accept('-')) l = binary(Op::Sub, l, parseTerm());
      else return l;
    }
  }
  int parseTerm() {
    int l = parseUnary();
    for (;;) {
      if (accept('*')) l = binary(Op::Mul, l, parseUnary());
      else if (accept('/')) l = binary(Op::Div, l, parseUnary());
      else return l;
    }
  }
  int parseUnary() {
    if (accept('-')) {
      const int a = parseUnary();
      if (node(a).op == Op::Constant) return add({Op::Constant, -node(a).value});
      return add({Op::Neg, 0.0, -1, a});
    }
    if (accept('+')) return parseUnary();
    return parsePower();
  }
  int parsePower() {
    const int base = parsePrimary();
    if (!accept('^')) return base;
    const int ex = parseUnary();
    if (node(ex).op != Op::Constant) fail("exponent must be constant");
    const double p = node(ex).value;
    if (node(base).op == Op::Constant) return add({Op::Constant, std::pow(node(base).value, p)});
    if (p == std::round(p) && std::abs(p) <= 64) return add({Op::IntPow, p, -1, base});
    return add({Op::RealPow, p, -1, base});
  }
  int parsePrimary() {
    skipSpace();
    if (pos_ >= text_.size()) fail("unexpected end");
    const char c = text_[pos_];
    if (accept('(')) {
      const int e = parseExpr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      const double v = std::stod(text_.substr(pos_), &used);
      pos_ += used;
      return add({Op::Constant, v});
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (accept('(')) {
        const int arg = parseExpr();
        if (!accept(')')) fail("expected ')' after argument of " + name);
        static const std::map<std::string, Op> kFuncs{{"exp", Op::Exp},   {"log", Op::Log},
                                                      {"sqrt", Op::Sqrt}, {"sin", Op::Sin},
                                                      {"cos", Op::Cos},   {"atan", Op::Atan}};
        const auto it = kFuncs.find(name);
        if (it == kFuncs.end()) fail("unknown function " + name);
        return add({it->second, 0.0, -1, arg});
      }
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return add({Op::Variable, 0.0, static_cast<int>(i)});
      if (const auto it = params_.find(name); it != params_.end()) return add({Op::Constant, it->second});
      if (name == "pi") return add({Op::Constant, std::numbers::pi});
      if (name == "e") return add({Op::Constant, std::numbers::e});
      fail("unknown name " + name);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  const std::map<std::string, double>& params_;
  std::size_t pos_ = 0;
  Expression* out_ = nullptr;
};

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables,
                             const std::map<std::string, double>& parameters) {
  return ExpressionParser(text, variables, parameters).run();
}

Expression Expression::constant(double v) {
  Expression e;
  e.nodes_ = {Node{Op::Constant, v}};
  e.root_ = 0;
  e.source_ = std::to_string(v);
  return e;
}

bool Expression::isConstant() const { return nodes_[root_].op == Op::Constant; }

}  // namespace srgb
