#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "srgb/expr.hpp"
#include "srgb/jet.hpp"

namespace srgb {

template <typename T>
using Vec3 = Eigen::Matrix<T, 3, 1>;
template <typename T>
using Mat3 = Eigen::Matrix<T, 3, 3>;
template <typename T>
using Vec2 = Eigen::Matrix<T, 2, 1>;
template <typename T>
using Mat2 = Eigen::Matrix<T, 2, 2>;

using ChartPoint = Eigen::Vector3d;

/// Highest jet order carried anywhere in the library. Curvature of the
/// taming metrics needs four derivatives of the declared frame, because the
/// Reeb field itself already consumes two.
inline constexpr int kMaxJetOrder = 4;

template <int K>
using Jet3 = Jet<3, K>;
template <int K>
using JetVec3 = Vec3<Jet3<K>>;

class OrderOutOfRange : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename T>
Vec3<double> values(const Vec3<T>& v) {
  return {valueOf(v(0)), valueOf(v(1)), valueOf(v(2))};
}

template <typename T>
Eigen::Matrix3d valueMatrix(const Mat3<T>& m) {
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = valueOf(m(i, j));
  return r;
}

template <typename J>
J dot3(const Vec3<J>& a, const Vec3<J>& b) {
  return a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}

template <typename J>
Vec3<J> cross3(const Vec3<J>& a, const Vec3<J>& b) {
  return Vec3<J>(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}

/// (DW) V: derivative of the jet field W along the jet field V.
template <int K>
JetVec3<K> derivativeAlong(const JetVec3<K>& w, const JetVec3<K>& v) {
  JetVec3<K> r;
  for (int i = 0; i < 3; ++i) {
    Jet3<K> s(0.0);
    for (int j = 0; j < 3; ++j) s += v(j) * w(i).d(j);
    r(i) = s;
  }
  return r;
}

/// Derivative of a scalar jet along a jet field.
template <int K>
Jet3<K> derivativeAlong(const Jet3<K>& f, const JetVec3<K>& v) {
  Jet3<K> s(0.0);
  for (int j = 0; j < 3; ++j) s += v(j) * f.d(j);
  return s;
}

/// [V, W] = (DW) V - (DV) W.
template <int K>
JetVec3<K> lieBracket(const JetVec3<K>& v, const JetVec3<K>& w) {
  return derivativeAlong(w, v) - derivativeAlong(v, w);
}

/// Constant jet vector (all derivatives zero).
template <int K>
JetVec3<K> constantJet(const Eigen::Vector3d& v) {
  return JetVec3<K>(Jet3<K>(v(0)), Jet3<K>(v(1)), Jet3<K>(v(2)));
}

/// Coordinate jets (x, y, z) about p.
template <int K>
std::array<Jet3<K>, 3> coordinateJets(const ChartPoint& p) {
  return {Jet3<K>::variable(0, p(0)), Jet3<K>::variable(1, p(1)), Jet3<K>::variable(2, p(2))};
}

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(Expression e) : expr_(std::move(e)) {}
  static ScalarField parse(const std::string& text, const std::map<std::string, double>& params = {});

  template <int K>
  Jet3<K> jet(const ChartPoint& p) const {
    return expr_.eval(coordinateJets<K>(p));
  }
  double operator()(const ChartPoint& p) const {
    return expr_.eval(std::array<double, 3>{p(0), p(1), p(2)});
  }
  const Expression& expression() const { return expr_; }

 private:
  Expression expr_;
};

class SmoothVectorField {
 public:
  SmoothVectorField() = default;
  explicit SmoothVectorField(std::array<Expression, 3> comps) : comps_(std::move(comps)) {}
  static SmoothVectorField parse(const std::array<std::string, 3>& text,
                                 const std::map<std::string, double>& params = {});

  template <int K>
  JetVec3<K> jet(const ChartPoint& p) const {
    const auto x = coordinateJets<K>(p);
    return JetVec3<K>(comps_[0].eval(x), comps_[1].eval(x), comps_[2].eval(x));
  }
  /// Evaluates the field at an arbitrary jet-valued point (composition).
  template <typename T>
  Vec3<T> at(const std::array<T, 3>& x) const {
    return Vec3<T>(comps_[0].eval(x), comps_[1].eval(x), comps_[2].eval(x));
  }
  Eigen::Vector3d operator()(const ChartPoint& p) const {
    return at(std::array<double, 3>{p(0), p(1), p(2)});
  }
  const std::array<Expression, 3>& components() const { return comps_; }

 private:
  std::array<Expression, 3> comps_;
};

/// A jet of a vector field truncated to a requested order.
struct JetVector {
  int order = 0;
  std::array<Jet3<kMaxJetOrder>, 3> components;

  Eigen::Vector3d value() const {
    return {components[0].value(), components[1].value(), components[2].value()};
  }
  /// d/dx_var of component i at the base point.
  double partial(int component, int var) const { return components[component].firstPartial(var); }
};

JetVector evaluateJet(const SmoothVectorField& field, const ChartPoint& p, int order);

Eigen::Vector3d lieBracket(const SmoothVectorField& v, const SmoothVectorField& w, const ChartPoint& p);

double directionalDerivative(const ScalarField& f, const SmoothVectorField& v, const ChartPoint& p);

}  // namespace srgb
