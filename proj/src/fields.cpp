#include "srgb/fields.hpp"

namespace srgb {

namespace {
const std::vector<std::string> kChartVars{"x", "y", "z"};
}

ScalarField ScalarField::parse(const std::string& text, const std::map<std::string, double>& params) {
  return ScalarField(Expression::parse(text, kChartVars, params));
}

SmoothVectorField SmoothVectorField::parse(const std::array<std::string, 3>& text,
                                           const std::map<std::string, double>& params) {
  return SmoothVectorField({Expression::parse(text[0], kChartVars, params),
                            Expression::parse(text[1], kChartVars, params),
                            Expression::parse(text[2], kChartVars, params)});
}

JetVector evaluateJet(const SmoothVectorField& field, const ChartPoint& p, int order) {
  if (order < 0 || order > kMaxJetOrder)
    throw OrderOutOfRange("jet order " + std::to_string(order) + " outside [0, " +
                          std::to_string(kMaxJetOrder) + "]");
  const auto j = field.jet<kMaxJetOrder>(p);
  const auto& layout = detail::kLayout<3, kMaxJetOrder>;
  JetVector out;
  out.order = order;
  for (int i = 0; i < 3; ++i) {
    out.components[i] = j(i);
    for (int m = 0; m < layout.kSize; ++m)
      if (layout.degree[m] > order) out.components[i][m] = 0.0;
  }
  return out;
}

Eigen::Vector3d lieBracket(const SmoothVectorField& v, const SmoothVectorField& w, const ChartPoint& p) {
  return values(lieBracket<1>(v.jet<1>(p), w.jet<1>(p)));
}

double directionalDerivative(const ScalarField& f, const SmoothVectorField& v, const ChartPoint& p) {
  const Eigen::Vector3d vp = v(p);
  const auto fj = f.jet<1>(p);
  return vp(0) * fj.firstPartial(0) + vp(1) * fj.firstPartial(1) + vp(2) * fj.firstPartial(2);
}

}  // namespace srgb
