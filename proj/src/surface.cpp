#include "srgb/surface.hpp"

namespace srgb {

namespace {

using surface_detail::frameJets;
using surface_detail::liftSurfaceField;
using surface_detail::pullback;

const std::vector<std::string> kParamVars{"u", "v"};

template <int K>
double metricValue(const StructureJet<K>& s, const JetVec3<K>& v, const JetVec3<K>& w, double eps) {
  return structure::metric(s, v, w, eps).value();
}

struct ClosedForms {
  double ii11, ii12, ii12Alt, ii22;
};

ClosedForms closedForms(const SurfacePointFrame& f, double eps) {
  const double se = std::sqrt(eps);
  const double a = f.a, b0 = f.b0, be = f.beps;
  ClosedForms c{};
  c.ii11 = -(eps * a * f.tau0 + b0 * f.kappa) / be;
  c.ii22 = -eps * f.X2a / (be * be * be * b0) + eps * a * f.tau0 / be;
  c.ii12 = -se * f.Xa / (b0 * be * be) + (1.0 - 2.0 * eps * f.tau1) / (2.0 * se);
  c.ii12Alt = -se / (be * be) * (b0 * f.kappa2 + a * a * (1.0 + eps * f.tau1)) + 1.0 / (2.0 * se);
  return c;
}

/// Sec^eps with frozen-frame extensions of X and X2hat.
template <int K>
double sectionalFrozen(const StructureJet<K>& s, const SurfacePointFrame& f, double eps) {
  const Eigen::Matrix3d cof = valueMatrix(s.coframe);
  const double be = std::sqrt(f.b0 * f.b0 + eps * f.a * f.a);
  const JetVec3<K> x = structure::fromFrame(s, Eigen::Vector3d(cof * f.X));
  const JetVec3<K> y = structure::fromFrame(s, Eigen::Vector3d(cof * (std::sqrt(eps) / be * f.X2)));
  return metricValue(s, structure::curvatureEps(s, x, y, y, eps), x, eps);
}

template <int K>
double sectionalConstant(const StructureJet<K>& s, const SurfacePointFrame& f, double eps) {
  const double be = std::sqrt(f.b0 * f.b0 + eps * f.a * f.a);
  const JetVec3<K> x = constantJet<K>(f.X);
  const JetVec3<K> y = constantJet<K>(std::sqrt(eps) / be * f.X2);
  return metricValue(s, structure::curvatureEps(s, x, y, y, eps), x, eps);
}

}  // namespace

SurfacePatch SurfacePatch::parse(std::string name, const std::array<std::string, 3>& map,
                                 const std::map<std::string, double>& params) {
  SurfacePatch p;
  p.name = std::move(name);
  for (int i = 0; i < 3; ++i) p.map_[i] = Expression::parse(map[i], kParamVars, params);
  return p;
}

SurfacePatch SurfacePatch::swapped() const {
  SurfacePatch p = *this;
  p.swap_ = !swap_;
  std::swap(p.lo(0), p.lo(1));
  std::swap(p.hi(0), p.hi(1));
  std::swap(p.periodic[0], p.periodic[1]);
  p.orientation = -orientation;
  for (Cap& c : p.caps) c.axis = 1 - c.axis;
  return p;
}

bool SurfacePatch::inCap(const Eigen::Vector2d& uv) const {
  for (const Cap& c : caps) {
    const double x = uv(c.axis);
    if (c.low && x < lo(c.axis) + c.radius) return true;
    if (!c.low && x > hi(c.axis) - c.radius) return true;
  }
  return false;
}

double horizontalParameter(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv) {
  const auto phi = patch.jet<1>(uv);
  const ChartPoint p(phi[0].value(), phi[1].value(), phi[2].value());
  const Eigen::Vector3d tu(phi[0].firstPartial(0), phi[1].firstPartial(0), phi[2].firstPartial(0));
  const Eigen::Vector3d tv(phi[0].firstPartial(1), phi[1].firstPartial(1), phi[2].firstPartial(1));
  const Eigen::Matrix3d f = cs.frameMatrix(p);
  const Eigen::Vector3d cu = f.partialPivLu().solve(tu);
  const Eigen::Vector3d cv = f.partialPivLu().solve(tv);
  const double det = cu.squaredNorm() * cv.squaredNorm() - std::pow(cu.dot(cv), 2);
  if (det <= 1e-28 * std::max(1.0, cu.squaredNorm() * cv.squaredNorm()))
    throw RankDeficient("immersion has rank < 2");
  const double a = patch.orientation * (cu(0) * cv(1) - cu(1) * cv(0)) / std::sqrt(det);
  return std::clamp(a, -1.0, 1.0);
}

SurfacePointFrame adaptedFrame(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv,
                               double eps) {
  const auto pb = pullback<3>(cs, patch, uv);
  return frameJets(cs, patch, pb, uv, eps).f;
}

double xaIdentityResidual(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv) {
  const SurfacePointFrame f = adaptedFrame(cs, patch, uv, 1.0);
  return std::abs(f.Xa / f.b0 - f.a * f.a - f.b0 * f.kappa2 + f.b0 * f.b0 * f.tau1);
}

SecondFundamentalForm secondFundamentalForm(const ContactStructure& cs, const SurfacePatch& patch,
                                            const Eigen::Vector2d& uv, double eps) {
  const ClosedForms c = closedForms(adaptedFrame(cs, patch, uv, eps), eps);
  return {c.ii11, c.ii12, c.ii22, c.ii12Alt};
}

SecondFundamentalForm secondFundamentalFormOracle(const ContactStructure& cs, const SurfacePatch& patch,
                                                  const Eigen::Vector2d& uv, double eps) {
  constexpr int K = 3;
  const auto pb = pullback<K>(cs, patch, uv);
  const auto fj = frameJets(cs, patch, pb, uv, eps);
  const Jet2<1> be = sqrt(fj.b0 * fj.b0 + eps * fj.a * fj.a);
  const Vec3<Jet2<1>> n = (eps * fj.a * pb.z - fj.b0 * fj.JX) / be;
  const JetVec3<K> nLift = liftSurfaceField<K>(n, pb.lift);
  const std::array<JetVec3<K>, 2> e{constantJet<K>(fj.f.X), constantJet<K>(fj.f.X2hat)};
  auto ii = [&](int i, int j) {
    return -metricValue(pb.s, structure::nablaEps(pb.s, e[i], nLift, eps), e[j], eps);
  };
  SecondFundamentalForm r;
  r.ii11 = ii(0, 0);
  r.ii12 = ii(0, 1);
  r.ii12Alt = ii(1, 0);
  r.ii22 = ii(1, 1);
  return r;
}

std::pair<double, double> sectionalTangent(const ContactStructure& cs, const SurfacePatch& patch,
                                           const Eigen::Vector2d& uv, double eps) {
  const SurfacePointFrame f = adaptedFrame(cs, patch, uv, eps);
  const auto s = cs.at<kMaxJetOrder>(f.p);
  return {sectionalFrozen(s, f, eps), sectionalConstant(s, f, eps)};
}

double gaussCurvature(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv, double eps) {
  const SurfacePointFrame f = adaptedFrame(cs, patch, uv, eps);
  const auto s = cs.at<kMaxJetOrder>(f.p);
  const ClosedForms c = closedForms(f, eps);
  return sectionalFrozen(s, f, eps) + c.ii11 * c.ii22 - c.ii12 * c.ii12;
}

namespace {

/// h_eps components as second-order jets in (u, v).
std::array<Jet2<2>, 3> inducedMetricJets(const ContactStructure& cs, const SurfacePatch& patch,
                                         const Eigen::Vector2d& uv, double eps) {
  using J = Jet2<2>;
  const auto phi = patch.jet<3>(uv);
  const ChartPoint p(phi[0].value(), phi[1].value(), phi[2].value());
  const auto s = cs.at<kMaxJetOrder>(p);
  std::array<J, 3> delta;
  Vec3<J> tu, tv;
  for (int i = 0; i < 3; ++i) {
    delta[i] = withOrder<2>(phi[i]).increment();
    tu(i) = withOrder<2>(phi[i].d(0));
    tv(i) = withOrder<2>(phi[i].d(1));
  }
  Mat3<J> cof;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) cof(i, j) = compose(withOrder<2>(s.coframe(i, j)), delta);
  const Vec3<J> cu = cof * tu;
  const Vec3<J> cv = cof * tv;
  auto g = [&](const Vec3<J>& x, const Vec3<J>& y) { return x(0) * y(0) + x(1) * y(1) + x(2) * y(2) * (1.0 / eps); };
  return {g(cu, cu), g(cu, cv), g(cv, cv)};
}

}  // namespace

Eigen::Matrix2d inducedMetric(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv,
                              double eps) {
  const auto h = inducedMetricJets(cs, patch, uv, eps);
  Eigen::Matrix2d m;
  m << h[0].value(), h[1].value(), h[1].value(), h[2].value();
  return m;
}

double brioschiCurvature(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv,
                         double eps) {
  const auto [E, F, G] = inducedMetricJets(cs, patch, uv, eps);
  using Ex = Jet2<2>::Exponent;
  auto d = [](const Jet2<2>& f, int i, int j) { return f.partial(Ex{i, j}); };
  const double e = E.value(), f = F.value(), g = G.value();
  const double det = e * g - f * f;
  if (det <= 0.0) throw RankDeficient("induced metric is singular");
  const double eu = d(E, 1, 0), ev = d(E, 0, 1), fu = d(F, 1, 0), fv = d(F, 0, 1), gu = d(G, 1, 0),
               gv = d(G, 0, 1);
  const double evv = d(E, 0, 2), fuv = d(F, 1, 1), guu = d(G, 2, 0);
  Eigen::Matrix3d m1, m2;
  m1 << -0.5 * evv + fuv - 0.5 * guu, 0.5 * eu, fu - 0.5 * ev,  //
      fv - 0.5 * gu, e, f,                                      //
      0.5 * gv, f, g;
  m2 << 0.0, 0.5 * ev, 0.5 * gu,  //
      0.5 * ev, e, f,             //
      0.5 * gu, f, g;
  return (m1.determinant() - m2.determinant()) / (det * det);
}

double gaussCurvatureRiemannian(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv,
                                double eps) {
  constexpr int K = kMaxJetOrder;
  using J = Jet2<1>;
  const auto pb = pullback<K>(cs, patch, uv);
  const Vec3<J> cu = pb.coframe * pb.tu;
  const Vec3<J> cv = pb.coframe * pb.tv;
  auto g = [&](const Vec3<J>& x, const Vec3<J>& y) { return x(0) * y(0) + x(1) * y(1) + x(2) * y(2) * (1.0 / eps); };
  // g_eps-orthonormal tangent basis and unit normal, in frame coefficients.
  const Vec3<J> c1 = cu / sqrt(g(cu, cu));
  Vec3<J> w = cv - g(cv, c1) * c1;
  const Vec3<J> c2 = w / sqrt(g(w, w));
  Vec3<J> cn = cross3(c1, c2);
  cn(2) *= J(eps);
  cn = cn / sqrt(g(cn, cn));
  auto toChart = [&](const Vec3<J>& c) { return Vec3<J>(c(0) * pb.a + c(1) * pb.b + c(2) * pb.z); };
  const Eigen::Vector3d e1 = values(toChart(c1)), e2 = values(toChart(c2));
  const JetVec3<K> nLift = liftSurfaceField<K>(toChart(cn), pb.lift);
  const auto gamma = structure::christoffel(pb.s, eps);
  const std::array<JetVec3<K>, 2> e{constantJet<K>(e1), constantJet<K>(e2)};
  auto conn = [&](const JetVec3<K>& x, const JetVec3<K>& y) { return structure::chartConnection(gamma, x, y); };
  auto ii = [&](int i, int j) { return -metricValue(pb.s, conn(e[i], nLift), e[j], eps); };
  const double sec = metricValue(pb.s, structure::curvature<K>(conn, e[0], e[1], e[1]), e[0], eps);
  const double i12 = 0.5 * (ii(0, 1) + ii(1, 0));
  return sec + ii(0, 0) * ii(1, 1) - i12 * i12;
}

double kSigmaE(const SurfacePointFrame& f) { return f.kappa * f.X2a - f.Xa * f.Xa / (f.b0 * f.b0); }

double kSigmaEIntroVariant(const SurfacePointFrame& f) { return f.kappa * f.X2a - f.Xa * f.Xa / f.b0; }

double b1m1(const SurfacePointFrame& f) { return f.Xa / f.b0 - f.a * f.a; }

double kSigmaECorrected(const SurfacePointFrame& f) { return kSigmaE(f) - b1m1(f); }

CurvaturePanel bPanel(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv, double eps) {
  constexpr int K = kMaxJetOrder;
  const auto pb = pullback<K>(cs, patch, uv);
  const SurfacePointFrame f = frameJets(cs, patch, pb, uv, eps).f;
  const ClosedForms c = closedForms(f, eps);
  CurvaturePanel out;
  out.sec = sectionalFrozen(pb.s, f, eps);
  out.sec1 = sectionalFrozen(pb.s, f, 1.0);
  out.ii11 = c.ii11;
  out.ii12 = c.ii12;
  out.ii12Alt = c.ii12Alt;
  out.ii22 = c.ii22;
  out.k = out.sec + c.ii11 * c.ii22 - c.ii12 * c.ii12;

  const double a = f.a, b0 = f.b0, be = f.beps, t0 = f.tau0, t1 = f.tau1;
  const double a2 = a * a, b02 = b0 * b0, tt = t0 * t0 + t1 * t1;
  out.b1m1 = b1m1(f);
  out.b10 = out.sec1 + a2 * (0.75 - tt) + b02 * t1 - 0.25 * b02 - b0 * a * t0 * f.kappa - 2.0 * t1 * f.Xa / b0 +
            a2 * t1 - b02 * t1 * t1;
  out.b20 = kSigmaE(f);
  out.b21 = a * t0 * f.X2a / b0;
  out.kSigmaE = out.b20;

  out.h = inducedMetric(cs, patch, uv, eps);
  out.sigmaDensity = f.areaDensity;
  out.sigmaEpsDensity = std::sqrt(out.h.determinant());

  const double se = std::sqrt(eps);
  const double recombined =
      se / be * (out.b1m1 / eps + out.b10) + se / (be * be * be) * (out.b20 + eps * out.b21);
  const double direct = out.k * be / se;
  out.recombinationResidual = std::abs(recombined - direct) / std::max(1.0, std::abs(direct));
  return out;
}

}  // namespace srgb
