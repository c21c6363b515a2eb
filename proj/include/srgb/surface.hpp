#pragma once

// Pointwise geometry of a parametrized surface patch inside a contact
// structure: horizontal angle parameter a, the adapted frame (X, X2), the
// second fundamental form of h_eps, its Gaussian curvature by two routes, and
// the coefficient panel B_{i,j} of the expansion of K^eps sigma^eps.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "srgb/contact.hpp"

namespace srgb {

class RankDeficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class CharacteristicPoint : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pointwise ops refuse points with |a| >= 1 - kTolChar.
inline constexpr double kTolChar = 1e-8;

template <int K>
using Jet2 = Jet<2, K>;

/// Excluded strip at one end of a parameter axis, e.g. a pole of a
/// spherical parametrization.
struct Cap {
  int axis = 0;
  bool low = true;
  double radius = 1e-3;
};

class SurfacePatch {
 public:
  std::string name;
  Eigen::Vector2d lo{0.0, 0.0};
  Eigen::Vector2d hi{1.0, 1.0};
  std::array<bool, 2> periodic{false, false};
  int orientation = 1;
  std::vector<Cap> caps;
  int euler = 0;

  static SurfacePatch parse(std::string name, const std::array<std::string, 3>& map,
                            const std::map<std::string, double>& params = {});

  /// Same surface with the parameters swapped and the orientation flag
  /// flipped, so the geometric orientation is unchanged.
  SurfacePatch swapped() const;

  template <int K>
  std::array<Jet2<K>, 3> jet(const Eigen::Vector2d& uv) const {
    std::array<Jet2<K>, 2> x{Jet2<K>::variable(0, uv(0)), Jet2<K>::variable(1, uv(1))};
    if (swap_) std::swap(x[0], x[1]);
    return {map_[0].eval(x), map_[1].eval(x), map_[2].eval(x)};
  }
  ChartPoint operator()(const Eigen::Vector2d& uv) const {
    const std::array<double, 2> x = swap_ ? std::array<double, 2>{uv(1), uv(0)} : std::array<double, 2>{uv(0), uv(1)};
    return {map_[0].eval(x), map_[1].eval(x), map_[2].eval(x)};
  }
  /// True when uv lies in one of the excluded caps.
  bool inCap(const Eigen::Vector2d& uv) const;

 private:
  std::array<Expression, 3> map_;
  bool swap_ = false;
};

struct SurfacePointFrame {
  Eigen::Vector2d uv = Eigen::Vector2d::Zero();
  ChartPoint p = ChartPoint::Zero();
  double eps = 1.0;
  double a = 0.0;
  double b0 = 1.0;
  double beps = 1.0;
  Eigen::Vector3d X, JX, Z, X2, X2hat, Nhat;
  Eigen::Vector2d xParam, x2Param;  // parameter components of X and X2
  double tau0 = 0.0, tau1 = 0.0;
  double Xa = 0.0, X2a = 0.0;
  double kappa = 0.0;   // <nabla_X X, JX>
  double kappa2 = 0.0;  // <nabla_{X2} X, JX>
  double areaDensity = 0.0;  // sigma = areaDensity du dv
};

struct CurvaturePanel {
  double sec = 0.0;
  double sec1 = 0.0;
  double ii11 = 0.0, ii12 = 0.0, ii22 = 0.0;
  double ii12Alt = 0.0;  // second displayed form of II_12
  double k = 0.0;
  double b1m1 = 0.0, b10 = 0.0, b20 = 0.0, b21 = 0.0;
  double kSigmaE = 0.0;
  Eigen::Matrix2d h = Eigen::Matrix2d::Identity();  // h_eps in (u, v)
  double sigmaDensity = 0.0;
  double sigmaEpsDensity = 0.0;
  /// |recombined B-terms - K^eps sigma^eps density| / max(1, |K^eps sigma^eps density|)
  double recombinationResidual = 0.0;
};

namespace surface_detail {

/// Structure data pulled back along the patch as first-order jets in (u, v).
template <int K>
struct Pullback {
  StructureJet<K> s;
  Vec3<Jet2<1>> tu, tv;
  Vec3<Jet2<1>> a, b, z;
  Mat3<Jet2<1>> coframe;
  Eigen::Matrix3d lift;  // inverse of [T_u T_v n]
};

template <int K>
Pullback<K> pullback(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv) {
  Pullback<K> pb;
  const auto phi = patch.jet<2>(uv);
  const ChartPoint p(phi[0].value(), phi[1].value(), phi[2].value());
  pb.s = cs.at<K>(p);
  std::array<Jet2<1>, 3> delta;
  for (int i = 0; i < 3; ++i) {
    pb.tu(i) = withOrder<1>(phi[i].d(0));
    pb.tv(i) = withOrder<1>(phi[i].d(1));
    delta[i] = withOrder<1>(phi[i]).increment();
  }
  auto pull = [&](const Jet3<K>& f) { return compose(withOrder<1>(f), delta); };
  for (int i = 0; i < 3; ++i) {
    pb.a(i) = pull(pb.s.a(i));
    pb.b(i) = pull(pb.s.b(i));
    pb.z(i) = pull(pb.s.z(i));
  }
  Mat3<Jet2<1>> frame;
  frame.col(0) = pb.a;
  frame.col(1) = pb.b;
  frame.col(2) = pb.z;
  pb.coframe = inverse3(frame);
  const Eigen::Vector3d tu = values(pb.tu), tv = values(pb.tv);
  const Eigen::Vector3d n = tu.cross(tv);
  if (n.norm() < 1e-14 * std::max(1.0, tu.norm() * tv.norm())) throw RankDeficient("immersion has rank < 2");
  Eigen::Matrix3d m;
  m << tu, tv, n;
  pb.lift = m.inverse();
  return pb;
}

/// Extends a field known along the surface to a jet about p whose first
/// derivatives along the surface are exact; the transverse derivative is set
/// to zero. Adequate for any quantity that differentiates only along TΣ.
template <int K>
JetVec3<K> liftSurfaceField(const Vec3<Jet2<1>>& w, const Eigen::Matrix3d& liftInv) {
  JetVec3<K> out;
  for (int i = 0; i < 3; ++i) {
    Jet3<K> c(w(i).value());
    if constexpr (K >= 1) {
      const Eigen::RowVector3d dparam(w(i).firstPartial(0), w(i).firstPartial(1), 0.0);
      const Eigen::RowVector3d dx = dparam * liftInv;
      for (int k = 0; k < 3; ++k) c[1 + k] = dx(k);
    }
    out(i) = c;
  }
  return out;
}

/// Adapted frame fields as jets in (u, v), plus the scalar frame data.
template <int K>
struct FrameJets {
  Jet2<1> a, b0;
  Vec3<Jet2<1>> X, JX, X2;
  SurfacePointFrame f;
};

template <int K>
FrameJets<K> frameJets(const ContactStructure& /*cs*/, const SurfacePatch& patch, const Pullback<K>& pb,
                       const Eigen::Vector2d& uv, double eps) {
  using J = Jet2<1>;
  FrameJets<K> out;
  SurfacePointFrame& f = out.f;
  const Vec3<J> cu = pb.coframe * pb.tu;
  const Vec3<J> cv = pb.coframe * pb.tv;
  const J e1 = cu.dot(cu), f1 = cu.dot(cv), g1 = cv.dot(cv);
  const J det = e1 * g1 - f1 * f1;
  if (det.value() <= 1e-28 * std::max(1.0, e1.value() * g1.value())) throw RankDeficient("induced metric is singular");
  const J sq = sqrt(det);
  const double o = patch.orientation;
  const J a = o * (cu(0) * cv(1) - cu(1) * cv(0)) / sq;
  if (std::abs(a.value()) >= 1.0 - kTolChar) throw CharacteristicPoint("|a| = 1 within tolerance");
  const J au = cu(2), av = cv(2);
  // 1 - a^2 computed as |alpha restricted to TΣ|^2, free of cancellation.
  const J b0sq = (g1 * au * au - 2.0 * f1 * au * av + e1 * av * av) / det;
  const J b0 = sqrt(b0sq);
  const J scale = o / (b0 * sq);
  const Vec2<J> xp(av * scale, -au * scale);
  const Vec3<J> X = xp(0) * pb.tu + xp(1) * pb.tv;
  const Vec3<J> cX = pb.coframe * X;
  const Vec3<J> JX = cX(0) * pb.b - cX(1) * pb.a;
  const Vec3<J> X2 = b0 * pb.z + a * JX;
  // X2 in parameter components: h1 x = (<T_u, X2>, <T_v, X2>).
  const Vec3<J> cX2(-a * cX(1), a * cX(0), b0);
  const Vec2<J> x2p = solve2<J>((Mat2<J>() << e1, f1, f1, g1).finished(), Vec2<J>(cu.dot(cX2), cv.dot(cX2)));

  out.a = a;
  out.b0 = b0;
  out.X = X;
  out.JX = JX;
  out.X2 = X2;

  f.uv = uv;
  f.p = pb.s.p;
  f.eps = eps;
  f.a = a.value();
  f.b0 = b0.value();
  f.beps = std::sqrt(f.b0 * f.b0 + eps * f.a * f.a);
  f.X = values(X);
  f.JX = values(JX);
  f.Z = values(pb.z);
  f.X2 = values(X2);
  f.X2hat = std::sqrt(eps) / f.beps * f.X2;
  f.Nhat = (eps * f.a * f.Z - f.b0 * f.JX) / f.beps;
  f.xParam = Eigen::Vector2d(xp(0).value(), xp(1).value());
  f.x2Param = Eigen::Vector2d(x2p(0).value(), x2p(1).value());
  const Eigen::Vector2d da(a.firstPartial(0), a.firstPartial(1));
  f.Xa = da.dot(f.xParam);
  f.X2a = da.dot(f.x2Param);
  f.areaDensity = sq.value();

  const Eigen::Vector2d c(cX(0).value(), cX(1).value());
  Eigen::Matrix2d tau;
  tau << pb.s.tau(0, 0).value(), pb.s.tau(0, 1).value(), pb.s.tau(1, 0).value(), pb.s.tau(1, 1).value();
  f.tau0 = c.dot(tau * c);
  f.tau1 = c.dot(tau * Eigen::Vector2d(-c(1), c(0)));

  const JetVec3<K> xLift = liftSurfaceField<K>(X, pb.lift);
  const JetVec3<K> jxK = constantJet<K>(f.JX);
  f.kappa = structure::metric(pb.s, structure::nabla(pb.s, constantJet<K>(f.X), xLift), jxK, 1.0).value();
  f.kappa2 = structure::metric(pb.s, structure::nabla(pb.s, constantJet<K>(f.X2), xLift), jxK, 1.0).value();
  return out;
}

}  // namespace surface_detail

double horizontalParameter(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv);
SurfacePointFrame adaptedFrame(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv,
                               double eps);
/// |Xa/b0 - a^2 - b0 <nabla_{X2} X, JX> + b0^2 tau1|.
double xaIdentityResidual(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv);

struct SecondFundamentalForm {
  double ii11 = 0.0, ii12 = 0.0, ii22 = 0.0;
  double ii12Alt = 0.0;
};
/// Closed forms in terms of a, Xa, X2a, tau and <nabla X, JX>.
SecondFundamentalForm secondFundamentalForm(const ContactStructure& cs, const SurfacePatch& patch,
                                            const Eigen::Vector2d& uv, double eps);
/// -<nabla^eps_{X_i} N, X_j>_eps with the frame (X, X2hat) and N the unit normal.
SecondFundamentalForm secondFundamentalFormOracle(const ContactStructure& cs, const SurfacePatch& patch,
                                                  const Eigen::Vector2d& uv, double eps);

/// <R^eps(X, X2hat) X2hat, X>_eps with two different extensions of the
/// frame: constant coefficients against (A, B, Z), or constant chart
/// components.
std::pair<double, double> sectionalTangent(const ContactStructure& cs, const SurfacePatch& patch,
                                           const Eigen::Vector2d& uv, double eps);

/// K^eps from the Gauss equation.
double gaussCurvature(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv, double eps);
/// K^eps from the induced metric components via the Brioschi formula.
double brioschiCurvature(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv,
                         double eps);
/// K^eps from the Gauss equation with a g_eps-orthonormal tangent basis and
/// the Koszul connection; valid for non-contact structures too.
double gaussCurvatureRiemannian(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv,
                                double eps);
/// Induced metric h_eps in parameter components.
Eigen::Matrix2d inducedMetric(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv,
                              double eps);

CurvaturePanel bPanel(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv, double eps);

/// K_{Sigma,E} = <nabla_X X, JX> X2a - (Xa)^2 / b0^2.
double kSigmaE(const SurfacePointFrame& f);
/// The variant with sqrt(1 - a^2) in the last denominator; diagnostic only.
double kSigmaEIntroVariant(const SurfacePointFrame& f);
/// B_{1,-1} = Xa/b0 - a^2.
double b1m1(const SurfacePointFrame& f);
/// K_{Sigma,E} - B_{1,-1}: the integrand whose slope at c = 0 carries the
/// concentrated B_{1,-1} contribution as well (diagnostic).
double kSigmaECorrected(const SurfacePointFrame& f);

}  // namespace srgb
