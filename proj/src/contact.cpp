#include "srgb/contact.hpp"

#include <random>

#include <Eigen/LU>

namespace srgb {

namespace {

constexpr int kK = kMaxJetOrder;

StructureJet<kK> structureAt(const ContactStructure& cs, const ChartPoint& p) { return cs.at<kK>(p); }

}  // namespace

ContactStructure ContactStructure::build(ContactFrame frame, int probes, std::uint64_t seed) {
  ContactStructure cs(std::move(frame), true);
  for (const ChartPoint& p : cs.probePoints(probes, seed)) {
    const Eigen::Vector3d a = cs.frame_.a(p);
    const Eigen::Vector3d b = cs.frame_.b(p);
    const Eigen::Vector3d n = a.cross(b);
    if (n.norm() < 1e-12 * std::max(1.0, a.norm() * b.norm()))
      throw SingularFrame("frame vectors A and B are dependent at a probe point");
    const Eigen::Vector3d ab = lieBracket(cs.frame_.a, cs.frame_.b, p);
    if (std::abs(n.dot(ab)) < 1e-12) throw DegenerateContact("d(alpha_0)(A, B) vanishes at a probe point");
  }
  // Reeb system solvability.
  for (const ChartPoint& p : cs.probePoints(std::min(probes, 8), seed + 1)) (void)cs.at<2>(p);
  return cs;
}

ContactStructure ContactStructure::buildRiemannian(ContactFrame frame) {
  ContactStructure cs(std::move(frame), false);
  for (const ChartPoint& p : cs.probePoints(16, 7)) {
    const Eigen::Vector3d n = cs.frame_.a(p).cross(cs.frame_.b(p));
    if (n.norm() < 1e-12) throw SingularFrame("frame vectors A and B are dependent at a probe point");
  }
  return cs;
}

std::vector<ChartPoint> ContactStructure::probePoints(int count, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ChartPoint> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    ChartPoint p;
    for (int k = 0; k < 3; ++k) p(k) = frame_.box.lo(k) + unit(rng) * (frame_.box.hi(k) - frame_.box.lo(k));
    pts.push_back(p);
  }
  return pts;
}

Eigen::Vector3d ContactStructure::alpha(const ChartPoint& p) const { return values(at<2>(p).alpha); }
Eigen::Vector3d ContactStructure::reeb(const ChartPoint& p) const { return values(at<2>(p).z); }

Eigen::Matrix3d ContactStructure::frameMatrix(const ChartPoint& p) const {
  const auto s = at<2>(p);
  Eigen::Matrix3d m;
  m << values(Vec3<Jet3<2>>(s.frame.col(0))), values(Vec3<Jet3<2>>(s.frame.col(1))),
      values(Vec3<Jet3<2>>(s.frame.col(2)));
  return m;
}

double ContactStructure::dAlpha(const ChartPoint& p, const Eigen::Vector3d& v, const Eigen::Vector3d& w) const {
  const auto s = at<2>(p);
  double r = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r += (s.alpha(j).firstPartial(i) - s.alpha(i).firstPartial(j)) * v(i) * w(j);
  return r;
}

double ContactStructure::metricEps(const ChartPoint& p, const Eigen::Vector3d& v, const Eigen::Vector3d& w,
                                   double eps) const {
  const Eigen::Matrix3d f = frameMatrix(p);
  const Eigen::Vector3d c = f.partialPivLu().solve(v);
  const Eigen::Vector3d d = f.partialPivLu().solve(w);
  return c(0) * d(0) + c(1) * d(1) + c(2) * d(2) / eps;
}

Eigen::Vector3d ContactStructure::applyJ(const ChartPoint& p, const Eigen::Vector3d& v) const {
  const Eigen::Matrix3d f = frameMatrix(p);
  const Eigen::Vector3d c = f.partialPivLu().solve(v);
  return c(0) * f.col(1) - c(1) * f.col(0);
}

Eigen::Matrix2d ContactStructure::tauMatrix(const ChartPoint& p) const {
  const auto s = at<3>(p);
  Eigen::Matrix2d t;
  t << s.tau(0, 0).value(), s.tau(0, 1).value(), s.tau(1, 0).value(), s.tau(1, 1).value();
  return t;
}

Eigen::Vector3d ContactStructure::applyTau(const ChartPoint& p, const Eigen::Vector3d& v) const {
  const Eigen::Matrix3d f = frameMatrix(p);
  const Eigen::Vector3d c = f.partialPivLu().solve(v);
  const Eigen::Vector2d t = tauMatrix(p) * c.head<2>();
  return t(0) * f.col(0) + t(1) * f.col(1);
}

Eigen::Vector3d nabla(const ContactStructure& cs, const SmoothVectorField& v, const SmoothVectorField& w,
                      const ChartPoint& p) {
  const auto s = cs.at<3>(p);
  return values(structure::nabla(s, v.jet<3>(p), w.jet<3>(p)));
}

Eigen::Vector3d nablaEps(const ContactStructure& cs, const SmoothVectorField& v, const SmoothVectorField& w,
                         const ChartPoint& p, double eps) {
  const auto s = cs.at<3>(p);
  return values(structure::nablaEps(s, v.jet<3>(p), w.jet<3>(p), eps));
}

Eigen::Vector3d nablaEpsKoszul(const ContactStructure& cs, const SmoothVectorField& v,
                               const SmoothVectorField& w, const ChartPoint& p, double eps) {
  const auto s = cs.at<3>(p);
  const auto gamma = structure::christoffel(s, eps);
  return values(structure::chartConnection(gamma, v.jet<3>(p), w.jet<3>(p)));
}

Eigen::Vector3d torsion(const ContactStructure& cs, const SmoothVectorField& v, const SmoothVectorField& w,
                        const ChartPoint& p) {
  const auto s = cs.at<3>(p);
  return values(structure::torsion(s, v.jet<3>(p), w.jet<3>(p)));
}

Eigen::Vector3d torsionFormula(const ContactStructure& cs, const Eigen::Vector3d& v, const Eigen::Vector3d& w,
                               const ChartPoint& p) {
  const Eigen::Vector3d z = cs.reeb(p);
  const Eigen::Vector3d al = cs.alpha(p);
  return -cs.metricEps(p, cs.applyJ(p, v), w, 1.0) * z + al.dot(v) * cs.applyTau(p, w) -
         al.dot(w) * cs.applyTau(p, v);
}

Eigen::Vector3d curvatureReps(const ContactStructure& cs, const SmoothVectorField& v, const SmoothVectorField& w,
                              const SmoothVectorField& u, const ChartPoint& p, double eps) {
  const auto s = structureAt(cs, p);
  return values(structure::curvatureEps(s, v.jet<kK>(p), w.jet<kK>(p), u.jet<kK>(p), eps));
}

CurvatureExpansion curvatureExpansionResiduals(const ContactStructure& cs, const ChartPoint& p, double phi,
                                               double eps) {
  using structure::fromFrame;
  const auto s = structureAt(cs, p);
  // Frozen-frame extensions: constant coefficients against (A, B, Z).
  const JetVec3<kK> x = fromFrame(s, Eigen::Vector3d(std::cos(phi), std::sin(phi), 0.0));
  const JetVec3<kK> jx = fromFrame(s, Eigen::Vector3d(-std::sin(phi), std::cos(phi), 0.0));
  const JetVec3<kK> z = s.z;
  auto g1 = [&](const JetVec3<kK>& a, const JetVec3<kK>& b) { return structure::metric(s, a, b, 1.0).value(); };
  auto gE = [&](const JetVec3<kK>& a, const JetVec3<kK>& b) { return structure::metric(s, a, b, eps).value(); };

  const JetVec3<kK> tx = structure::applyTau(s, x);
  const double t00 = s.tau(0, 0).value(), t01 = s.tau(0, 1).value(), t11 = s.tau(1, 1).value();
  const double tauNorm2 = t00 * t00 + 2.0 * t01 * t01 + t11 * t11;
  const double tauXX = g1(tx, x);
  const double tauXJX = g1(tx, jx);

  CurvatureExpansion out;
  const JetVec3<kK> tt = structure::applyTau(s, tx);
  const JetVec3<kK> nzt = structure::nablaTau(s, z, x);
  // <R^eps(X, JX) JX, X>_eps against the adapted curvature.
  out.lhs[0] = gE(structure::curvatureEps(s, x, jx, jx, eps), x);
  out.rhs[0] = g1(structure::curvatureAdapted(s, x, jx, jx), x) - 0.75 / eps + 0.5 * eps * tauNorm2;
  // <R^eps(X, JX) X, Z>_eps
  out.lhs[1] = gE(structure::curvatureEps(s, x, jx, x, eps), z);
  out.rhs[1] = g1(structure::nablaTau(s, jx, x), x) - g1(structure::nablaTau(s, x, jx), x);
  // <R^eps(X, Z) Z, X>_eps
  out.lhs[2] = gE(structure::curvatureEps(s, x, z, z, eps), x);
  out.rhs[2] = 0.25 / (eps * eps) - g1(tx, tx) - g1(nzt, x) - tauXJX / eps;
  // <R^eps(X, Z) JX, Z>_eps
  out.lhs[3] = gE(structure::curvatureEps(s, x, z, jx, eps), z);
  out.rhs[3] = -tauXX / eps + g1(nzt, jx) + g1(tt, jx);
  for (int i = 0; i < 4; ++i) out.residual[i] = std::abs(out.lhs[i] - out.rhs[i]);
  return out;
}

namespace {

/// Quadratic chart field c + M d + (q . d^2) e with d = x - p.
struct TestField {
  Eigen::Vector3d c, q, e;
  Eigen::Matrix3d m;

  template <int K>
  JetVec3<K> jet(const ChartPoint& p) const {
    const auto x = coordinateJets<K>(p);
    Vec3<Jet3<K>> d;
    for (int i = 0; i < 3; ++i) d(i) = x[i] - p(i);
    Jet3<K> quad(0.0);
    for (int i = 0; i < 3; ++i) quad += q(i) * d(i) * d(i);
    JetVec3<K> out;
    for (int i = 0; i < 3; ++i) {
      Jet3<K> acc(c(i));
      for (int j = 0; j < 3; ++j) acc += m(i, j) * d(j);
      out(i) = acc + e(i) * quad;
    }
    return out;
  }
};

TestField randomField(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TestField f;
  for (int i = 0; i < 3; ++i) {
    f.c(i) = u(rng);
    f.q(i) = u(rng);
    f.e(i) = u(rng);
    for (int j = 0; j < 3; ++j) f.m(i, j) = u(rng);
  }
  return f;
}

}  // namespace

std::map<std::string, double> structureIdentityResiduals(const ContactStructure& cs, const ChartPoint& p,
                                                         std::uint64_t seed) {
  using namespace structure;
  using V = JetVec3<kK>;
  const auto s = structureAt(cs, p);
  std::map<std::string, double> r;
  auto bump = [&](const std::string& k, double v) { r[k] = std::max(r[k], std::abs(v)); };
  auto vmax = [](const V& v) { return values(v).cwiseAbs().maxCoeff(); };
  auto g = [&](const V& a, const V& b, double eps) { return metric(s, a, b, eps); };
  auto dAlpha = [&](const V& v, const V& w) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        acc += (s.alpha(j).firstPartial(i) - s.alpha(i).firstPartial(j)) * v(i).value() * w(j).value();
    return acc;
  };
  auto alphaVal = [&](const V& v) { return alphaOf(s, v).value(); };

  bump("alpha(A)", alphaVal(s.a));
  bump("alpha(B)", alphaVal(s.b));
  bump("alpha(Z) - 1", alphaVal(s.z) - 1.0);
  bump("dalpha(A,B) + 1", dAlpha(s.a, s.b) + 1.0);
  bump("dalpha(Z,A)", dAlpha(s.z, s.a));
  bump("dalpha(Z,B)", dAlpha(s.z, s.b));
  for (double eps : {1.0, 0.3, 0.05}) bump("<Z,Z>_eps - 1/eps", eps * g(s.z, s.z, eps).value() - 1.0);
  bump("J^2 + 1 on E", std::max(vmax(applyJ(s, applyJ(s, s.a)) + s.a), vmax(applyJ(s, applyJ(s, s.b)) + s.b)));
  bump("JZ", vmax(applyJ(s, s.z)));
  bump("tau Z", vmax(applyTau(s, s.z)));
  bump("tr tau", s.tau(0, 0).value() + s.tau(1, 1).value());
  bump("tau J + J tau", std::max(vmax(applyTau(s, applyJ(s, s.a)) + applyJ(s, applyTau(s, s.a))),
                                 vmax(applyTau(s, applyJ(s, s.b)) + applyJ(s, applyTau(s, s.b)))));
  bump("tau symmetric", (g(applyTau(s, s.a), s.b, 1.0) - g(s.a, applyTau(s, s.b), 1.0)).value());

  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 3; ++trial) {
    const V v = randomField(rng).jet<kK>(p);
    const V w = randomField(rng).jet<kK>(p);
    const V u = randomField(rng).jet<kK>(p);
    bump("nabla J", vmax(nabla(s, v, applyJ(s, w)) - applyJ(s, nabla(s, v, w))));
    // With tau = L_Z g / 2 and nabla_Z X = [Z, X] + tau X, nabla J = 0 forces
    // L_Z J = J tau - tau J = 2 J tau.
    bump("L_Z J - 2 J tau", vmax(lieBracket(s.z, applyJ(s, w)) - applyJ(s, lieBracket(s.z, w)) -
                                 2.0 * applyJ(s, applyTau(s, w))));
    bump("nabla Z", vmax(nabla(s, v, s.z)));
    const V tf = -metric(s, applyJ(s, v), w, 1.0) * s.z + alphaOf(s, v) * applyTau(s, w) -
                 alphaOf(s, w) * applyTau(s, v);
    bump("torsion of nabla", vmax(torsion(s, v, w) - tf));
    bump("nabla metric", (derivativeAlong(g(w, u, 1.0), v) - g(nabla(s, v, w), u, 1.0) -
                          g(w, nabla(s, v, u), 1.0))
                             .value());
    for (double eps : {1.0, 0.3, 0.05}) {
      const V ne = nablaEps(s, v, w, eps);
      bump("nabla^eps vs Koszul", vmax(ne - chartConnection(christoffel(s, eps), v, w)));
      bump("torsion of nabla^eps", vmax(ne - nablaEps(s, w, v, eps) - lieBracket(v, w)));
      bump("nabla^eps metric", (derivativeAlong(g(w, u, eps), v) - g(ne, u, eps) -
                                g(w, nablaEps(s, v, u, eps), eps))
                                   .value());
    }
  }
  return r;
}

Eigen::Matrix2d tauFlowOracle(const ContactStructure& cs, const ChartPoint& p) {
  const double dt = 1e-4, h = 1e-4;
  auto reebAt = [&](const Eigen::Vector3d& q) { return cs.reeb(ChartPoint(q)); };
  auto flow = [&](Eigen::Vector3d q, double t) {
    const int steps = 4;
    const double k = t / steps;
    for (int i = 0; i < steps; ++i) {
      const Eigen::Vector3d k1 = reebAt(q), k2 = reebAt(q + 0.5 * k * k1), k3 = reebAt(q + 0.5 * k * k2),
                            k4 = reebAt(q + k * k3);
      q += k / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return q;
  };
  const Eigen::Matrix3d f = cs.frameMatrix(p);
  auto pulled = [&](double t, int i, int j) {
    auto push = [&](const Eigen::Vector3d& v) {
      return Eigen::Vector3d((flow(p + h * v, t) - flow(p - h * v, t)) / (2.0 * h));
    };
    const ChartPoint q(flow(p, t));
    return cs.metricEps(q, push(f.col(i)), push(f.col(j)), 1.0);
  };
  Eigen::Matrix2d tau;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) tau(i, j) = 0.5 * (pulled(dt, i, j) - pulled(-dt, i, j)) / (2.0 * dt);
  return tau;
}

}  // namespace srgb
