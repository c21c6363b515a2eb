#include "srgb/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

namespace srgb {

namespace {

constexpr int kTable = 256;  // arclength table intervals per piece
// Jet order for structure data: the Reeb field uses two orders, connection
// coefficients one more.
constexpr int kJ = 3;
const std::vector<std::string> kCurveVars{"t"};

int signOf(double x) { return (x > 0.0) - (x < 0.0); }

Eigen::Matrix3d coframeAt(const ContactStructure& cs, const ChartPoint& p) { return cs.frameMatrix(p).inverse(); }

/// g_eps on chart vectors: the frame (A, B, Z) is orthonormal up to |Z|^2 = 1/eps.
Eigen::Matrix3d gramEps(const Eigen::Matrix3d& coframe, double eps) {
  const Eigen::Vector3d d(1.0, 1.0, 1.0 / eps);
  return coframe.transpose() * d.asDiagonal() * coframe;
}

Eigen::Matrix<double, 3, 2> tangents(const SurfacePatch& patch, const Eigen::Vector2d& uv) {
  const auto phi = patch.jet<1>(uv);
  Eigen::Matrix<double, 3, 2> t;
  for (int i = 0; i < 3; ++i) {
    t(i, 0) = phi[i].firstPartial(0);
    t(i, 1) = phi[i].firstPartial(1);
  }
  return t;
}

/// Rotation by +pi/2 for the metric H on the parameter plane, positive for
/// the surface orientation.
Eigen::Matrix2d rotation(const Eigen::Matrix2d& h, int orientation) {
  Eigen::Matrix2d jstd;
  jstd << 0.0, -1.0, 1.0, 0.0;
  return orientation * std::sqrt(h.determinant()) * h.inverse() * jstd;
}

/// d/dt of a (u, v)-jet along a parameter velocity w.
double along(const Jet2<1>& j, const Eigen::Vector2d& w) { return j.firstPartial(0) * w(0) + j.firstPartial(1) * w(1); }

}  // namespace

BoundaryCurve BoundaryCurve::build(const ContactStructure& cs, const SurfacePatch& patch,
                                   const std::vector<CurvePiece>& pieces, const std::map<std::string, double>& params) {
  if (pieces.empty()) throw std::invalid_argument("boundary needs at least one piece");
  BoundaryCurve c(cs, patch);
  for (const CurvePiece& p : pieces) {
    if (!(p.t1 > p.t0)) throw std::invalid_argument("curve piece needs t1 > t0");
    c.pieces_.push_back({{Expression::parse(p.u, kCurveVars, params), Expression::parse(p.v, kCurveVars, params)},
                         p.t0, p.t1});
  }
  const int n = c.pieceCount();
  c.offsets_.assign(n + 1, 0.0);
  c.tables_.resize(n);
  const auto& [x, w] = gaussLegendre(8);
  for (int i = 0; i < n; ++i) {
    const Piece& pc = c.pieces_[i];
    auto& tab = c.tables_[i];
    tab.assign(kTable + 1, 0.0);
    const double h = (pc.t1 - pc.t0) / kTable;
    for (int k = 0; k < kTable; ++k) {
      double sum = 0.0;
      for (int q = 0; q < 8; ++q) sum += w[q] * c.hSpeed(i, pc.t0 + h * (k + 0.5 + 0.5 * x[q]));
      tab[k + 1] = tab[k] + 0.5 * h * sum;
    }
    c.offsets_[i + 1] = c.offsets_[i] + tab.back();
  }
  // Closure and corners.
  for (int i = 0; i < n; ++i) {
    const int prev = (i + n - 1) % n;
    const CurveJet end = c.jet(prev, c.pieces_[prev].t1);
    const CurveJet start = c.jet(i, c.pieces_[i].t0);
    if ((end.p - start.p).norm() > 1e-9 * std::max(1.0, start.p.norm()))
      throw std::invalid_argument("boundary pieces do not join into a closed curve");
    const Eigen::Matrix3d g = gramEps(coframeAt(cs, start.p), 1.0);
    const double cosAngle = end.d1.dot(g * start.d1) / std::sqrt(end.d1.dot(g * end.d1) * start.d1.dot(g * start.d1));
    if (cosAngle < 1.0 - 1e-12) c.corners_.push_back(c.offsets_[i]);
  }
  return c;
}

CurveJet BoundaryCurve::jet(int piece, double t) const {
  using J = Jet<1, 2>;
  const Piece& pc = pieces_.at(piece);
  const std::array<J, 1> tv{J::variable(0, t)};
  const J u = pc.map[0].eval(tv), v = pc.map[1].eval(tv);
  CurveJet c;
  c.uv = Eigen::Vector2d(u.value(), v.value());
  c.duv = Eigen::Vector2d(u.firstPartial(0), v.firstPartial(0));
  c.dduv = Eigen::Vector2d(u.d(0).firstPartial(0), v.d(0).firstPartial(0));
  const auto phi = patch_.jet<2>(c.uv);
  for (int i = 0; i < 3; ++i) {
    c.p(i) = phi[i].value();
    const Eigen::Vector2d grad(phi[i].firstPartial(0), phi[i].firstPartial(1));
    Eigen::Matrix2d hess;
    hess << phi[i].d(0).firstPartial(0), phi[i].d(0).firstPartial(1), phi[i].d(1).firstPartial(0),
        phi[i].d(1).firstPartial(1);
    c.d1(i) = grad.dot(c.duv);
    c.d2(i) = grad.dot(c.dduv) + c.duv.dot(hess * c.duv);
  }
  return c;
}

double BoundaryCurve::hSpeed(int piece, double t) const {
  const CurveJet c = jet(piece, t);
  return (coframeAt(cs_, c.p) * c.d1).norm();
}

double BoundaryCurve::arclength(int piece, double t) const {
  const Piece& pc = pieces_[piece];
  const double h = (pc.t1 - pc.t0) / kTable;
  const int k = std::clamp(static_cast<int>(std::floor((t - pc.t0) / h)), 0, kTable - 1);
  const double lo = pc.t0 + k * h;
  const auto& [x, w] = gaussLegendre(8);
  double sum = 0.0;
  for (int q = 0; q < 8; ++q) sum += w[q] * hSpeed(piece, lo + 0.5 * (t - lo) * (1.0 + x[q]));
  return tables_[piece][k] + 0.5 * (t - lo) * sum;
}

double BoundaryCurve::parameterAt(int piece, double s) const {
  const Piece& pc = pieces_.at(piece);
  const double target = s - offsets_[piece];
  const double L = length();
  if (target <= 0.0) return pc.t0;
  if (target >= tables_[piece].back()) return pc.t1;
  const auto& tab = tables_[piece];
  const int k = std::clamp(static_cast<int>(std::upper_bound(tab.begin(), tab.end(), target) - tab.begin()) - 1, 0,
                           kTable - 1);
  const double h = (pc.t1 - pc.t0) / kTable;
  double lo = pc.t0 + k * h, hi = lo + h;
  double t = lo + h * (target - tab[k]) / std::max(tab[k + 1] - tab[k], 1e-300);
  for (int it = 0; it < 30; ++it) {
    const double f = arclength(piece, t) - target;
    if (std::abs(f) < 1e-14 * std::max(1.0, L)) break;
    (f > 0 ? hi : lo) = t;
    double next = t - f / hSpeed(piece, t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return t;
}

std::pair<int, double> BoundaryCurve::locate(double s, int side) const {
  const double L = length();
  if (s < 0.0 || s > L) s = std::fmod(std::fmod(s, L) + L, L);
  const double tol = 1e-12 * std::max(1.0, L);
  int i = 0;
  const int n = pieceCount();
  if (side < 0) {
    if (s <= tol) s = L;
    while (i < n - 1 && s > offsets_[i + 1] + tol) ++i;
  } else {
    if (s >= L - tol) s = 0.0;
    while (i < n - 1 && s >= offsets_[i + 1] - tol) ++i;
  }
  return {i, parameterAt(i, s)};
}

BoundarySample BoundaryCurve::sample(double s, int side) const {
  const auto [piece, t] = locate(s, side);
  BoundarySample b = sampleAt(piece, t);
  b.s = s;
  return b;
}

BoundarySample BoundaryCurve::sampleAt(int piece, double t) const {
  BoundarySample b;
  b.piece = piece;
  b.t = t;
  b.s = arclength(piece, t) + offsets_[piece];
  const CurveJet c = jet(piece, t);
  b.uv = c.uv;
  const auto pb = surface_detail::pullback<kJ>(cs_, patch_, c.uv);
  const Mat3<Jet2<1>>& C = pb.coframe;
  const Eigen::Matrix3d c0 = valueMatrix(C);
  Eigen::Matrix3d dC;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) dC(i, j) = along(C(i, j), c.duv);
  const Eigen::Vector3d k1 = c0 * c.d1;
  const Eigen::Vector3d k1t = dC * c.d1 + c0 * c.d2;
  const double sigma = k1.norm();
  if (sigma == 0.0) throw ZeroVector("boundary curve has zero velocity");
  const double sigmaT = k1.dot(k1t) / sigma;
  b.gdot = c.d1 / sigma;
  b.gdotParam = c.duv / sigma;
  b.psi = k1(2) / sigma;
  b.dpsi = (k1t(2) / sigma - k1(2) * sigmaT / (sigma * sigma)) / sigma;
  b.a = horizontalParameter(cs_, patch_, c.uv);
  try {
    const auto fj = surface_detail::frameJets(cs_, patch_, pb, c.uv, 1.0);
    const Vec3<Jet2<1>> cx = C * fj.X, cx2 = C * fj.X2;
    Eigen::Vector3d x, xt, x2, x2t;
    for (int i = 0; i < 3; ++i) {
      x(i) = cx(i).value();
      xt(i) = along(cx(i), c.duv);
      x2(i) = cx2(i).value();
      x2t(i) = along(cx2(i), c.duv);
    }
    const double co = k1.dot(x), si = k1.dot(x2);
    const double coT = k1t.dot(x) + k1.dot(xt), siT = k1t.dot(x2) + k1.dot(x2t);
    b.a = fj.f.a;
    b.theta = std::atan2(si, co);
    b.dtheta = (co * siT - si * coT) / (co * co + si * si) / sigma;
    b.cosTheta = co / sigma;
    b.sinTheta = si / sigma;
  } catch (const CharacteristicPoint&) {
    b.characteristic = true;
  }
  return b;
}

std::pair<double, double> psiTheta(const BoundaryCurve& curve, double s) {
  const BoundarySample b = curve.sample(s);
  if (b.characteristic) throw CharacteristicPoint("theta is undefined at a characteristic point");
  return {b.psi, b.theta};
}

namespace {

bool atCorner(const BoundaryCurve& curve, double s) {
  for (double c : curve.corners())
    if (std::abs(s - c) < 1e-10 * std::max(1.0, curve.length()) ||
        std::abs(std::abs(s - c) - curve.length()) < 1e-10 * std::max(1.0, curve.length()))
      return true;
  return false;
}

double geodesicCurvatureAt(const BoundaryCurve& curve, int piece, double t, double eps) {
  const ContactStructure& cs = curve.structure();
  const SurfacePatch& patch = curve.patch();
  const CurveJet c = curve.jet(piece, t);
  const auto s = cs.at<kJ>(c.p);
  const auto gamma = structure::christoffel(s, eps);
  const Eigen::Vector3d d =
      c.d2 + values(structure::chartConnection(gamma, constantJet<kJ>(c.d1), constantJet<kJ>(c.d1)));
  const Eigen::Matrix3d g = gramEps(valueMatrix(s.coframe), eps);
  const Eigen::Matrix<double, 3, 2> T = tangents(patch, c.uv);
  const Eigen::Matrix2d h = T.transpose() * g * T;
  const Eigen::Vector3d rotated = T * (rotation(h, patch.orientation) * c.duv);
  const double speed = std::sqrt(c.duv.dot(h * c.duv));
  return d.dot(g * rotated) / (speed * speed * speed);
}

/// Pieces of the expansion at an h-unit tangent.
struct Expansion {
  double kSigma, tauTerm, psiTerm, projection, beps, speedEps, psi;
};

Expansion expansionAt(const BoundaryCurve& curve, double s, double eps) {
  const ContactStructure& cs = curve.structure();
  const SurfacePatch& patch = curve.patch();
  if (atCorner(curve, s)) throw CornerPoint("geodesic curvature requested at a corner");
  const auto [piece, t] = curve.locate(s, +1);
  const BoundarySample b = curve.sampleAt(piece, t);
  if (b.characteristic) throw CharacteristicPoint("expansion needs a non-characteristic point");
  const CurveJet c = curve.jet(piece, t);
  const SurfacePointFrame f = adaptedFrame(cs, patch, c.uv, eps);
  const auto st = cs.at<kJ>(c.p);
  const double sigma = (valueMatrix(st.coframe) * c.d1).norm();
  const Eigen::Vector3d gd = c.d1 / sigma;
  // Adapted-connection acceleration; the component along gdot drops out.
  const Eigen::Vector3d acc =
      (c.d2 + values(structure::nabla(st, constantJet<kJ>(c.d1), constantJet<kJ>(c.d1)))) / (sigma * sigma);
  const Eigen::Vector3d tg = values(structure::applyTau(st, constantJet<kJ>(gd)));
  const Eigen::Vector3d rot = b.cosTheta * f.X2 - b.sinTheta * f.X;
  const Eigen::Matrix3d g1 = gramEps(valueMatrix(st.coframe), 1.0);
  Expansion e{};
  e.kSigma = (acc + b.psi * tg).dot(g1 * rot);
  e.tauTerm = -eps * f.b0 * tg.dot(g1 * gd) * b.cosTheta;
  e.psiTerm = -f.a * b.psi / eps;
  const SecondFundamentalForm ii = secondFundamentalForm(cs, patch, c.uv, eps);
  const double c1 = b.cosTheta, c2 = b.sinTheta * f.beps / std::sqrt(eps);
  const double iigg = c1 * c1 * ii.ii11 + 2.0 * c1 * c2 * ii.ii12 + c2 * c2 * ii.ii22;
  e.projection = iigg * (1.0 - eps) * f.a * f.b0 * b.cosTheta / f.beps;
  e.beps = f.beps;
  e.speedEps = std::sqrt(1.0 + (1.0 - eps) * b.psi * b.psi / eps);
  e.psi = b.psi;
  return e;
}

}  // namespace

double geodesicCurvatureEps(const BoundaryCurve& curve, double s, double eps) {
  if (atCorner(curve, s)) throw CornerPoint("geodesic curvature requested at a corner");
  const auto [piece, t] = curve.locate(s, +1);
  return geodesicCurvatureAt(curve, piece, t, eps);
}

double geodesicCurvatureEpsExpansion(const BoundaryCurve& curve, double s, double eps) {
  const Expansion e = expansionAt(curve, s, eps);
  return e.beps / std::sqrt(eps) * (e.kSigma + e.tauTerm + e.psiTerm + e.projection) / std::pow(e.speedEps, 3);
}

double geodesicCurvatureEpsExpansionAsPrinted(const BoundaryCurve& curve, double s, double eps) {
  const Expansion e = expansionAt(curve, s, eps);
  return e.beps / std::sqrt(eps) * (e.kSigma + e.tauTerm + e.psiTerm) / std::pow(e.speedEps, 3);
}

double t3OrderZeroTerm(const BoundaryCurve& curve, double s0, double s1, double eps, const QuadratureOptions& opts) {
  return integrate1D(
             [&](double s) {
               const Expansion e = expansionAt(curve, s, eps);
               return std::sqrt(eps) * e.beps * (e.kSigma + e.tauTerm) / (eps + (1.0 - eps) * e.psi * e.psi);
             },
             s0, s1, opts)
      .value;
}

double kSigmaBoundary(const BoundaryCurve& curve, double s) { return expansionAt(curve, s, 1.0).kSigma; }

double leafCurvatureKE0(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv) {
  const SurfacePointFrame f = adaptedFrame(cs, patch, uv, 1.0);
  return f.a * f.kappa;
}

double leafCurvatureEps(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv, double eps) {
  // <nabla^eps_X X, I^1 X> with X extended along the surface.
  constexpr int K = kJ;
  const auto pb = surface_detail::pullback<K>(cs, patch, uv);
  const auto fj = surface_detail::frameJets(cs, patch, pb, uv, eps);
  const JetVec3<K> x = surface_detail::liftSurfaceField<K>(fj.X, pb.lift);
  const JetVec3<K> acc = structure::nablaEps(pb.s, constantJet<K>(fj.f.X), x, eps);
  return structure::metric(pb.s, acc, constantJet<K>(fj.f.X2), 1.0).value();
}

double cornerAngle(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv,
                   const Eigen::Vector2d& v, const Eigen::Vector2d& w, double eps) {
  if (v.norm() == 0.0 || w.norm() == 0.0) throw ZeroVector("corner angle needs nonzero tangents");
  const Eigen::Matrix<double, 3, 2> T = tangents(patch, uv);
  const Eigen::Matrix3d g = gramEps(coframeAt(cs, patch(uv)), eps);
  const Eigen::Matrix2d h = T.transpose() * g * T;
  const double cosPart = v.dot(h * w);
  const double sinPart = (rotation(h, patch.orientation) * v).dot(h * w);
  return std::atan2(sinPart, cosPart);
}

double cornerAngleLimit(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv,
                        const Eigen::Vector2d& v, const Eigen::Vector2d& w) {
  if (v.norm() == 0.0 || w.norm() == 0.0) throw ZeroVector("corner angle needs nonzero tangents");
  const Eigen::Matrix<double, 3, 2> T = tangents(patch, uv);
  const Eigen::Matrix3d cof = coframeAt(cs, patch(uv));
  auto alphaRatio = [&](const Eigen::Vector2d& x) {
    const Eigen::Vector3d k = cof * (T * x);
    return k(2) / k.norm();
  };
  const double av = alphaRatio(v), aw = alphaRatio(w);
  const bool inV = std::abs(av) < 1e-9, inW = std::abs(aw) < 1e-9;
  if (inV && inW) return std::abs(cornerAngle(cs, patch, uv, v, w, 1.0));
  if (inV != inW) return std::numbers::pi / 2.0;
  return std::numbers::pi / 2.0 * (1.0 - signOf(av * aw));
}

namespace {

WPoint makeWPoint(const BoundaryCurve& curve, const BoundarySample& b, int side, bool corner) {
  WPoint w;
  w.s = b.s;
  w.side = side;
  w.atCorner = corner;
  w.characteristic = b.characteristic;
  w.dpsi = b.dpsi;
  if (!b.characteristic) {
    w.dtheta = b.dtheta;
    w.kE0 = leafCurvatureKE0(curve.structure(), curve.patch(), b.uv);
    w.p = signOf(b.cosTheta);
  }
  return w;
}

}  // namespace

BoundaryClassification classifyBoundary(const BoundaryCurve& curve, const ClassifyOptions& opts) {
  BoundaryClassification out;
  const double L = curve.length();
  const double h = opts.step * L;
  auto isZero = [&](double psi) { return std::abs(psi) < opts.zeroTol; };
  auto addStar = [&](WPoint& w) {
    if (std::abs(w.dpsi) < opts.starTol) {
      out.starOk = false;
      out.warnings.push_back("condition (*) fails at s = " + std::to_string(w.s));
    }
  };
  // psi restricted to one piece, so roots near junctions stay one-sided.
  auto psiAt = [&](int piece, double s) {
    const double u = std::clamp(s, curve.pieceStart(piece), curve.pieceStart(piece + 1));
    return curve.sampleAt(piece, curve.parameterAt(piece, u)).psi;
  };

  // Minimizer of |psi| on [lo, hi] within one piece.
  auto argminAbsPsi = [&](int piece, double lo, double hi) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = std::abs(psiAt(piece, x1)), f2 = std::abs(psiAt(piece, x2));
    while (hi - lo > opts.rootTol) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = std::abs(psiAt(piece, x1));
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = std::abs(psiAt(piece, x2));
      }
    }
    return 0.5 * (lo + hi);
  };
  // An isolated zero of psi (crossing or touching) is a W+ / W- pair at one
  // point; (*) is tested there, not at the edge of the numerical zero band.
  auto addIsolatedZero = [&](double s, int side, double before, double after) {
    const BoundarySample b = curve.sample(s, side);
    WPoint wp = makeWPoint(curve, b, +1, false), wm = makeWPoint(curve, b, -1, false);
    wp.q = signOf(after);
    wm.q = signOf(before);
    addStar(wp);
    wm.dpsi = wp.dpsi;
    out.wPlus.push_back(wp);
    out.wMinus.push_back(wm);
  };
  auto stepOf = [&](int piece) {
    const double s0 = curve.pieceStart(piece), s1 = curve.pieceStart(piece + 1);
    return (s1 - s0) / std::max(2, static_cast<int>(std::ceil((s1 - s0) / h)));
  };
  // Smooth junctions (the start of each piece) where psi has an isolated zero.
  const int P = curve.pieceCount();
  std::vector<bool> junctionZero(P, false);
  for (int j = 0; j < P; ++j) {
    const int prev = (j + P - 1) % P;
    const double sj = curve.pieceStart(j);
    if (atCorner(curve, sj) || !isZero(psiAt(j, sj))) continue;
    const double after = psiAt(j, sj + stepOf(j));
    const double before = psiAt(prev, curve.pieceStart(prev + 1) - stepOf(prev));
    if (isZero(after) || isZero(before)) continue;
    junctionZero[j] = true;
    const double sa = argminAbsPsi(j, sj, sj + stepOf(j));
    const double endPrev = curve.pieceStart(prev + 1);
    const double sb = argminAbsPsi(prev, endPrev - stepOf(prev), endPrev);
    if (std::abs(psiAt(prev, sb)) < std::abs(psiAt(j, sa)))
      addIsolatedZero(sb, -1, before, after);
    else
      addIsolatedZero(sa, +1, before, after);
  }

  for (int piece = 0; piece < curve.pieceCount(); ++piece) {
    const double s0 = curve.pieceStart(piece), s1 = curve.pieceStart(piece + 1);
    const int n = std::max(2, static_cast<int>(std::ceil((s1 - s0) / h)));
    // Sample strictly inside the piece near its ends so one-sided values
    // belong to this piece.
    std::vector<BoundarySample> smp;
    for (int k = 0; k <= n; ++k) {
      const double s = s0 + (s1 - s0) * k / n;
      smp.push_back(curve.sample(s, k == n ? -1 : +1));
    }
    int charRun = 0;
    for (int k = 0; k <= n; ++k) {
      const BoundarySample& b = smp[k];
      out.s.push_back(b.s);
      out.psi.push_back(b.psi);
      SampleTag tag = b.characteristic ? SampleTag::T1 : isZero(b.psi) ? SampleTag::T2 : SampleTag::T3;
      if ((k == 0 || k == n) && atCorner(curve, b.s)) tag = SampleTag::T0;
      out.tags.push_back(tag);
      charRun = b.characteristic ? charRun + 1 : 0;
      if (charRun >= 3)
        throw UnsupportedBoundary("boundary runs along the characteristic set over a positive length");
    }
    // Isolated zero samples inside the piece.
    std::vector<bool> isolated(n + 1, false);
    isolated[0] = junctionZero[piece];
    isolated[n] = junctionZero[(piece + 1) % P];
    for (int k = 1; k < n; ++k) {
      if (!isZero(smp[k].psi) || isZero(smp[k - 1].psi) || isZero(smp[k + 1].psi)) continue;
      isolated[k] = true;
      addIsolatedZero(argminAbsPsi(piece, smp[k - 1].s, smp[k + 1].s), +1, smp[k - 1].psi, smp[k + 1].psi);
    }
    // Roots and touching zeros of psi inside the piece.
    for (int k = 0; k < n; ++k) {
      const double pa = smp[k].psi, pb = smp[k + 1].psi;
      const bool za = isZero(pa), zb = isZero(pb);
      if (isolated[k] || isolated[k + 1]) continue;
      if (!za && !zb && signOf(pa) != signOf(pb)) {
        double lo = smp[k].s, hi = smp[k + 1].s;
        double plo = pa;
        while (hi - lo > opts.rootTol) {
          const double mid = 0.5 * (lo + hi);
          const double pm = psiAt(piece, mid);
          if (signOf(pm) == signOf(plo)) {
            lo = mid;
            plo = pm;
          } else {
            hi = mid;
          }
        }
        const BoundarySample b = curve.sample(0.5 * (lo + hi), +1);
        WPoint wp = makeWPoint(curve, b, +1, false), wm = makeWPoint(curve, b, -1, false);
        wp.q = signOf(pb);
        wm.q = signOf(pa);
        addStar(wp);
        wm.dpsi = wp.dpsi;
        out.wPlus.push_back(wp);
        out.wMinus.push_back(wm);
      } else if (za != zb) {
        // Boundary between a run along a leaf and W.
        double lo = smp[k].s, hi = smp[k + 1].s;
        while (hi - lo > opts.rootTol) {
          const double mid = 0.5 * (lo + hi);
          (isZero(psiAt(piece, mid)) == za ? lo : hi) = mid;
        }
        const BoundarySample b = curve.sample(za ? hi : lo, +1);
        WPoint w = makeWPoint(curve, b, za ? +1 : -1, false);
        w.q = signOf(za ? pb : pa);
        addStar(w);
        (za ? out.wPlus : out.wMinus).push_back(w);
      } else if (!za && k > 0 && signOf(smp[k - 1].psi) == signOf(pa) && signOf(pa) == signOf(pb) &&
                 std::abs(pa) < std::abs(smp[k - 1].psi) && std::abs(pa) <= std::abs(pb)) {
        // Local minimum of |psi|: look for a touching zero.
        const double sm = argminAbsPsi(piece, smp[k - 1].s, smp[k + 1].s);
        if (std::abs(psiAt(piece, sm)) < 100.0 * opts.zeroTol) addIsolatedZero(sm, +1, pa, pa);
      }
    }
  }

  // Corners.
  for (double sc : curve.corners()) {
    const BoundarySample in = curve.sample(sc, -1), outS = curve.sample(sc, +1);
    CornerDatum c;
    c.s = sc;
    c.uv = outS.uv;
    c.vIn = in.gdotParam;
    c.vOut = outS.gdotParam;
    c.characteristic = in.characteristic || outS.characteristic;
    c.beta = cornerAngle(curve.structure(), curve.patch(), c.uv, c.vIn, c.vOut, 1.0);
    const bool eIn = isZero(in.psi), eOut = isZero(outS.psi);
    c.cls = eIn && eOut ? CornerClass::S2 : (eIn || eOut) ? CornerClass::S1 : CornerClass::S0;
    c.sign = signOf(in.psi * outS.psi);
    if (!in.characteristic) {
      c.pMinus = signOf(in.cosTheta);
      c.qMinus = signOf(in.sinTheta);
    }
    if (!outS.characteristic) {
      c.pPlus = signOf(outS.cosTheta);
      c.qPlus = signOf(outS.sinTheta);
    }
    // One-sided W membership: psi vanishes at the corner but not just beyond.
    const double probe = std::min(1e-6 * L, 0.1 * h);
    if (eOut) {
      const double beyond = curve.sample(sc + probe, +1).psi;
      if (!isZero(beyond)) {
        WPoint w = makeWPoint(curve, outS, +1, true);
        w.q = signOf(beyond);
        c.qPlus = w.q;
        addStar(w);
        out.wPlus.push_back(w);
      }
    }
    if (eIn) {
      const double before = curve.sample(sc - probe, -1).psi;
      if (!isZero(before)) {
        WPoint w = makeWPoint(curve, in, -1, true);
        w.q = signOf(before);
        c.qMinus = w.q;
        addStar(w);
        out.wMinus.push_back(w);
      }
    }
    out.corners.push_back(c);
  }
  return out;
}

BoundaryRhs gbBoundaryRhs(const BoundaryCurve& curve, const BoundaryClassification& cls, double slope) {
  (void)curve;
  if (!cls.starOk) throw StarViolation("condition (*) fails; the boundary formula does not apply");
  const double halfPi = std::numbers::pi / 2.0;
  BoundaryRhs r;
  r.slope = slope;
  for (const CornerDatum& c : cls.corners) {
    switch (c.cls) {
      case CornerClass::S2: r.s2 += c.beta; break;
      case CornerClass::S1: r.s1 += halfPi * signOf(c.beta); break;
      case CornerClass::S0: r.s0 += halfPi * (1.0 - c.qPlus * c.qMinus) * signOf(c.beta); break;
    }
  }
  for (const WPoint& w : cls.wPlus) {
    if (w.characteristic) continue;
    r.wSigns += halfPi * w.p * w.q;
    r.wCurvature += halfPi * w.kE0 / w.dtheta * w.q;
  }
  for (const WPoint& w : cls.wMinus) {
    if (w.characteristic) continue;
    r.wSigns -= halfPi * w.p * w.q;
    r.wCurvature -= halfPi * w.kE0 / w.dtheta * w.q;
  }
  return r;
}

BoundaryIntegral riemannianBoundaryTerms(const BoundaryCurve& curve, double eps, const QuadratureOptions& opts) {
  BoundaryIntegral out;
  const ContactStructure& cs = curve.structure();
  const SurfacePatch& patch = curve.patch();
  for (int i = 0; i < curve.pieceCount(); ++i) {
    const auto [t0, t1] = curve.pieceRange(i);
    out.curvature += integrate1D(
                         [&](double t) {
                           const CurveJet c = curve.jet(i, t);
                           const Eigen::Matrix3d g = gramEps(coframeAt(cs, c.p), eps);
                           return geodesicCurvatureAt(curve, i, t, eps) * std::sqrt(c.d1.dot(g * c.d1));
                         },
                         t0, t1, opts)
                         .value;
  }
  for (double sc : curve.corners()) {
    const BoundarySample in = curve.sample(sc, -1), outS = curve.sample(sc, +1);
    out.angles += cornerAngle(cs, patch, outS.uv, in.gdotParam, outS.gdotParam, eps);
  }
  return out;
}

double starExperimentIntegral(const std::string& psi, double t0, double t1, double eps) {
  const Expression e = Expression::parse(psi, kCurveVars);
  QuadratureOptions o;
  o.order = 8;
  o.rtol = 1e-10;
  o.atol = 1e-14;
  o.maxDepth = 40;
  return integrate1D(
             [&](double t) {
               using J = Jet<1, 1>;
               const J p = e.eval(std::array<J, 1>{J::variable(0, t)});
               const double v = p.value();
               const double thetaDot = std::abs(p.firstPartial(0)) / std::sqrt(std::max(1e-300, 1.0 - v * v));
               return std::sqrt(eps) * thetaDot / (eps + (1.0 - eps) * v * v);
             },
             t0, t1, o)
      .value;
}

}  // namespace srgb
