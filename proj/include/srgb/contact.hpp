#pragma once

// Contact sub-Riemannian structure generated by a declared orthonormal frame
// (A, B) of the distribution E, and the family of taming metrics g_eps in
// which the Reeb field Z is orthogonal to E with <Z, Z>_eps = 1/eps.
//
// Everything pointwise is exposed twice: as templated jet routines operating
// on a StructureJet (used by the surface and boundary code, which need
// derivatives), and as plain double-valued member functions.

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "srgb/fields.hpp"
#include "srgb/linalg.hpp"

namespace srgb {

class DegenerateContact : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class SingularFrame : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChartBox {
  Eigen::Vector3d lo{-1.0, -1.0, -1.0};
  Eigen::Vector3d hi{1.0, 1.0, 1.0};
};

struct ContactFrame {
  std::string name;
  SmoothVectorField a;
  SmoothVectorField b;
  ChartBox box;
  /// +1: (A, B) is the positive basis of E; -1: (A, -B) is.
  int orientation = 1;
};

/// Taming parameter; eps = 1 gives the reference metric g.
class Epsilon {
 public:
  explicit Epsilon(double v) : v_(v) {
    if (!(v > 0.0)) throw std::invalid_argument("epsilon must be strictly positive");
  }
  double value() const { return v_; }
  operator double() const { return v_; }  // NOLINT

 private:
  double v_;
};

/// Jets of the structure about one chart point. Validity: frame fields to
/// order K, alpha to K-1, Z / coframe / metric to K-2, Christoffel symbols
/// and tau to K-3.
template <int K>
struct StructureJet {
  using J = Jet3<K>;
  ChartPoint p;
  JetVec3<K> a, b, z;
  JetVec3<K> alpha;
  Mat3<J> frame;    // columns a, b, z
  Mat3<J> coframe;  // frame^{-1}; rows are the dual covectors, row 2 is alpha
  std::array<Mat3<J>, 3> gamma1;  // gamma1[k](i, j) = Gamma^k_ij of g
  Mat2<J> tau;                    // <tau e_i, e_j> for e = (a, b)
};

namespace structure {

template <int K>
Vec3<Jet3<K>> coefficients(const StructureJet<K>& s, const JetVec3<K>& v) {
  return s.coframe * v;
}

template <int K>
Jet3<K> alphaOf(const StructureJet<K>& s, const JetVec3<K>& v) {
  return s.coframe(2, 0) * v(0) + s.coframe(2, 1) * v(1) + s.coframe(2, 2) * v(2);
}

template <int K>
Jet3<K> metric(const StructureJet<K>& s, const JetVec3<K>& v, const JetVec3<K>& w, double eps) {
  const auto c = coefficients(s, v);
  const auto d = coefficients(s, w);
  return c(0) * d(0) + c(1) * d(1) + c(2) * d(2) * (1.0 / eps);
}

template <int K>
JetVec3<K> fromFrame(const StructureJet<K>& s, const Vec3<Jet3<K>>& c) {
  return c(0) * s.a + c(1) * s.b + c(2) * s.z;
}

template <int K>
JetVec3<K> fromFrame(const StructureJet<K>& s, const Eigen::Vector3d& c) {
  return fromFrame(s, Vec3<Jet3<K>>(Jet3<K>(c(0)), Jet3<K>(c(1)), Jet3<K>(c(2))));
}

template <int K>
JetVec3<K> applyJ(const StructureJet<K>& s, const JetVec3<K>& v) {
  const auto c = coefficients(s, v);
  return c(0) * s.b - c(1) * s.a;
}

template <int K>
JetVec3<K> applyTau(const StructureJet<K>& s, const JetVec3<K>& v) {
  const auto c = coefficients(s, v);
  return (s.tau(0, 0) * c(0) + s.tau(0, 1) * c(1)) * s.a + (s.tau(0, 1) * c(0) + s.tau(1, 1) * c(1)) * s.b;
}

template <int K>
JetVec3<K> projectE(const StructureJet<K>& s, const JetVec3<K>& v) {
  return v - alphaOf(s, v) * s.z;
}

template <int K>
JetVec3<K> contractGamma(const std::array<Mat3<Jet3<K>>, 3>& gamma, const JetVec3<K>& v,
                         const JetVec3<K>& w) {
  JetVec3<K> r;
  for (int k = 0; k < 3; ++k) r(k) = v.dot(gamma[k] * w);
  return r;
}

/// Christoffel symbols of the chart metric of g_eps.
template <int K>
std::array<Mat3<Jet3<K>>, 3> christoffel(const StructureJet<K>& s, double eps) {
  using J = Jet3<K>;
  Mat3<J> scaled = s.coframe;
  scaled.row(2) *= J(1.0 / eps);
  const Mat3<J> g = s.coframe.transpose() * scaled;
  Mat3<J> frameScaled = s.frame;
  frameScaled.col(2) *= J(eps);
  const Mat3<J> ginv = frameScaled * s.frame.transpose();
  std::array<Mat3<J>, 3> dg;
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dg[l](i, j) = g(i, j).d(l);
  std::array<Mat3<J>, 3> gamma;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        J acc(0.0);
        for (int l = 0; l < 3; ++l) acc += ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        gamma[k](i, j) = 0.5 * acc;
      }
  return gamma;
}

/// Levi-Civita derivative from chart Christoffel symbols.
template <int K>
JetVec3<K> chartConnection(const std::array<Mat3<Jet3<K>>, 3>& gamma, const JetVec3<K>& v,
                           const JetVec3<K>& w) {
  return derivativeAlong(w, v) + contractGamma(gamma, v, w);
}

/// The connection adapted to the splitting E + span(Z): Z parallel,
/// nabla_Z X = [Z, X] + tau X and nabla_X Y = pr_E nabla^1_X Y on E,
/// extended by tensoriality in the first slot.
template <int K>
JetVec3<K> nabla(const StructureJet<K>& s, const JetVec3<K>& v, const JetVec3<K>& w) {
  const JetVec3<K> vh = projectE(s, v);
  const Jet3<K> av = alphaOf(s, v);
  const Jet3<K> aw = alphaOf(s, w);
  const JetVec3<K> wh = w - aw * s.z;
  const JetVec3<K> horizontal = projectE(s, chartConnection(s.gamma1, vh, wh));
  const JetVec3<K> vertical = av * (lieBracket(s.z, wh) + applyTau(s, wh));
  return horizontal + vertical + derivativeAlong(aw, v) * s.z;
}

/// Levi-Civita connection of g_eps assembled from nabla via
/// Q_eps = J/2 - eps tau.
template <int K>
JetVec3<K> nablaEps(const StructureJet<K>& s, const JetVec3<K>& v, const JetVec3<K>& w, double eps) {
  const JetVec3<K> qv = 0.5 * applyJ(s, v) - eps * applyTau(s, v);
  return nabla(s, v, w) + metric(s, qv, w, 1.0) * s.z - (1.0 / eps) * alphaOf(s, w) * qv -
         (0.5 / eps) * alphaOf(s, v) * applyJ(s, w);
}

template <int K>
JetVec3<K> torsion(const StructureJet<K>& s, const JetVec3<K>& v, const JetVec3<K>& w) {
  return nabla(s, v, w) - nabla(s, w, v) - lieBracket(v, w);
}

/// R(V, W)U for a connection given as a callable (V, W) -> nabla_V W.
template <int K, typename Connection>
JetVec3<K> curvature(const Connection& conn, const JetVec3<K>& v, const JetVec3<K>& w, const JetVec3<K>& u) {
  return conn(v, conn(w, u)) - conn(w, conn(v, u)) - conn(lieBracket(v, w), u);
}

template <int K>
JetVec3<K> curvatureEps(const StructureJet<K>& s, const JetVec3<K>& v, const JetVec3<K>& w,
                        const JetVec3<K>& u, double eps) {
  return curvature<K>([&](const JetVec3<K>& x, const JetVec3<K>& y) { return nablaEps(s, x, y, eps); }, v, w,
                      u);
}

template <int K>
JetVec3<K> curvatureAdapted(const StructureJet<K>& s, const JetVec3<K>& v, const JetVec3<K>& w,
                            const JetVec3<K>& u) {
  return curvature<K>([&](const JetVec3<K>& x, const JetVec3<K>& y) { return nabla(s, x, y); }, v, w, u);
}

/// (nabla_Y tau) X for jet fields X, Y.
template <int K>
JetVec3<K> nablaTau(const StructureJet<K>& s, const JetVec3<K>& y, const JetVec3<K>& x) {
  return nabla(s, y, applyTau(s, x)) - applyTau(s, nabla(s, y, x));
}

}  // namespace structure

class ContactStructure {
 public:
  /// Builds and validates a contact structure. Throws DegenerateContact when
  /// d(alpha_0)(A, B) vanishes at a probe point and SingularFrame when A and B
  /// are dependent there.
  static ContactStructure build(ContactFrame frame, int probes = 200, std::uint64_t seed = 1);

  /// Metric-only variant for non-contact frames (e.g. the flat fixture): the
  /// third frame vector is the chart cross product of A and B, scaled so that
  /// alpha(Z) = 1. Contact-specific identities do not hold for it.
  static ContactStructure buildRiemannian(ContactFrame frame);

  const ContactFrame& frame() const { return frame_; }
  bool isContact() const { return contact_; }

  template <int K>
  StructureJet<K> at(const ChartPoint& p) const;

  Eigen::Vector3d alpha(const ChartPoint& p) const;
  Eigen::Vector3d reeb(const ChartPoint& p) const;
  double dAlpha(const ChartPoint& p, const Eigen::Vector3d& v, const Eigen::Vector3d& w) const;
  double metricEps(const ChartPoint& p, const Eigen::Vector3d& v, const Eigen::Vector3d& w, double eps) const;
  Eigen::Vector3d applyJ(const ChartPoint& p, const Eigen::Vector3d& v) const;
  Eigen::Vector3d applyTau(const ChartPoint& p, const Eigen::Vector3d& v) const;
  /// Components <tau e_i, e_j> in the positive frame (A, B).
  Eigen::Matrix2d tauMatrix(const ChartPoint& p) const;
  /// Positive orthonormal frame (A, B, Z) as matrix columns.
  Eigen::Matrix3d frameMatrix(const ChartPoint& p) const;

  /// Deterministic probe points in the declared chart box.
  std::vector<ChartPoint> probePoints(int count, std::uint64_t seed) const;

 private:
  ContactStructure(ContactFrame f, bool contact) : frame_(std::move(f)), contact_(contact) {}
  ContactFrame frame_;
  bool contact_ = true;
};

template <int K>
StructureJet<K> ContactStructure::at(const ChartPoint& p) const {
  using J = Jet3<K>;
  StructureJet<K> s;
  s.p = p;
  s.a = frame_.a.jet<K>(p);
  s.b = frame_.b.jet<K>(p);
  if (frame_.orientation < 0) s.b = -s.b;
  const JetVec3<K> n = cross3(s.a, s.b);
  if (contact_) {
    const J scale = dot3(n, lieBracket(s.a, s.b));
    if (std::abs(scale.value()) < 1e-12) throw DegenerateContact("d(alpha_0)(A, B) vanishes at probe point");
    s.alpha = n / scale;
    // Reeb field: alpha(Z) = 1, d(alpha)(Z, A) = d(alpha)(Z, B) = 0.
    Mat3<J> omega;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) omega(i, j) = s.alpha(j).d(i) - s.alpha(i).d(j);
    Mat3<J> sys;
    sys.row(0) = s.alpha.transpose();
    sys.row(1) = (omega * s.a).transpose();
    sys.row(2) = (omega * s.b).transpose();
    Vec3<J> rhs(J(1.0), J(0.0), J(0.0));
    try {
      s.z = solve3<J, 1>(sys, rhs);
    } catch (const SingularMatrix&) {
      throw SingularFrame("Reeb system singular");
    }
  } else {
    const J n2 = dot3(n, n);
    s.alpha = n / n2;
    s.z = n / n2;
    s.z = s.z / dot3(s.alpha, s.z);
  }
  s.frame.col(0) = s.a;
  s.frame.col(1) = s.b;
  s.frame.col(2) = s.z;
  try {
    s.coframe = inverse3(s.frame);
  } catch (const SingularMatrix&) {
    throw SingularFrame("frame (A, B, Z) is singular");
  }
  s.gamma1 = structure::christoffel(s, 1.0);
  // tau from (L_Z g)(X, Y) = Z<X,Y> - <[Z,X],Y> - <X,[Z,Y]> on the frame.
  const JetVec3<K> za = lieBracket(s.z, s.a);
  const JetVec3<K> zb = lieBracket(s.z, s.b);
  const Vec3<J> ca = s.coframe * za;
  const Vec3<J> cb = s.coframe * zb;
  s.tau(0, 0) = -ca(0);
  s.tau(1, 1) = -cb(1);
  s.tau(0, 1) = -0.5 * (ca(1) + cb(0));
  s.tau(1, 0) = s.tau(0, 1);
  return s;
}

// Field-level operations (all fields are evaluated as jets at p).

Eigen::Vector3d nabla(const ContactStructure& cs, const SmoothVectorField& v, const SmoothVectorField& w,
                      const ChartPoint& p);
Eigen::Vector3d nablaEps(const ContactStructure& cs, const SmoothVectorField& v, const SmoothVectorField& w,
                         const ChartPoint& p, double eps);
/// Independent route: Levi-Civita connection of g_eps from chart Christoffel
/// symbols of its metric components.
Eigen::Vector3d nablaEpsKoszul(const ContactStructure& cs, const SmoothVectorField& v,
                               const SmoothVectorField& w, const ChartPoint& p, double eps);
Eigen::Vector3d torsion(const ContactStructure& cs, const SmoothVectorField& v, const SmoothVectorField& w,
                        const ChartPoint& p);
/// T(V, W) = -<JV, W> Z + alpha(V) tau W - alpha(W) tau V.
Eigen::Vector3d torsionFormula(const ContactStructure& cs, const Eigen::Vector3d& v, const Eigen::Vector3d& w,
                               const ChartPoint& p);
Eigen::Vector3d curvatureReps(const ContactStructure& cs, const SmoothVectorField& v, const SmoothVectorField& w,
                              const SmoothVectorField& u, const ChartPoint& p, double eps);

/// |LHS - RHS| of the four curvature expansion identities for a horizontal
/// vector with frame coefficients (cos phi, sin phi) at p.
struct CurvatureExpansion {
  std::array<double, 4> lhs{};
  std::array<double, 4> rhs{};
  std::array<double, 4> residual{};
};
CurvatureExpansion curvatureExpansionResiduals(const ContactStructure& cs, const ChartPoint& p, double phi,
                                               double eps);

/// Named residuals of the structural identities at p (alpha and Z
/// normalization, J and tau algebra, nabla J = 0, L_Z J = 2 J tau, torsion of
/// nabla, and Levi-Civita checks of nabla^eps for eps in {1, 0.3, 0.05}),
/// each the largest absolute value over a few random quadratic test fields.
std::map<std::string, double> structureIdentityResiduals(const ContactStructure& cs, const ChartPoint& p,
                                                         std::uint64_t seed);

/// <tau e_i, e_j> from a finite difference of the pulled-back metric along
/// the flow of Z (flow step 1e-4, central differences); an oracle for tau.
Eigen::Matrix2d tauFlowOracle(const ContactStructure& cs, const ChartPoint& p);

}  // namespace srgb
