#pragma once

// Boundary curves of a surface patch: h-arclength, the angle theta against
// the adapted frame, psi = alpha(gamma'), eps-geodesic curvature, corner
// angles, the W+/W- classification and the right-hand side of the
// Gauss-Bonnet formula with boundary.

#include <optional>
#include <string>
#include <vector>

#include "srgb/quadrature.hpp"

namespace srgb {

class CornerPoint : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class StarViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class UnsupportedBoundary : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ZeroVector : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One C^2 piece t -> (u(t), v(t)), t in [t0, t1].
struct CurvePiece {
  std::string u, v;
  double t0 = 0.0, t1 = 1.0;
};

/// Position, first and second chart derivatives of a piece at t.
struct CurveJet {
  Eigen::Vector2d uv, duv, dduv;  // parameter space, d/dt
  ChartPoint p;
  Eigen::Vector3d d1, d2;  // chart, d/dt
};

/// Everything the boundary analysis needs at one point of one piece.
struct BoundarySample {
  double s = 0.0;  // h-arclength
  int piece = 0;
  double t = 0.0;
  Eigen::Vector2d uv;
  Eigen::Vector3d gdot;   // h-unit tangent (chart components)
  Eigen::Vector2d gdotParam;
  double a = 0.0;
  bool characteristic = false;
  double psi = 0.0, dpsi = 0.0;  // alpha(gdot) and d/ds
  // Defined away from characteristic points only.
  double theta = 0.0, dtheta = 0.0;
  double cosTheta = 1.0, sinTheta = 0.0;
};

class BoundaryCurve {
 public:
  static BoundaryCurve build(const ContactStructure& cs, const SurfacePatch& patch, const std::vector<CurvePiece>& pieces,
                             const std::map<std::string, double>& params = {});

  const ContactStructure& structure() const { return cs_; }
  const SurfacePatch& patch() const { return patch_; }
  double length() const { return offsets_.back(); }
  int pieceCount() const { return static_cast<int>(pieces_.size()); }
  /// Arclength positions of the junctions where the tangent jumps.
  const std::vector<double>& corners() const { return corners_; }
  /// Arclength position of the start of piece i.
  double pieceStart(int i) const { return offsets_[i]; }

  std::pair<double, double> pieceRange(int i) const { return {pieces_.at(i).t0, pieces_.at(i).t1}; }
  /// Parameter of piece `piece` at arclength s (clamped to the piece).
  double parameterAt(int piece, double s) const;

  CurveJet jet(int piece, double t) const;
  /// h-speed |d gamma/dt|_h.
  double hSpeed(int piece, double t) const;
  /// Piece and parameter at arclength s. At a junction side = -1 picks the
  /// piece ending there, +1 the piece starting there.
  std::pair<int, double> locate(double s, int side = +1) const;
  BoundarySample sample(double s, int side = +1) const;
  BoundarySample sampleAt(int piece, double t) const;

 private:
  BoundaryCurve(ContactStructure cs, SurfacePatch patch) : cs_(std::move(cs)), patch_(std::move(patch)) {}
  double arclength(int piece, double t) const;

  ContactStructure cs_;
  SurfacePatch patch_;
  struct Piece {
    std::array<Expression, 2> map;
    double t0, t1;
  };
  std::vector<Piece> pieces_;
  std::vector<double> offsets_;  // size pieces + 1
  std::vector<std::vector<double>> tables_;  // cumulative arclength per piece
  std::vector<double> corners_;
};

/// psi = alpha(gdot) and theta with gdot = cos(theta) X + sin(theta) X2.
/// Throws CharacteristicPoint for theta at |a| = 1.
std::pair<double, double> psiTheta(const BoundaryCurve& curve, double s);

/// Geodesic curvature of the boundary for h_eps, definitional route:
/// <D^eps gdot, I^eps gdot>_eps / |gdot|_eps^3. Valid at characteristic
/// points as well.
double geodesicCurvatureEps(const BoundaryCurve& curve, double s, double eps);
/// Same quantity through the expansion in k_Sigma, the tau term and
/// -a psi / eps, plus the normal-projection term the expansion leaves out.
double geodesicCurvatureEpsExpansion(const BoundaryCurve& curve, double s, double eps);
/// The expansion exactly as displayed, without the projection term.
double geodesicCurvatureEpsExpansionAsPrinted(const BoundaryCurve& curve, double s, double eps);
/// k_Sigma = <D_s gdot + psi tau gdot, I^1 gdot> for the adapted connection.
double kSigmaBoundary(const BoundaryCurve& curve, double s);

/// Limit of the h_eps geodesic curvature of the leaf through uv, oriented by X.
double leafCurvatureKE0(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv);
/// The h_eps geodesic curvature of the leaf through uv (diagnostic).
double leafCurvatureEps(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv, double eps);

/// Oriented h_eps angle from v to w (parameter components at uv).
double cornerAngle(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv,
                   const Eigen::Vector2d& v, const Eigen::Vector2d& w, double eps);
/// lim |beta^eps| from the three-case table.
double cornerAngleLimit(const ContactStructure& cs, const SurfacePatch& patch, const Eigen::Vector2d& uv,
                        const Eigen::Vector2d& v, const Eigen::Vector2d& w);

enum class CornerClass { S0, S1, S2 };

struct CornerDatum {
  double s = 0.0;
  Eigen::Vector2d uv;
  Eigen::Vector2d vIn, vOut;  // one-sided parameter tangents
  double beta = 0.0;          // eps = 1
  CornerClass cls = CornerClass::S0;
  int sign = 0;               // sign(alpha(vIn) alpha(vOut)), S0 only
  int pMinus = 0, pPlus = 0, qMinus = 0, qPlus = 0;
  bool characteristic = false;
};

enum class SampleTag { T0, T1, T2, T3 };

/// A point of W+ or W-: a one-sided limit point of W with psi = 0 on that side.
struct WPoint {
  double s = 0.0;
  int side = +1;  // +1: W+, limit from the right; -1: W-, from the left
  bool atCorner = false;
  bool characteristic = false;
  double dpsi = 0.0;  // one-sided d psi / ds
  double dtheta = 0.0;
  double kE0 = 0.0;
  int p = 0, q = 0;
};

struct BoundaryClassification {
  std::vector<double> s;  // samples
  std::vector<double> psi;
  std::vector<SampleTag> tags;
  std::vector<WPoint> wPlus, wMinus;
  std::vector<CornerDatum> corners;
  bool starOk = true;
  std::vector<std::string> warnings;
};

struct ClassifyOptions {
  double step = 1e-3;        // sample spacing as a fraction of the length
  double rootTol = 1e-10;
  double starTol = 1e-6;
  double zeroTol = 1e-9;     // |psi| below this counts as tangent to E
};

BoundaryClassification classifyBoundary(const BoundaryCurve& curve, const ClassifyOptions& opts = {});

/// Itemized right-hand side of the boundary formula.
struct BoundaryRhs {
  double slope = 0.0;
  double characteristicArc = 0.0;
  double s2 = 0.0, s1 = 0.0, s0 = 0.0;
  double wSigns = 0.0;
  double wCurvature = 0.0;
  double total() const { return slope + characteristicArc + s2 + s1 + s0 + wSigns + wCurvature; }
};

/// Requires star_ok; `slope` is the fitted slope of the interior profile.
/// The W-sums run over every non-characteristic point of W+ and W-,
/// transversal crossings included.
BoundaryRhs gbBoundaryRhs(const BoundaryCurve& curve, const BoundaryClassification& cls, double slope);

/// Boundary part of the Riemannian formula for h_eps: integral of k_g^eps
/// ds^eps over the pieces and the sum of the exterior angles beta^eps.
struct BoundaryIntegral {
  double curvature = 0.0;
  double angles = 0.0;
};
BoundaryIntegral riemannianBoundaryTerms(const BoundaryCurve& curve, double eps, const QuadratureOptions& opts = {});

/// First integral of the T3 split over [s0, s1] (no corner inside):
/// sqrt(eps) b_eps (k_Sigma - eps b0 <tau gdot, gdot> cos theta) / (eps + (1 - eps) psi^2).
/// On an interval where psi is bounded away from zero it is O(sqrt eps).
double t3OrderZeroTerm(const BoundaryCurve& curve, double s0, double s1, double eps,
                       const QuadratureOptions& opts = {});

/// Integral of sqrt(eps) |theta'| b_eps / (eps + (1 - eps) psi^2) over
/// [t0, t1] for a user psi(t), taking b0 = 1 (so psi = sin theta, b_eps = 1).
double starExperimentIntegral(const std::string& psi, double t0, double t1, double eps);

}  // namespace srgb
