#pragma once

// Deterministic quadrature over parameter rectangles and over the shrinking
// regions {|a| > 1 - c}, the slope-at-zero estimator, and the two model
// integrals I1, I2 over [-1, -sqrt(1 - rho^2)].

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "srgb/surface.hpp"

namespace srgb {

class NonConvergent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class IllConditionedFit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  int order = 4;          // Gauss-Legendre nodes per cell and axis
  double rtol = 1e-6;
  double atol = 1e-12;
  int maxDepth = 12;
  int initialCells = 8;   // per axis, before refinement
  int scanPoints = 128;   // level-set search along the inner axis
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  long nodes = 0;
};

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
const std::pair<std::vector<double>, std::vector<double>>& gaussLegendre(int n);

QuadratureResult integrate1D(const std::function<double(double)>& f, double a, double b,
                             const QuadratureOptions& opts = {});

using SurfaceIntegrand = std::function<double(const Eigen::Vector2d&)>;

/// Adaptive tensor-cell quadrature over the rectangle [lo, hi]; a cell is
/// split into four when its rule and its children's disagree beyond the
/// cell's share of the tolerance.
QuadratureResult integrateRectangle(const SurfaceIntegrand& f, const Eigen::Vector2d& lo, const Eigen::Vector2d& hi,
                                    const QuadratureOptions& opts = {});

/// Integral over the patch with its caps removed, extrapolated to zero cap
/// radius from radii rho, rho/2, rho/4. `f` must include the area density.
QuadratureResult integrateSurface(const SurfaceIntegrand& f, const SurfacePatch& patch,
                                  const QuadratureOptions& opts = {});
QuadratureResult integrateSurface(const SurfaceIntegrand& f, const std::vector<SurfacePatch>& patches,
                                  const QuadratureOptions& opts = {});

/// Pointwise integrand on the adapted frame (without the area density).
using FrameIntegrand = std::function<double(const SurfacePointFrame&)>;

struct CumulativeProfile {
  std::vector<double> c;        // strictly decreasing ladder
  std::vector<double> A;        // integral over {|a| > 1 - c}
  std::vector<double> Aplus;    // part with a > 0
  std::vector<double> Aminus;   // part with a < 0
  long nodes = 0;
  double slope = 0.0;
  double residual = 0.0;
  int windowBegin = 0;
  int windowEnd = 0;  // exclusive
};

/// c_k = c0 * 2^-k for k = 0..halvings.
std::vector<double> geometricLadder(double c0 = 0.2, int halvings = 8);

/// Integrals of `integrand` dsigma over {|a| > 1 - c} for every c in `ladder`.
CumulativeProfile regionProfile(const ContactStructure& cs, const SurfacePatch& patch,
                                const std::vector<double>& ladder, const FrameIntegrand& integrand,
                                const QuadratureOptions& opts = {});
double regionIntegralA(const ContactStructure& cs, const SurfacePatch& patch, double c,
                       const QuadratureOptions& opts = {});

/// Least-squares slope through the origin (weights 1/c^2) on the window of
/// at least three consecutive samples with the smallest relative residual.
/// Throws IllConditionedFit when that residual exceeds 10% of |slope| * mean c.
void slopeAtZero(CumulativeProfile& profile);

/// Closed forms of I1 and I2; requires 0 < eps < 1, 0 <= rho <= 1.
std::pair<double, double> I1I2(double eps, double rho);
/// I2 as printed in the source (differs from the integral; kept for reports).
double I2AsPrinted(double eps, double rho);
/// Direct adaptive quadrature of the defining integrals.
std::pair<double, double> I1I2Numeric(double eps, double rho);

/// Integral of B_{1,-1} / b0 dsigma over a closed patch.
QuadratureResult checkB1m1Identity(const ContactStructure& cs, const SurfacePatch& patch,
                                   const QuadratureOptions& opts = {});

}  // namespace srgb
