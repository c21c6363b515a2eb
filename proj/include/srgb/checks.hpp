#pragma once

// Verification building blocks shared by the scenario runner and the
// acceptance binary. Each returns report rows with their tolerances.

#include <cstdint>
#include <vector>

#include "srgb/fixtures.hpp"
#include "srgb/report.hpp"

namespace srgb::checks {

/// Random parameter points outside the caps with |a| <= aMax.
std::vector<Eigen::Vector2d> samplePoints(const ContactStructure& cs, const SurfacePatch& patch, int count,
                                          std::uint64_t seed, double aMax);

std::vector<Row> structureIdentities(const ContactStructure& cs, int points, std::uint64_t seed,
                                     double tol = 1e-7);
std::vector<Row> tauOracle(const ContactStructure& cs, int points, std::uint64_t seed, double tol = 1e-6);
std::vector<Row> curvatureExpansion(const ContactStructure& cs, int points, const std::vector<double>& eps,
                                    std::uint64_t seed, double tol = 1e-6);

std::vector<Row> gaussVsBrioschi(const ContactStructure& cs, const SurfacePatch& patch,
                                 const std::vector<Eigen::Vector2d>& pts, const std::vector<double>& eps,
                                 double tol = 1e-6);
std::vector<Row> secondFundamentalForm(const ContactStructure& cs, const SurfacePatch& patch,
                                       const std::vector<Eigen::Vector2d>& pts, const std::vector<double>& eps,
                                       double tolForms = 1e-8, double tolOracle = 1e-6);
Row xaIdentityGrid(const ContactStructure& cs, const SurfacePatch& patch, int n = 64, double aMax = 0.95,
                   double tol = 1e-6);
std::vector<Row> recombination(const ContactStructure& cs, const SurfacePatch& patch,
                               const std::vector<Eigen::Vector2d>& pts, const std::vector<double>& eps,
                               double tol = 1e-6);

/// Integral of K^eps dsigma^eps over the patch (caps extrapolated).
QuadratureResult integralK(const ContactStructure& cs, const SurfacePatch& patch, double eps,
                           const QuadratureOptions& opts = {});
Row gaussBonnetClosed(const ContactStructure& cs, const SurfacePatch& patch, double eps, int euler,
                      const QuadratureOptions& opts = {});

/// Slope at c = 0 of the K_{Sigma,E} profile against 2 pi chi (2% relative,
/// or exactly 0 when chi = 0), plus the corrected integrand and the
/// sqrt(1 - a^2) variant as informational rows.
std::vector<Row> limitSlope(const ContactStructure& cs, const SurfaceFixture& surface,
                            const std::vector<double>& ladder, const QuadratureOptions& opts = {},
                            bool diagnostics = true);
Row b1m1Identity(const ContactStructure& cs, const SurfacePatch& patch, double tol = 1e-3,
                 const QuadratureOptions& opts = {});
/// Closed forms against quadrature on an n x n grid, and the eps -> 0 limits.
std::vector<Row> i1i2(int n = 5, double tol = 1e-8, double limitTol = 1e-2);

struct BoundaryOptions {
  std::vector<double> eps{1.0, 0.5};
  std::vector<double> ladder = geometricLadder();
  QuadratureOptions quad;
  std::uint64_t seed = 1;
  bool diagnostics = true;
};
/// Integral of K^eps plus the boundary curvature and exterior angles, against 2 pi chi.
Row riemannianBoundaryGB(const ContactStructure& cs, const SurfaceFixture& surface, const BoundaryCurve& curve,
                         double eps, const QuadratureOptions& opts = {});
Row riemannianBoundaryGB(const ContactStructure& cs, const SurfaceFixture& surface, double eps,
                         const QuadratureOptions& opts = {});
std::vector<Row> boundary(const ContactStructure& cs, const SurfaceFixture& surface, const BoundaryOptions& opts);
/// Spread of k_g^1 over eight equally spaced boundary points.
Row geodesicCurvatureSpread(const ContactStructure& cs, const SurfaceFixture& surface, double tol = 1e-7);
/// |beta^eps| at eps = 1e-8 against the three-case limit table.
std::vector<Row> cornerAngleTable(const ContactStructure& cs, double tol = 1e-3);
std::vector<Row> starExperiment(const std::string& psi, double t0, double t1, const std::vector<double>& eps);

}  // namespace srgb::checks
