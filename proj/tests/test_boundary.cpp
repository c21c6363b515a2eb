#include <doctest.h>

#include <numbers>

#include "helpers.hpp"
#include "srgb/checks.hpp"

using namespace srgb;

namespace {

constexpr double kPi = std::numbers::pi;

BoundaryCurve curveOf(const std::string& id) {
  const SurfaceFixture& s = testing::fixtures().surface(id);
  return BoundaryCurve::build(testing::heisenberg(), s.patch, s.boundary, s.params);
}

SurfacePatch bigPlane() {
  SurfacePatch p = SurfacePatch::parse("plane", {"u", "v", "0"});
  p.lo = Eigen::Vector2d(-3, -3);
  p.hi = Eigen::Vector2d(3, 3);
  return p;
}

}  // namespace

TEST_SUITE("boundary_core") {
  TEST_CASE("equator of the hemisphere: psi never vanishes, no W points") {
    const BoundaryCurve c = curveOf("hemisphere");
    const BoundaryClassification cls = classifyBoundary(c);
    CHECK(cls.starOk);
    CHECK(cls.wPlus.empty());
    CHECK(cls.wMinus.empty());
    CHECK(cls.corners.empty());
    const BoundaryRhs rhs = gbBoundaryRhs(c, cls, 1.25);
    CHECK(rhs.total() == doctest::Approx(1.25));
  }

  TEST_CASE("geodesic curvature of the unit circle in z = 0 is constant and route-independent") {
    const Row spread = checks::geodesicCurvatureSpread(testing::heisenberg(), testing::fixtures().surface("disk-z0"));
    CHECK(spread.pass());
    const BoundaryCurve c = curveOf("disk-z0");
    for (double s : {0.3, 2.0, 5.1})
      for (double eps : {1.0, 0.3, 0.05})
        CHECK(geodesicCurvatureEps(c, s, eps) == doctest::Approx(geodesicCurvatureEpsExpansion(c, s, eps)).epsilon(1e-9));
  }

  TEST_CASE("transversal crossings of the offset disk give W points worth 2 pi") {
    const BoundaryCurve c = curveOf("disk-offset");
    const BoundaryClassification cls = classifyBoundary(c);
    CHECK(cls.starOk);
    CHECK(cls.wPlus.size() == 2);
    CHECK(cls.wMinus.size() == 2);
    for (const WPoint& w : cls.wPlus) CHECK_FALSE(w.characteristic);
    // No characteristic point on the surface, so the slope vanishes.
    CHECK(gbBoundaryRhs(c, cls, 0.0).total() == doctest::Approx(2.0 * kPi).epsilon(1e-9));
  }

  TEST_CASE("square in z = 0: corner classes and angles") {
    const BoundaryCurve c = curveOf("wedge");
    const BoundaryClassification cls = classifyBoundary(c);
    REQUIRE(cls.corners.size() == 4);
    int counts[3] = {0, 0, 0};
    for (const CornerDatum& d : cls.corners) {
      ++counts[static_cast<int>(d.cls)];
      if (d.cls == CornerClass::S2) {
        CHECK(d.characteristic);
        CHECK(d.beta == doctest::Approx(kPi / 2));
      }
      if (d.cls == CornerClass::S0) CHECK(d.sign == 1);
    }
    CHECK(counts[0] == 1);
    CHECK(counts[1] == 2);
    CHECK(counts[2] == 1);
    const BoundaryRhs rhs = gbBoundaryRhs(c, cls, 0.0);
    CHECK(rhs.s2 == doctest::Approx(kPi / 2));
    CHECK(rhs.s1 == doctest::Approx(kPi));
    CHECK(rhs.s0 == doctest::Approx(0.0));
    CHECK_THROWS_AS(geodesicCurvatureEps(c, c.corners()[1], 1.0), CornerPoint);
  }

  TEST_CASE("corner-angle limit table") {
    for (const Row& r : checks::cornerAngleTable(testing::heisenberg(), 1e-3)) {
      INFO(r.quantity << " = " << r.value << " vs " << r.reference);
      CHECK(r.pass());
    }
    const SurfacePatch plane = bigPlane();
    CHECK_THROWS_AS(cornerAngle(testing::heisenberg(), plane, Eigen::Vector2d(1, 1), Eigen::Vector2d::Zero(),
                                Eigen::Vector2d(1, 0), 1.0),
                    ZeroVector);
  }

  TEST_CASE("Riemannian Gauss-Bonnet with boundary on the square and the offset disk") {
    for (const char* id : {"wedge", "disk-offset"})
      for (double eps : {1.0, 0.5}) {
        const Row r = checks::riemannianBoundaryGB(testing::heisenberg(), testing::fixtures().surface(id), eps);
        INFO(id << " eps " << eps << ": " << r.value << " " << r.note);
        CHECK(r.pass());
      }
  }

  TEST_CASE("star violation: psi with a double zero") {
    // psi is proportional to r^2 (1 - cos t): tangent to E at t = 0 without crossing.
    const std::vector<CurvePiece> piece{{"(2 + 0.5*sin(t))*cos(t - sin(t))", "(2 + 0.5*sin(t))*sin(t - sin(t))", 0.0,
                                         2.0 * kPi}};
    const BoundaryCurve c = BoundaryCurve::build(testing::heisenberg(), bigPlane(), piece);
    const BoundaryClassification cls = classifyBoundary(c);
    CHECK_FALSE(cls.starOk);
    CHECK_FALSE(cls.warnings.empty());
    CHECK_THROWS_AS(gbBoundaryRhs(c, cls, 0.0), StarViolation);
    // Same touching zero away from the parameter seam, at t = 1.
    const std::vector<CurvePiece> shifted{
        {"(2 + 0.5*sin(t))*cos(t - sin(t - 1))", "(2 + 0.5*sin(t))*sin(t - sin(t - 1))", 0.0, 2.0 * kPi}};
    CHECK_FALSE(classifyBoundary(BoundaryCurve::build(testing::heisenberg(), bigPlane(), shifted)).starOk);
    // A circle around the origin never touches E.
    const std::vector<CurvePiece> circle{{"1.5*cos(t)", "1.5*sin(t)", 0.0, 2.0 * kPi}};
    CHECK(classifyBoundary(BoundaryCurve::build(testing::heisenberg(), bigPlane(), circle)).starOk);
    // The eps-weighted integral near a double zero does not vanish as eps -> 0.
    const double i4 = starExperimentIntegral("(t - 1)^2", 0.0, 2.0, 1e-4);
    const double i6 = starExperimentIntegral("(t - 1)^2", 0.0, 2.0, 1e-6);
    CHECK(i6 == doctest::Approx(i4).epsilon(1e-3));
    CHECK(i6 > 1.0);
  }

  TEST_CASE("a stationary curve raises ZeroVector") {
    const std::vector<CurvePiece> piece{{"0.5", "0.5", 0.0, 1.0}};
    auto run = [&] { classifyBoundary(BoundaryCurve::build(testing::heisenberg(), bigPlane(), piece)); };
    CHECK_THROWS_AS(run(), ZeroVector);
  }

  TEST_CASE("open chains of pieces are rejected") {
    const std::vector<CurvePiece> open{{"t", "0", 0.0, 1.0}, {"1", "t", 0.0, 1.0}};
    CHECK_THROWS_AS(BoundaryCurve::build(testing::heisenberg(), bigPlane(), open), std::invalid_argument);
  }

  TEST_CASE("q+- signs agree at eps = 1 and 0.1") {
    const SurfaceFixture& s = testing::fixtures().surface("wedge");
    const BoundaryCurve c = curveOf("wedge");
    const BoundaryClassification cls = classifyBoundary(c);
    for (const CornerDatum& d : cls.corners)
      for (int side : {-1, 1}) {
        const double at = d.s + side * 1e-4 * c.length();
        const BoundarySample b = c.sample(std::fmod(at + c.length(), c.length()), side);
        if (b.characteristic) continue;
        const SurfacePointFrame f = adaptedFrame(testing::heisenberg(), s.patch, b.uv, 1.0);
        const ChartPoint p = s.patch(b.uv);
        const double v1 = testing::heisenberg().metricEps(p, f.X2, b.gdot, 1.0);
        const double v2 = testing::heisenberg().metricEps(p, f.X2, b.gdot, 0.1);
        CHECK((v1 > 0) == (v2 > 0));
      }
  }

  TEST_CASE("order-zero T3 term decays like sqrt(eps) away from psi = 0") {
    const BoundaryCurve c = curveOf("disk-z0");
    const double v4 = t3OrderZeroTerm(c, 1.8, 5.2, 1e-4);
    const double v6 = t3OrderZeroTerm(c, 1.8, 5.2, 1e-6);
    CHECK(std::abs(v6) < std::abs(v4));
    CHECK(std::abs(v6 / v4) == doctest::Approx(0.1).epsilon(1e-2));
  }
}
