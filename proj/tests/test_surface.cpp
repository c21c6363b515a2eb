#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "srgb/checks.hpp"

using namespace srgb;

namespace {

const SurfacePatch& spherePatch() { return testing::fixtures().surface("sphere").patch; }

std::vector<Eigen::Vector2d> points(const ContactStructure& cs, const SurfacePatch& patch, int n) {
  return checks::samplePoints(cs, patch, n, 17, 0.9);
}

bool allPass(const std::vector<Row>& rows) {
  bool ok = true;
  for (const Row& r : rows) {
    INFO(r.quantity << " = " << r.value);
    CHECK(r.pass());
    ok &= r.pass();
  }
  return ok;
}

}  // namespace

TEST_SUITE("surface_core") {
  TEST_CASE("pointwise curvature identities on every fixture surface") {
    const std::vector<double> eps{1.0, 0.3, 0.05};
    for (const ContactStructure* cs : {&testing::heisenberg(), &testing::twisted()})
      for (const std::string& id : testing::fixtures().surfaceIds()) {
        const SurfacePatch& patch = testing::fixtures().surface(id).regionPatch();
        CAPTURE(id);
        const auto pts = points(*cs, patch, 40);
        allPass(checks::gaussVsBrioschi(*cs, patch, pts, eps));
        allPass(checks::secondFundamentalForm(*cs, patch, pts, eps));
        allPass(checks::recombination(*cs, patch, pts, eps));
        for (const auto& uv : pts) CHECK(xaIdentityResidual(*cs, patch, uv) <= 1e-6);
      }
  }

  TEST_CASE("sigma^eps density is b_eps / sqrt(eps) times sigma") {
    const ContactStructure& cs = testing::twisted();
    for (const auto& uv : points(cs, spherePatch(), 50))
      for (double eps : {1.0, 0.5, 0.05}) {
        const CurvaturePanel panel = bPanel(cs, spherePatch(), uv, eps);
        const SurfacePointFrame f = adaptedFrame(cs, spherePatch(), uv, eps);
        CHECK(panel.sigmaEpsDensity / panel.sigmaDensity == doctest::Approx(f.beps / std::sqrt(eps)).epsilon(1e-9));
      }
  }

  TEST_CASE("alpha restricted to the surface is b0 times the contraction of sigma with X") {
    // sqrt(1 - a^2) iota_X sigma = alpha on T Sigma fixes the sign of X.
    const ContactStructure& cs = testing::heisenberg();
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n(0.0, 1.0);
    for (const auto& uv : points(cs, spherePatch(), 50)) {
      const SurfacePointFrame f = adaptedFrame(cs, spherePatch(), uv, 1.0);
      const auto jet = spherePatch().jet<1>(uv);
      Eigen::Matrix<double, 3, 2> T;
      for (int i = 0; i < 3; ++i) T.row(i) << jet[i].firstPartial(0), jet[i].firstPartial(1);
      const Eigen::Vector2d v(n(rng), n(rng));
      Eigen::Matrix2d m;
      m << f.xParam, v;
      const double sigmaXv = f.areaDensity * m.determinant() * spherePatch().orientation;
      CHECK(std::sqrt(1.0 - f.a * f.a) * sigmaXv == doctest::Approx(cs.alpha(f.p).dot(T * v)).epsilon(1e-9));
      CHECK(std::sqrt(1.0 - f.a * f.a) == doctest::Approx(f.b0).epsilon(1e-12));
    }
  }

  TEST_CASE("a is invariant under orientation-preserving reparametrization") {
    const SurfacePatch swapped = spherePatch().swapped();
    for (const auto& uv : points(testing::twisted(), spherePatch(), 30)) {
      const double a = horizontalParameter(testing::twisted(), spherePatch(), uv);
      CHECK(horizontalParameter(testing::twisted(), swapped, Eigen::Vector2d(uv(1), uv(0))) ==
            doctest::Approx(a).epsilon(1e-12));
    }
  }

  TEST_CASE("reversing the orientation of E flips a and keeps K_SigmaE") {
    ContactFrame reversed = testing::heisenberg().frame();
    std::swap(reversed.a, reversed.b);
    const ContactStructure rev = ContactStructure::build(reversed);
    for (const auto& uv : points(testing::heisenberg(), spherePatch(), 50)) {
      const SurfacePointFrame f = adaptedFrame(testing::heisenberg(), spherePatch(), uv, 1.0);
      const SurfacePointFrame g = adaptedFrame(rev, spherePatch(), uv, 1.0);
      CHECK(g.a == doctest::Approx(-f.a).epsilon(1e-12));
      CHECK(std::abs(kSigmaE(g) - kSigmaE(f)) <= 1e-8);
    }
  }

  TEST_CASE("torus of revolution has no characteristic points") {
    const SurfacePatch& torus = testing::fixtures().surface("torus-rev").patch;
    double worst = 0.0;
    for (int i = 0; i < 40; ++i)
      for (int j = 0; j < 40; ++j) {
        const Eigen::Vector2d uv(torus.lo(0) + (i + 0.5) / 40 * (torus.hi(0) - torus.lo(0)),
                                 torus.lo(1) + (j + 0.5) / 40 * (torus.hi(1) - torus.lo(1)));
        worst = std::max(worst, std::abs(horizontalParameter(testing::heisenberg(), torus, uv)));
      }
    CHECK(worst < 0.999);
  }

  TEST_CASE("K^eps of the Euclidean sphere is 1 in the metric-only build") {
    const ContactStructure flat = testing::fixtures().manifold("flat").build();
    for (const Eigen::Vector2d& uv : {Eigen::Vector2d(0.7, 1.0), Eigen::Vector2d(2.0, 4.0)})
      CHECK(gaussCurvatureRiemannian(flat, spherePatch(), uv, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("degenerate and characteristic points are reported") {
    const SurfacePatch& disk = testing::fixtures().surface("disk-z0").patch;
    CHECK_THROWS_AS(adaptedFrame(testing::heisenberg(), disk, Eigen::Vector2d(0.0, 0.3), 1.0), RankDeficient);
    const SurfacePatch plane = SurfacePatch::parse("plane", {"u", "v", "0"});
    CHECK_THROWS_AS(adaptedFrame(testing::heisenberg(), plane, Eigen::Vector2d(0.0, 0.0), 1.0), CharacteristicPoint);
  }
}
