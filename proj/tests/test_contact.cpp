#include <doctest.h>

#include "helpers.hpp"
#include "srgb/checks.hpp"
#include "srgb/contact.hpp"

using namespace srgb;

TEST_SUITE("contact_core") {
  TEST_CASE("structure identities hold on both contact fixtures") {
    for (const ContactStructure* cs : {&testing::heisenberg(), &testing::twisted()}) {
      for (const Row& r : checks::structureIdentities(*cs, 200, 11, 1e-9)) {
        INFO(r.quantity << " = " << r.value);
        // The nabla^eps residuals involve second derivatives at small eps.
        CHECK(r.value <= (r.quantity.find("eps") != std::string::npos ? 1e-7 : 1e-9));
      }
    }
  }

  TEST_CASE("d alpha(A, B) = -1 and the Reeb normalization") {
    const ContactStructure& cs = testing::twisted();
    const auto& f = cs.frame();
    for (const ChartPoint& p : testing::randomPoints(200, 9)) {
      const Eigen::Vector3d a = f.a(p), b = f.b(p), z = cs.reeb(p);
      CHECK(cs.dAlpha(p, a, b) == doctest::Approx(-1.0).epsilon(1e-9));
      CHECK(cs.alpha(p).dot(z) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(std::abs(cs.dAlpha(p, z, a)) <= 1e-9);
      CHECK(std::abs(cs.dAlpha(p, z, b)) <= 1e-9);
    }
  }

  TEST_CASE("tau vanishes on Heisenberg, not on the twisted frame") {
    const ChartPoint p(0.4, -0.3, 0.7);
    CHECK(testing::heisenberg().tauMatrix(p).norm() <= 1e-12);
    const Eigen::Matrix2d t = testing::twisted().tauMatrix(p);
    CHECK(t.norm() > 1e-2);
    CHECK(std::abs(t.trace()) <= 1e-12);
    CHECK((t - t.transpose()).norm() <= 1e-12);
  }

  TEST_CASE("tau matches the flow oracle 1/2 L_Z g") {
    for (const ChartPoint& p : testing::randomPoints(4, 21, 1.0)) {
      const Eigen::Matrix2d d = testing::twisted().tauMatrix(p) - tauFlowOracle(testing::twisted(), p);
      CHECK(d.cwiseAbs().maxCoeff() <= 1e-6);
    }
  }

  TEST_CASE("J is a complex structure compatible with the metric") {
    const ContactStructure& cs = testing::twisted();
    const ChartPoint p(-0.2, 0.9, 0.5);
    const Eigen::Vector3d a = cs.frame().a(p);
    const Eigen::Vector3d ja = cs.applyJ(p, a);
    CHECK((cs.applyJ(p, ja) + a).norm() <= 1e-12);
    CHECK(cs.metricEps(p, a, ja, 1.0) == doctest::Approx(0.0));
    CHECK(cs.metricEps(p, ja, ja, 1.0) == doctest::Approx(cs.metricEps(p, a, a, 1.0)));
    CHECK(cs.applyJ(p, cs.reeb(p)).norm() <= 1e-12);
  }

  TEST_CASE("taming metric scales the Reeb direction by 1/eps") {
    const ContactStructure& cs = testing::heisenberg();
    const ChartPoint p(0.1, 0.2, 0.3);
    for (double eps : {1.0, 0.3, 0.01}) CHECK(cs.metricEps(p, cs.reeb(p), cs.reeb(p), eps) == doctest::Approx(1.0 / eps));
  }

  TEST_CASE("the flat frame raises DegenerateContact") {
    const auto& flat = testing::fixtures().manifold("flat");
    CHECK_FALSE(flat.contact);
    CHECK_THROWS_AS(ContactStructure::build(flat.frame), DegenerateContact);
    // The metric-only build still works for Euclidean sanity paths.
    CHECK_FALSE(flat.build().isContact());
  }

  TEST_CASE("dependent frame vectors raise SingularFrame") {
    ContactFrame f;
    f.a = SmoothVectorField::parse({"1", "0", "0"});
    f.b = SmoothVectorField::parse({"2", "0", "0"});
    CHECK_THROWS_AS(ContactStructure::build(f), SingularFrame);
  }
}

TEST_CASE("epsilon must be strictly positive" * doctest::test_suite("contact_core")) {
  CHECK_THROWS_AS(Epsilon(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Epsilon(-1.0), std::invalid_argument);
  CHECK(double(Epsilon(0.25)) == 0.25);
}
