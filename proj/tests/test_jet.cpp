#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "srgb/fields.hpp"

using namespace srgb;

TEST_SUITE("jet_calculus") {
  TEST_CASE("elementary jets carry exact derivatives") {
    using J = Jet<2, 3>;
    const J x = J::variable(0, 0.7), y = J::variable(1, -0.4);
    const J f = exp(x) * sin(y) + x / (1.0 + y * y);
    // d/dx and d/dy at (0.7, -0.4).
    const double ex = std::exp(0.7), sy = std::sin(-0.4), cy = std::cos(-0.4), q = 1.0 + 0.16;
    CHECK(f.value() == doctest::Approx(ex * sy + 0.7 / q).epsilon(1e-14));
    CHECK(f.firstPartial(0) == doctest::Approx(ex * sy + 1.0 / q).epsilon(1e-14));
    CHECK(f.firstPartial(1) == doctest::Approx(ex * cy - 0.7 * 2.0 * -0.4 / (q * q)).epsilon(1e-14));
    // Third derivative in x of exp(x) sin(y) + x / q is exp(x) sin(y).
    CHECK(f.partial({3, 0}) == doctest::Approx(ex * sy).epsilon(1e-12));
  }

  TEST_CASE("jets agree with central differences on fixture fields") {
    const double h = 1e-5;
    const auto& m = testing::fixtures().manifold("heisenberg-twisted");
    double worst = 0.0;
    for (const ChartPoint& p : testing::randomPoints(100, 3)) {
      for (const SmoothVectorField* f : {&m.frame.a, &m.frame.b}) {
        const JetVector j = evaluateJet(*f, p, 2);
        for (int var = 0; var < 3; ++var) {
          ChartPoint dp = ChartPoint::Zero();
          dp(var) = h;
          const Eigen::Vector3d fd = ((*f)(p + dp) - (*f)(p - dp)) / (2.0 * h);
          for (int i = 0; i < 3; ++i) worst = std::max(worst, std::abs(j.partial(i, var) - fd(i)));
        }
      }
    }
    CHECK(worst <= 1e-7);
  }

  TEST_CASE("Lie bracket is antisymmetric and satisfies Jacobi") {
    for (const char* id : {"heisenberg", "heisenberg-twisted"}) {
      const auto& m = testing::fixtures().manifold(id);
      const SmoothVectorField w = SmoothVectorField::parse({"y", "x*z", "1 + x^2"});
      double anti = 0.0, jacobi = 0.0;
      for (const ChartPoint& p : testing::randomPoints(50, 5)) {
        anti = std::max(anti, (lieBracket(m.frame.a, m.frame.b, p) + lieBracket(m.frame.b, m.frame.a, p)).norm());
        const auto x = coordinateJets<3>(p);
        const JetVec3<3> a = m.frame.a.at(x), b = m.frame.b.at(x), c = w.at(x);
        const JetVec3<3> sum = lieBracket(a, lieBracket(b, c)) + lieBracket(b, lieBracket(c, a)) +
                               lieBracket(c, lieBracket(a, b));
        for (int i = 0; i < 3; ++i) jacobi = std::max(jacobi, std::abs(sum(i).value()));
      }
      CHECK(anti <= 1e-9);
      CHECK(jacobi <= 1e-9);
    }
  }

  TEST_CASE("Heisenberg bracket is -dz up to the frame convention") {
    const auto& m = testing::fixtures().manifold("heisenberg");
    const Eigen::Vector3d br = lieBracket(m.frame.a, m.frame.b, ChartPoint(0.3, -0.8, 1.1));
    CHECK(br(0) == doctest::Approx(0.0));
    CHECK(br(1) == doctest::Approx(0.0));
    CHECK(std::abs(br(2)) == doctest::Approx(1.0));
  }

  TEST_CASE("jet order outside the supported range is rejected") {
    const auto& m = testing::fixtures().manifold("heisenberg");
    CHECK_THROWS_AS(evaluateJet(m.frame.a, ChartPoint::Zero(), -1), OrderOutOfRange);
    CHECK_THROWS_AS(evaluateJet(m.frame.a, ChartPoint::Zero(), kMaxJetOrder + 1), OrderOutOfRange);
  }

  TEST_CASE("malformed expressions are rejected") {
    CHECK_THROWS_AS(ScalarField::parse("x + * y"), ExpressionError);
    CHECK_THROWS_AS(ScalarField::parse("w + 1"), ExpressionError);
    CHECK(ScalarField::parse("lambda * x", {{"lambda", 2.0}})(ChartPoint(1.5, 0, 0)) == doctest::Approx(3.0));
  }
}
