#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "srgb/checks.hpp"

using namespace srgb;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre rule of n nodes is exact to degree 2n - 1") {
    for (int n = 1; n <= 8; ++n) {
      const auto& [x, w] = gaussLegendre(n);
      for (int d = 0; d <= 2 * n - 1; ++d) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], d);
        CHECK(s == doctest::Approx(d % 2 ? 0.0 : 2.0 / (d + 1)).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("adaptive rules reach smooth and peaked integrals") {
    CHECK(integrate1D([](double t) { return std::sin(t); }, 0.0, kPi).value == doctest::Approx(2.0).epsilon(1e-10));
    QuadratureOptions o;
    o.rtol = 1e-10;
    o.maxDepth = 30;
    const double e = 1e-4;
    CHECK(integrate1D([&](double t) { return std::sqrt(e) / (e + t * t); }, -1.0, 1.0, o).value ==
          doctest::Approx(2.0 * std::atan(1.0 / std::sqrt(e))).epsilon(1e-8));
    const auto r = integrateRectangle([](const Eigen::Vector2d& p) { return std::exp(p(0)) * std::cos(p(1)); },
                                      Eigen::Vector2d(0, 0), Eigen::Vector2d(1, kPi / 2));
    CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-8));
    CHECK(r.nodes > 0);
  }

  TEST_CASE("exhausted depth raises NonConvergent") {
    QuadratureOptions o;
    o.maxDepth = 1;
    o.rtol = 1e-14;
    o.atol = 0.0;
    CHECK_THROWS_AS(integrate1D([](double t) { return 1.0 / std::sqrt(std::abs(t - 0.3)); }, 0.0, 1.0, o),
                    NonConvergent);
  }

  TEST_CASE("quadrature is bitwise deterministic") {
    auto f = [](const Eigen::Vector2d& p) { return std::sin(3 * p(0)) * std::exp(-p(1) * p(1)); };
    const double a = integrateRectangle(f, Eigen::Vector2d(-1, -1), Eigen::Vector2d(2, 1)).value;
    const double b = integrateRectangle(f, Eigen::Vector2d(-1, -1), Eigen::Vector2d(2, 1)).value;
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
  }

  TEST_CASE("slope fit recovers a synthetic slope of 3") {
    CumulativeProfile p;
    p.c = geometricLadder();
    for (double c : p.c) p.A.push_back(3.0 * c + 2.0 * c * c - 0.5 * c * c * c);
    slopeAtZero(p);
    CHECK(p.slope == doctest::Approx(3.0).epsilon(1e-2));
    CHECK(p.windowEnd - p.windowBegin >= 3);
  }

  TEST_CASE("an identically zero profile has slope 0 exactly") {
    CumulativeProfile p;
    p.c = geometricLadder();
    p.A.assign(p.c.size(), 0.0);
    slopeAtZero(p);
    CHECK(p.slope == 0.0);
  }

  TEST_CASE("a profile that is not linear near 0 raises IllConditionedFit") {
    CumulativeProfile p;
    p.c = geometricLadder();
    int k = 0;
    for (double c : p.c) p.A.push_back((k++ % 2 ? 1.0 : -1.0) * std::sqrt(c));
    CHECK_THROWS_AS(slopeAtZero(p), IllConditionedFit);
  }

  TEST_CASE("ladder must be strictly decreasing inside (0, 1)") {
    const SurfacePatch& sphere = testing::fixtures().surface("sphere").patch;
    CHECK_THROWS_AS(regionProfile(testing::heisenberg(), sphere, {0.1, 0.2, 0.05}, kSigmaE), std::invalid_argument);
    CHECK_THROWS_AS(regionProfile(testing::heisenberg(), sphere, {1.5, 0.2, 0.05}, kSigmaE), std::invalid_argument);
  }

  TEST_CASE("I1 and I2 closed forms match quadrature and their limits") {
    for (const Row& r : checks::i1i2(5, 1e-8, 1e-2)) {
      INFO(r.quantity << " = " << r.value);
      CHECK(r.pass());
    }
    CHECK_THROWS_AS(I1I2(0.0, 0.5), std::domain_error);
  }

  TEST_CASE("sphere profile: monotone where K_SigmaE keeps its sign, slope stable under refinement") {
    const ContactStructure& cs = testing::heisenberg();
    const SurfaceFixture& sphere = testing::fixtures().surface("sphere");
    // Sign of K_SigmaE on the band |a| > 0.8, checked pointwise first.
    int pos = 0, neg = 0;
    for (const auto& uv : checks::samplePoints(cs, sphere.patch, 400, 5, 1.0)) {
      const SurfacePointFrame f = adaptedFrame(cs, sphere.patch, uv, 1.0);
      if (std::abs(f.a) <= 0.8) continue;
      (kSigmaE(f) > 0 ? pos : neg)++;
    }
    REQUIRE(pos + neg > 0);
    REQUIRE((pos == 0 || neg == 0));
    CumulativeProfile p = regionProfile(cs, sphere.patch, geometricLadder(), kSigmaE);
    for (std::size_t i = 1; i < p.A.size(); ++i) CHECK((pos > 0 ? p.A[i] < p.A[i - 1] : p.A[i] > p.A[i - 1]));
    slopeAtZero(p);

    QuadratureOptions finer;
    finer.maxDepth = 24;
    finer.rtol = 1e-7;
    SurfacePatch smallCaps = sphere.patch;
    for (Cap& c : smallCaps.caps) c.radius /= 2.0;
    CumulativeProfile q = regionProfile(cs, smallCaps, geometricLadder(), kSigmaE, finer);
    slopeAtZero(q);
    CHECK(q.slope == doctest::Approx(p.slope).epsilon(1e-3));
  }
}
