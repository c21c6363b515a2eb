#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "srgb/runner.hpp"

using namespace srgb;
using nlohmann::json;

namespace {

const Row* find(const Report& r, const std::string& quantity) {
  for (const Row& row : r.rows)
    if (row.quantity == quantity) return &row;
  return nullptr;
}

}  // namespace

TEST_SUITE("cli_runner") {
  TEST_CASE("config parsing and validation") {
    const auto& fx = testing::fixtures();
    CHECK_THROWS_AS(Scenario::fromJson(json{{"suite", "identities"}, {"bogus", 1}}), ConfigError);
    CHECK_THROWS_AS(Scenario::fromJson(json{{"epsilon", "one"}}), ConfigError);
    CHECK_THROWS_AS(Scenario::fromJson(json{{"quadrature", {{"depth", 3}}}}), ConfigError);

    Scenario s = Scenario::fromJson(json{{"suite", "gauss-bonnet"}, {"surface", "torus-rev"}, {"epsilon", 0.5}});
    CHECK(s.epsList() == std::vector<double>{0.5});
    CHECK_NOTHROW(s.validate(fx));
    s.eps = {1.0, -0.1};
    CHECK_THROWS_AS(s.validate(fx), ConfigError);
    s.eps.clear();
    s.surface = "klein-bottle";
    CHECK_THROWS_AS(s.validate(fx), ConfigError);
    s.surface = "sphere";
    s.suite = "boundary";
    CHECK_THROWS_AS(s.validate(fx), ConfigError);
    s.suite = "limit-slope";
    s.surface = "hemisphere";
    CHECK_THROWS_AS(s.validate(fx), ConfigError);
    s.suite = "sideways";
    CHECK_THROWS_AS(s.validate(fx), ConfigError);
    CHECK_THROWS_AS(Scenario::load("/nonexistent/config.json"), ConfigError);
  }

  TEST_CASE("config round-trips through its JSON echo") {
    Scenario s;
    s.suite = "boundary";
    s.surface = "wedge";
    s.eps = {1.0, 0.5};
    s.quad.maxDepth = 9;
    s.seed = 42;
    s.halvings = 6;
    json j = s.toJson();
    j.erase("environment");
    const Scenario t = Scenario::fromJson(j);
    CHECK(t.toJson() == s.toJson());
  }

  TEST_CASE("list names the shipped fixtures") {
    const std::string text = listFixtures(testing::fixtures());
    for (const char* id : {"heisenberg", "heisenberg-twisted", "flat", "sphere", "torus-rev", "disk-z0", "hemisphere", "wedge"})
      CHECK(text.find(id) != std::string::npos);
  }

  TEST_CASE("identities on the twisted fixture pass and the CSV is reproducible") {
    Scenario s;
    s.suite = "identities";
    s.manifold = "heisenberg-twisted";
    s.eps = {1.0, 0.05};
    s.points = 50;
    const Report a = runScenario(s, testing::fixtures());
    CHECK(exitCode(a) == 0);
    CHECK(a.rows.size() > 10);
    for (const Row& r : a.rows) CHECK(r.millis == 0.0);
    CHECK(toCsv(a) == toCsv(runScenario(s, testing::fixtures())));
    CHECK(toCsv(a).rfind(kCsvHeader, 0) == 0);
    const json j = toJson(a);
    CHECK(j.at("rows").size() == a.rows.size());
    CHECK(j.at("config").at("suite") == "identities");
  }

  TEST_CASE("flat manifold: sentinel passes, contact suites fail at row level") {
    Scenario s;
    s.suite = "identities";
    s.manifold = "flat";
    const Report a = runScenario(s, testing::fixtures());
    REQUIRE(find(a, "DegenerateContact raised"));
    CHECK(exitCode(a) == 0);
    s.suite = "curvature";
    s.surface = "sphere";
    const Report b = runScenario(s, testing::fixtures());
    CHECK(exitCode(b) == 1);
  }

  TEST_CASE("numerical failures become failing rows") {
    Scenario s;
    s.suite = "gauss-bonnet";
    s.surface = "torus-rev";
    s.eps = {1.0};
    s.quad.maxDepth = 0;
    s.quad.rtol = 1e-14;
    s.quad.atol = 0.0;
    const Report r = runScenario(s, testing::fixtures());
    REQUIRE(r.rows.size() == 1);
    CHECK_FALSE(r.rows[0].pass());
    CHECK(exitCode(r) == 1);
  }

  TEST_CASE("torus limit slope is exactly 0") {
    Scenario s;
    s.suite = "limit-slope";
    s.surface = "torus-rev";
    s.diagnostics = false;
    const Report r = runScenario(s, testing::fixtures());
    const Row* slope = find(r, "slope K_SigmaE");
    REQUIRE(slope);
    CHECK(slope->value == 0.0);
    CHECK(slope->pass());
  }

  TEST_CASE("profile rows are sorted by c descending") {
    Scenario s;
    s.surface = "sphere";
    std::istringstream in(profileCsv(s, testing::fixtures()));
    std::string line;
    std::getline(in, line);
    CHECK(line == "c,A,A_plus,A_minus");
    std::vector<double> c;
    while (std::getline(in, line)) c.push_back(std::stod(line.substr(0, line.find(','))));
    CHECK(c.size() >= 9);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] < c[i - 1]);
    CHECK_THROWS_AS(profileCsv(s, testing::fixtures(), "nonsense"), ConfigError);
  }

  TEST_CASE("star experiment rows for a double zero stay near pi") {
    Scenario s;
    s.suite = "star-experiment";
    const Report r = runScenario(s, testing::fixtures());
    REQUIRE(r.rows.size() == 3);
    for (const Row& row : r.rows) CHECK(row.value == doctest::Approx(3.14159).epsilon(1e-3));
  }
}
