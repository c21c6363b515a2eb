#pragma once

// Scenarios: a fixture pair, a suite and its numerical settings, read from
// JSON and run into a Report.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srgb/fixtures.hpp"
#include "srgb/report.hpp"

namespace srgb {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& suiteNames() {
  static const std::vector<std::string> names{"identities",  "curvature", "gauss-bonnet",
                                              "limit-slope", "boundary",  "star-experiment"};
  return names;
}

struct Scenario {
  std::string suite = "gauss-bonnet";
  /// Empty means the surface fixture's own manifold.
  std::string manifold;
  std::string surface = "sphere";
  /// Empty means the suite default.
  std::vector<double> eps;
  double c0 = 0.2;
  int halvings = 8;
  QuadratureOptions quad;
  int points = 100;
  std::uint64_t seed = 1;
  std::string csvPath, jsonPath;
  /// Off by default so that reports are byte-reproducible.
  bool timing = false;
  bool diagnostics = true;
  std::string starPsi = "(t - 1)^2";
  double starT0 = 0.0, starT1 = 2.0;
  std::string fixtureDir;

  /// Unknown keys and ill-typed values raise ConfigError.
  static Scenario fromJson(const nlohmann::json& j);
  static Scenario load(const std::string& path);
  nlohmann::json toJson() const;

  std::vector<double> epsList() const;
  std::vector<double> ladder() const;
  /// Suite name, eps > 0, ladder and quadrature ranges, fixture ids.
  void validate(const FixtureSet& fixtures) const;
};

/// Runs the suite. Numerical and fixture-level failures become failing rows;
/// only ConfigError escapes.
Report runScenario(const Scenario& scenario, const FixtureSet& fixtures);

/// 0 if every asserted row passes, 1 otherwise.
int exitCode(const Report& report);

/// Writes the CSV and JSON outputs named in the scenario (if any).
void writeOutputs(const Scenario& scenario, const Report& report);

std::string listFixtures(const FixtureSet& fixtures);

/// (c, A(c), A+(c), A-(c)) for the K_SigmaE profile, c descending. `integrand`
/// is "K_SigmaE", "corrected" or "intro".
std::string profileCsv(const Scenario& scenario, const FixtureSet& fixtures, const std::string& integrand = "K_SigmaE");

}  // namespace srgb
