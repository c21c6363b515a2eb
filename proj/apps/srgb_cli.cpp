// srgb: run verification scenarios, list fixtures, dump A(c) profiles.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "srgb/runner.hpp"

namespace {

struct Overrides {
  std::string config, suite, fixture, out, fixtureDir;
  std::vector<double> eps;
  std::optional<std::uint64_t> seed;
  std::optional<int> maxDepth;
  bool timing = false;
};

void addCommon(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Scenario JSON file");
  cmd->add_option("--fixture", o.fixture, "Surface id, or manifold:surface");
  cmd->add_option("--epsilon", o.eps, "Taming parameters (repeat or comma-separate)")->delimiter(',');
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--max-depth", o.maxDepth, "Quadrature refinement depth");
  cmd->add_option("--fixtures-dir", o.fixtureDir, "Directory holding manifolds.json and surfaces.json");
}

srgb::Scenario scenarioFrom(const Overrides& o) {
  srgb::Scenario s = o.config.empty() ? srgb::Scenario{} : srgb::Scenario::load(o.config);
  if (!o.suite.empty()) s.suite = o.suite;
  if (!o.fixture.empty()) {
    const auto colon = o.fixture.find(':');
    if (colon == std::string::npos) {
      s.surface = o.fixture;
      if (o.config.empty()) s.manifold.clear();
    } else {
      s.manifold = o.fixture.substr(0, colon);
      s.surface = o.fixture.substr(colon + 1);
    }
  }
  if (!o.eps.empty()) s.eps = o.eps;
  if (o.seed) s.seed = *o.seed;
  if (o.maxDepth) s.quad.maxDepth = *o.maxDepth;
  if (!o.out.empty()) {
    s.csvPath = o.out;
    s.jsonPath.clear();
  }
  if (o.timing) s.timing = true;
  if (!o.fixtureDir.empty()) s.fixtureDir = o.fixtureDir;
  return s;
}

srgb::FixtureSet loadFixtures(const std::string& dir) {
  return srgb::FixtureSet::load(dir.empty() ? srgb::FixtureSet::defaultDirectory() : dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub-Riemannian Gauss-Bonnet verification runner"};
  app.require_subcommand(1);

  Overrides runOpts;
  auto* run = app.add_subcommand("run", "Run a scenario; exit 0 all pass, 1 failures, 2 config error");
  addCommon(run, runOpts);
  run->add_option("--suite", runOpts.suite, "identities | curvature | gauss-bonnet | limit-slope | boundary | star-experiment");
  run->add_option("--out", runOpts.out, "CSV report path; the JSON report goes next to it");
  run->add_flag("--timing", runOpts.timing, "Record wall-clock millis (makes reports non-reproducible)");
  bool quiet = false;
  run->add_flag("--quiet", quiet, "Do not echo the CSV to stdout");

  std::string listDir;
  auto* list = app.add_subcommand("list", "List fixtures and suites");
  list->add_option("--fixtures-dir", listDir, "Fixture directory");

  Overrides profOpts;
  std::string integrand = "K_SigmaE";
  auto* profile = app.add_subcommand("profile", "Emit (c, A(c)) rows, c descending");
  addCommon(profile, profOpts);
  profile->add_option("--integrand", integrand, "K_SigmaE | corrected | intro");
  profile->add_option("--out", profOpts.out, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      std::cout << srgb::listFixtures(loadFixtures(listDir));
      return 0;
    }
    if (*profile) {
      srgb::Scenario s = scenarioFrom(profOpts);
      const std::string csv = srgb::profileCsv(s, loadFixtures(s.fixtureDir), integrand);
      if (profOpts.out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(profOpts.out, std::ios::binary);
        if (!out) throw srgb::ConfigError("cannot write " + profOpts.out);
        out << csv;
      }
      return 0;
    }
    srgb::Scenario s = scenarioFrom(runOpts);
    const srgb::FixtureSet fixtures = loadFixtures(s.fixtureDir);
    const srgb::Report report = srgb::runScenario(s, fixtures);
    srgb::writeOutputs(s, report);
    if (!quiet) srgb::writeCsv(report, std::cout);
    std::cerr << report.rows.size() << " rows, " << report.failures() << " failing\n";
    return srgb::exitCode(report);
  } catch (const srgb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const srgb::FixtureError& e) {
    std::cerr << "fixture error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
