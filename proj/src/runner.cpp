#include "srgb/runner.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "srgb/checks.hpp"

namespace srgb {

using nlohmann::json;

namespace {

void requireKeys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

json environment() {
  json env{{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                         std::to_string(EIGEN_MINOR_VERSION)}};
#if defined(__VERSION__)
  env["compiler"] = __VERSION__;
#endif
  return env;
}

bool needsSurface(const std::string& suite) { return suite != "identities" && suite != "star-experiment"; }

}  // namespace

Scenario Scenario::fromJson(const json& j) {
  requireKeys(j, "config", {"suite", "manifold", "surface", "epsilon", "ladder", "quadrature", "points", "seed",
                            "output", "timing", "diagnostics", "star", "fixtures"});
  Scenario s;
  read(j, "suite", s.suite, "config");
  read(j, "manifold", s.manifold, "config");
  read(j, "surface", s.surface, "config");
  if (j.contains("epsilon")) {
    const json& e = j.at("epsilon");
    if (e.is_number()) s.eps = {e.get<double>()};
    else read(j, "epsilon", s.eps, "config");
  }
  if (j.contains("ladder")) {
    const json& l = j.at("ladder");
    requireKeys(l, "ladder", {"c0", "halvings"});
    read(l, "c0", s.c0, "ladder");
    read(l, "halvings", s.halvings, "ladder");
  }
  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    requireKeys(q, "quadrature", {"order", "rtol", "atol", "max_depth", "initial_cells", "scan_points"});
    read(q, "order", s.quad.order, "quadrature");
    read(q, "rtol", s.quad.rtol, "quadrature");
    read(q, "atol", s.quad.atol, "quadrature");
    read(q, "max_depth", s.quad.maxDepth, "quadrature");
    read(q, "initial_cells", s.quad.initialCells, "quadrature");
    read(q, "scan_points", s.quad.scanPoints, "quadrature");
  }
  read(j, "points", s.points, "config");
  read(j, "seed", s.seed, "config");
  if (j.contains("output")) {
    const json& o = j.at("output");
    requireKeys(o, "output", {"csv", "json"});
    read(o, "csv", s.csvPath, "output");
    read(o, "json", s.jsonPath, "output");
  }
  read(j, "timing", s.timing, "config");
  read(j, "diagnostics", s.diagnostics, "config");
  if (j.contains("star")) {
    const json& st = j.at("star");
    requireKeys(st, "star", {"psi", "t0", "t1"});
    read(st, "psi", s.starPsi, "star");
    read(st, "t0", s.starT0, "star");
    read(st, "t1", s.starT1, "star");
  }
  read(j, "fixtures", s.fixtureDir, "config");
  return s;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return fromJson(j);
}

json Scenario::toJson() const {
  return {{"suite", suite},
          {"manifold", manifold},
          {"surface", surface},
          {"epsilon", epsList()},
          {"ladder", {{"c0", c0}, {"halvings", halvings}}},
          {"quadrature",
           {{"order", quad.order},
            {"rtol", quad.rtol},
            {"atol", quad.atol},
            {"max_depth", quad.maxDepth},
            {"initial_cells", quad.initialCells},
            {"scan_points", quad.scanPoints}}},
          {"points", points},
          {"seed", seed},
          {"output", {{"csv", csvPath}, {"json", jsonPath}}},
          {"timing", timing},
          {"diagnostics", diagnostics},
          {"star", {{"psi", starPsi}, {"t0", starT0}, {"t1", starT1}}}};
}

std::vector<double> Scenario::epsList() const {
  if (!eps.empty()) return eps;
  if (suite == "gauss-bonnet") return {1.0, 0.5, 0.25};
  if (suite == "boundary") return {1.0, 0.5};
  if (suite == "star-experiment") return {1e-2, 1e-4, 1e-6};
  if (suite == "limit-slope") return {};
  return {1.0, 0.5, 0.3, 0.1, 0.05};
}

std::vector<double> Scenario::ladder() const { return geometricLadder(c0, halvings); }

void Scenario::validate(const FixtureSet& fixtures) const {
  const auto& names = suiteNames();
  if (std::find(names.begin(), names.end(), suite) == names.end()) throw ConfigError("unknown suite '" + suite + "'");
  for (double e : epsList())
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("epsilon values must be positive");
  if (!(c0 > 0.0 && c0 <= 1.0)) throw ConfigError("ladder.c0 must lie in (0, 1]");
  if (halvings < 2 || halvings > 30) throw ConfigError("ladder.halvings must lie in [2, 30]");
  if (quad.order < 1 || quad.order > 64) throw ConfigError("quadrature.order must lie in [1, 64]");
  if (!(quad.rtol > 0.0) || quad.atol < 0.0) throw ConfigError("quadrature tolerances must be positive");
  if (quad.maxDepth < 0 || quad.maxDepth > 40) throw ConfigError("quadrature.max_depth must lie in [0, 40]");
  if (quad.initialCells < 1) throw ConfigError("quadrature.initial_cells must be positive");
  if (points < 1) throw ConfigError("points must be positive");
  if (suite == "star-experiment") {
    if (!(starT1 > starT0)) throw ConfigError("star.t1 must exceed star.t0");
    return;
  }
  try {
    const std::string m = manifold.empty() && needsSurface(suite) ? fixtures.surface(surface).manifold : manifold;
    fixtures.manifold(m.empty() ? "heisenberg" : m);
    if (needsSurface(suite)) {
      const SurfaceFixture& s = fixtures.surface(surface);
      if (suite == "limit-slope" && !s.closed())
        throw ConfigError("limit-slope needs a closed surface; '" + surface + "' has a boundary (use suite boundary)");
      if (suite == "boundary" && s.closed()) throw ConfigError("surface '" + surface + "' has no boundary");
    }
  } catch (const FixtureError& e) {
    throw ConfigError(e.what());
  }
}

namespace {

class Runner {
 public:
  Runner(const Scenario& sc, const FixtureSet& fx, Report& rep) : sc_(sc), fx_(fx), rep_(rep) {}

  void run() {
    const std::string& suite = sc_.suite;
    if (suite == "star-experiment") {
      fixture_ = "psi=" + sc_.starPsi;
      block("star experiment", [&] { return checks::starExperiment(sc_.starPsi, sc_.starT0, sc_.starT1, sc_.epsList()); });
      return;
    }
    std::string mId = sc_.manifold;
    if (mId.empty()) mId = needsSurface(suite) ? fx_.surface(sc_.surface).manifold : "heisenberg";
    const ManifoldFixture& mf = fx_.manifold(mId);
    fixture_ = needsSurface(suite) ? mf.id + "/" + sc_.surface : mf.id;

    if (suite == "identities" && !mf.contact) {
      // The flat frame is a sentinel: building its contact structure must fail.
      block("contact sentinel", [&] {
        Row r = makeRow("DegenerateContact raised", 0.0, 1.0, 0.0);
        try {
          ContactStructure::build(mf.frame);
          r.note = "contact structure built on a non-contact frame";
        } catch (const DegenerateContact& e) {
          r.value = 1.0;
          r.note = e.what();
        }
        return std::vector<Row>{r};
      });
      return;
    }
    if (!mf.contact && suite != "gauss-bonnet") {
      Row r = makeRow("contact structure", NAN, 0.0, 0.0);
      r.note = "manifold '" + mf.id + "' is not contact; suite " + suite + " needs the contact machinery";
      push({r}, 0.0);
      return;
    }

    std::optional<ContactStructure> built;
    block("manifold", [&] {
      built = mf.build();
      return std::vector<Row>{};
    });
    if (!built) return;
    const ContactStructure& cs = *built;
    const std::vector<double> eps = sc_.epsList();

    if (suite == "identities") {
      block("identities", [&] { return checks::structureIdentities(cs, sc_.points, sc_.seed); });
      block("tau oracle", [&] { return checks::tauOracle(cs, 5, sc_.seed); });
      block("curvature expansion", [&] { return checks::curvatureExpansion(cs, sc_.points, eps, sc_.seed); });
      return;
    }

    const SurfaceFixture& sf = fx_.surface(sc_.surface);
    if (suite == "curvature") {
      std::vector<Eigen::Vector2d> pts;
      block("sample points", [&] {
        pts = checks::samplePoints(cs, sf.patch, sc_.points, sc_.seed, 0.9);
        return std::vector<Row>{};
      });
      if (pts.empty()) return;
      block("gauss vs brioschi", [&] { return checks::gaussVsBrioschi(cs, sf.patch, pts, eps); });
      block("second fundamental form", [&] { return checks::secondFundamentalForm(cs, sf.patch, pts, eps); });
      block("Xa identity", [&] { return std::vector<Row>{checks::xaIdentityGrid(cs, sf.patch)}; });
      block("recombination", [&] { return checks::recombination(cs, sf.patch, pts, eps); });
    } else if (suite == "gauss-bonnet") {
      for (double e : eps)
        block("gauss-bonnet", [&] {
          return std::vector<Row>{sf.closed() ? checks::gaussBonnetClosed(cs, sf.patch, e, sf.euler, sc_.quad)
                                              : checks::riemannianBoundaryGB(cs, sf, e, sc_.quad)};
        });
    } else if (suite == "limit-slope") {
      block("slope", [&] { return checks::limitSlope(cs, sf, sc_.ladder(), sc_.quad, sc_.diagnostics); });
      block("B_1,-1 identity", [&] { return std::vector<Row>{checks::b1m1Identity(cs, sf.regionPatch(), 1e-3, sc_.quad)}; });
      block("I1 I2", [&] { return checks::i1i2(); });
    } else if (suite == "boundary") {
      checks::BoundaryOptions o;
      o.eps = eps;
      o.ladder = sc_.ladder();
      o.quad = sc_.quad;
      o.seed = sc_.seed;
      o.diagnostics = sc_.diagnostics;
      block("boundary", [&] { return checks::boundary(cs, sf, o); });
      block("corner table", [&] { return checks::cornerAngleTable(cs); });
    }
  }

 private:
  void push(std::vector<Row> rows, double ms) {
    for (Row& r : rows) {
      r.suite = sc_.suite;
      r.fixture = fixture_;
      r.millis = sc_.timing ? ms : 0.0;
      rep_.rows.push_back(std::move(r));
    }
  }

  /// Runs one group of checks; an exception becomes a single failing row.
  template <class F>
  void block(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Row> rows;
    try {
      rows = f();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      Row r = makeRow(name + " error", NAN, 0.0, 0.0);
      r.note = e.what();
      rows = {r};
    }
    push(std::move(rows), std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }

  const Scenario& sc_;
  const FixtureSet& fx_;
  Report& rep_;
  std::string fixture_;
};

std::string siblingJson(const std::string& csv) {
  const auto dot = csv.find_last_of('.');
  const auto slash = csv.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return csv + ".json";
  return csv.substr(0, dot) + ".json";
}

}  // namespace

Report runScenario(const Scenario& scenario, const FixtureSet& fixtures) {
  scenario.validate(fixtures);
  Report report;
  report.config = scenario.toJson();
  report.config["environment"] = environment();
  Runner(scenario, fixtures, report).run();
  return report;
}

int exitCode(const Report& report) { return report.allPass() ? 0 : 1; }

void writeOutputs(const Scenario& scenario, const Report& report) {
  const std::string jsonPath =
      !scenario.jsonPath.empty() ? scenario.jsonPath : (scenario.csvPath.empty() ? "" : siblingJson(scenario.csvPath));
  if (!scenario.csvPath.empty()) {
    std::ofstream out(scenario.csvPath, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + scenario.csvPath);
    writeCsv(report, out);
  }
  if (!jsonPath.empty()) {
    std::ofstream out(jsonPath, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + jsonPath);
    out << toJson(report).dump(2) << '\n';
  }
}

std::string listFixtures(const FixtureSet& fixtures) {
  std::ostringstream s;
  s << "manifolds:\n";
  for (const auto& id : fixtures.manifoldIds()) {
    const ManifoldFixture& m = fixtures.manifold(id);
    s << "  " << id << (m.contact ? "" : " (not contact)") << "  " << m.description << '\n';
  }
  s << "surfaces:\n";
  for (const auto& id : fixtures.surfaceIds()) {
    const SurfaceFixture& f = fixtures.surface(id);
    s << "  " << id << "  chi=" << f.euler << (f.closed() ? " closed" : " with boundary") << ", on " << f.manifold
      << "  " << f.description << '\n';
  }
  s << "suites:\n";
  for (const auto& n : suiteNames()) s << "  " << n << '\n';
  return s.str();
}

std::string profileCsv(const Scenario& scenario, const FixtureSet& fixtures, const std::string& integrand) {
  FrameIntegrand f;
  if (integrand == "K_SigmaE") f = kSigmaE;
  else if (integrand == "corrected") f = kSigmaECorrected;
  else if (integrand == "intro") f = kSigmaEIntroVariant;
  else throw ConfigError("unknown integrand '" + integrand + "' (K_SigmaE, corrected, intro)");
  const SurfaceFixture* sf = nullptr;
  const ManifoldFixture* mf = nullptr;
  try {
    sf = &fixtures.surface(scenario.surface);
    mf = &fixtures.manifold(scenario.manifold.empty() ? sf->manifold : scenario.manifold);
  } catch (const FixtureError& e) {
    throw ConfigError(e.what());
  }
  if (!mf->contact) throw ConfigError("manifold '" + mf->id + "' is not contact");
  const ContactStructure cs = mf->build();
  CumulativeProfile p = regionProfile(cs, sf->regionPatch(), scenario.ladder(), f, scenario.quad);
  std::vector<std::size_t> order(p.c.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p.c[a] > p.c[b]; });
  std::ostringstream s;
  s << "c,A,A_plus,A_minus\n";
  for (std::size_t i : order)
    s << formatNumber(p.c[i]) << ',' << formatNumber(p.A[i]) << ',' << formatNumber(p.Aplus[i]) << ','
      << formatNumber(p.Aminus[i]) << '\n';
  return s.str();
}

}  // namespace srgb
