#include "srgb/fixtures.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

namespace srgb {

namespace {

using nlohmann::json;

json readJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FixtureError("cannot open fixture file " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FixtureError(path + ": " + e.what());
  }
}

std::map<std::string, double> readParams(const json& j) {
  std::map<std::string, double> out;
  if (j.contains("params"))
    for (const auto& [k, v] : j.at("params").items()) out[k] = v.get<double>();
  return out;
}

/// Numbers, or constant expressions such as "2*pi".
double readScalar(const json& j, const std::map<std::string, double>& params) {
  if (j.is_number()) return j.get<double>();
  return Expression::parse(j.get<std::string>(), {}, params).eval(std::array<double, 0>{});
}

std::array<std::string, 3> readTriple(const json& j) {
  if (!j.is_array() || j.size() != 3) throw FixtureError("expected three component expressions");
  return {j[0].get<std::string>(), j[1].get<std::string>(), j[2].get<std::string>()};
}

SurfacePatch readPatch(const std::string& name, const json& j, const std::map<std::string, double>& params) {
  SurfacePatch p = SurfacePatch::parse(name, readTriple(j.at("map")), params);
  for (int i = 0; i < 2; ++i) {
    p.lo(i) = readScalar(j.at("lo")[i], params);
    p.hi(i) = readScalar(j.at("hi")[i], params);
    if (!(p.hi(i) > p.lo(i))) throw FixtureError(name + ": empty parameter range");
  }
  if (j.contains("periodic")) p.periodic = {j["periodic"][0].get<bool>(), j["periodic"][1].get<bool>()};
  p.orientation = j.value("orientation", 1);
  if (j.contains("caps"))
    for (const json& c : j["caps"]) {
      const std::string side = c.at("side").get<std::string>();
      if (side != "low" && side != "high") throw FixtureError(name + ": cap side must be low or high");
      p.caps.push_back(Cap{c.at("axis").get<int>(), side == "low", c.at("radius").get<double>()});
    }
  return p;
}

}  // namespace

ContactStructure ManifoldFixture::build() const {
  return contact ? ContactStructure::build(frame) : ContactStructure::buildRiemannian(frame);
}

std::string FixtureSet::defaultDirectory() {
  if (const char* env = std::getenv("SRGB_FIXTURES")) return env;
  return SRGB_FIXTURE_DIR;
}

FixtureSet FixtureSet::load(const std::string& dir) {
  FixtureSet set;
  try {
    const json manifolds = readJson(dir + "/manifolds.json");
    const json surfaces = readJson(dir + "/surfaces.json");
    for (const json& m : manifolds.at("manifolds")) {
      ManifoldFixture f;
      f.id = m.at("id").get<std::string>();
      f.description = m.value("description", "");
      const auto params = readParams(m);
      f.frame.name = f.id;
      f.frame.a = SmoothVectorField::parse(readTriple(m.at("frame").at("A")), params);
      f.frame.b = SmoothVectorField::parse(readTriple(m.at("frame").at("B")), params);
      for (int i = 0; i < 3; ++i) {
        f.frame.box.lo(i) = m.at("box").at("lo")[i].get<double>();
        f.frame.box.hi(i) = m.at("box").at("hi")[i].get<double>();
      }
      f.frame.orientation = m.value("orientation", 1);
      f.contact = m.value("contact", true);
      set.manifolds_.push_back(std::move(f));
    }
    for (const json& s : surfaces.at("surfaces")) {
      SurfaceFixture f;
      f.id = s.at("id").get<std::string>();
      f.description = s.value("description", "");
      f.manifold = s.value("manifold", "heisenberg");
      const auto params = readParams(s);
      f.params = params;
      f.patch = readPatch(f.id, s, params);
      f.euler = s.at("euler").get<int>();
      f.patch.euler = f.euler;
      if (s.contains("integration")) {
        f.integration = readPatch(f.id + "/integration", s["integration"], params);
        f.integration->euler = f.euler;
      }
      if (s.contains("boundary"))
        for (const json& b : s["boundary"])
          f.boundary.push_back(CurvePiece{b.at("u").get<std::string>(), b.at("v").get<std::string>(),
                                          readScalar(b.at("t0"), params), readScalar(b.at("t1"), params)});
      set.surfaces_.push_back(std::move(f));
    }
  } catch (const json::exception& e) {
    throw FixtureError(std::string("malformed fixture: ") + e.what());
  } catch (const ExpressionError& e) {
    throw FixtureError(std::string("bad expression in fixture: ") + e.what());
  }
  return set;
}

const ManifoldFixture& FixtureSet::manifold(const std::string& id) const {
  for (const auto& m : manifolds_)
    if (m.id == id) return m;
  throw FixtureError("unknown manifold fixture '" + id + "'");
}

const SurfaceFixture& FixtureSet::surface(const std::string& id) const {
  for (const auto& s : surfaces_)
    if (s.id == id) return s;
  throw FixtureError("unknown surface fixture '" + id + "'");
}

std::vector<std::string> FixtureSet::manifoldIds() const {
  std::vector<std::string> out;
  for (const auto& m : manifolds_) out.push_back(m.id);
  return out;
}

std::vector<std::string> FixtureSet::surfaceIds() const {
  std::vector<std::string> out;
  for (const auto& s : surfaces_) out.push_back(s.id);
  return out;
}

}  // namespace srgb
