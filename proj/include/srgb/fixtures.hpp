#pragma once

// Manifold and surface fixtures loaded from JSON (fixtures/*.json).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srgb/boundary.hpp"

namespace srgb {

class FixtureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ManifoldFixture {
  std::string id, description;
  ContactFrame frame;
  bool contact = true;

  /// Contact structures are validated on probe points; metric-only
  /// fixtures use the Riemannian build.
  ContactStructure build() const;
};

struct SurfaceFixture {
  std::string id, description, manifold;
  SurfacePatch patch;
  /// Chart used for region integrals when `patch` is unsuitable (wedge).
  std::optional<SurfacePatch> integration;
  std::vector<CurvePiece> boundary;
  std::map<std::string, double> params;
  int euler = 0;

  bool closed() const { return boundary.empty(); }
  const SurfacePatch& regionPatch() const { return integration ? *integration : patch; }
};

class FixtureSet {
 public:
  /// Reads manifolds.json and surfaces.json from `dir`.
  static FixtureSet load(const std::string& dir);
  /// $SRGB_FIXTURES if set, else the source-tree fixtures directory.
  static std::string defaultDirectory();

  const ManifoldFixture& manifold(const std::string& id) const;
  const SurfaceFixture& surface(const std::string& id) const;
  std::vector<std::string> manifoldIds() const;
  std::vector<std::string> surfaceIds() const;

 private:
  std::vector<ManifoldFixture> manifolds_;
  std::vector<SurfaceFixture> surfaces_;
};

}  // namespace srgb
