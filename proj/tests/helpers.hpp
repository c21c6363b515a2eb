#pragma once

#include <random>

#include "srgb/fixtures.hpp"

namespace testing {

inline const srgb::FixtureSet& fixtures() {
  static const srgb::FixtureSet set = srgb::FixtureSet::load(srgb::FixtureSet::defaultDirectory());
  return set;
}

inline const srgb::ContactStructure& heisenberg() {
  static const srgb::ContactStructure cs = fixtures().manifold("heisenberg").build();
  return cs;
}

inline const srgb::ContactStructure& twisted() {
  static const srgb::ContactStructure cs = fixtures().manifold("heisenberg-twisted").build();
  return cs;
}

inline std::vector<srgb::ChartPoint> randomPoints(int n, std::uint64_t seed, double half = 1.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-half, half);
  std::vector<srgb::ChartPoint> out;
  for (int i = 0; i < n; ++i) out.emplace_back(u(rng), u(rng), u(rng));
  return out;
}

}  // namespace testing
