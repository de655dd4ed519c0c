#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "symquad/domain.hpp"
#include "symquad/solver.hpp"

namespace testing_support {

using namespace symquad;

/// One-instance decomposition of the given orbit.
inline Decomposition single(const Domain& d, int orbit_id) {
  Decomposition dec;
  dec.multiplicities.assign(d.orbits.size(), 0);
  dec.multiplicities[static_cast<std::size_t>(orbit_id - 1)] = 1;
  dec.point_count = d.orbit(orbit_id).point_count;
  return dec;
}

/// Random feasible instance of an orbit.
inline OrbitInstance random_instance(const Domain& d, int orbit_id, std::mt19937_64& rng) {
  return {orbit_id, seed_orbits(d, single(d, orbit_id), rng).params};
}

/// Max over points of the distance to the nearest point of the other set,
/// symmetrised; infinity when sizes differ.
inline double set_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.size() != b.size()) return INFINITY;
  auto one_way = [](const std::vector<Point>& p, const std::vector<Point>& q) {
    double worst = 0.0;
    for (const auto& x : p) {
      double best = INFINITY;
      for (const auto& y : q) {
        double dist = 0.0;
        for (int c = 0; c < 3; ++c) dist = std::max(dist, std::abs(x[c] - y[c]));
        best = std::min(best, dist);
      }
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

inline Decomposition make_decomposition(const Domain& d, std::vector<int> n) {
  Decomposition dec{std::move(n), 0};
  for (std::size_t j = 0; j < d.orbits.size(); ++j) dec.point_count += dec.multiplicities[j] * d.orbits[j].point_count;
  return dec;
}

} // namespace testing_support
