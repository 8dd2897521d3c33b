#pragma once

#include <cstdint>
#include <vector>

#include "modalrtf/types.hpp"

namespace modalrtf {

using Cartesian3 = Vector3;

/// Spherical coordinates: polar angle theta in [0, pi], azimuth phi in [0, 2pi).
struct SphericalCoord {
  Real radius = 0.0;
  Real theta = 0.0;
  Real phi = 0.0;
};

struct Direction {
  Real theta = 0.0;
  Real phi = 0.0;
};

/// Receiver sphere about O and source shell about O_s = O + offset.
struct RegionPair {
  Real receiver_radius = 0.4;
  Real source_radius = 0.4;
  Real source_inner_radius = 0.3;
  Cartesian3 offset = Cartesian3::Zero();

  void validate() const;
};

/// The zero vector maps to (0, 0, 0).
SphericalCoord to_spherical(const Cartesian3& v);
Cartesian3 to_cartesian(const SphericalCoord& s);

/// Generalized-spiral (Fibonacci) directions; deterministic for a given count.
std::vector<Direction> equal_area_directions(int count);

/// Spiral directions with radii drawn uniformly on [inner, outer] from a
/// std::mt19937_64 stream seeded with `seed` (53-bit mantissa conversion).
std::vector<SphericalCoord> shell_array(int count, Real outer, Real inner, std::uint64_t seed);

/// Spiral directions at a fixed radius.
std::vector<SphericalCoord> sphere_array(int count, Real radius);

std::vector<Cartesian3> to_cartesian(const std::vector<SphericalCoord>& points);

}  // namespace modalrtf
