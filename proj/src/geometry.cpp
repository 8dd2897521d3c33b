#include "modalrtf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace modalrtf {

void RegionPair::validate() const {
  if (!(receiver_radius > 0.0)) throw ConfigError("receiver radius R_r must be positive");
  if (!(source_inner_radius >= 0.0 && source_inner_radius < source_radius)) {
    throw ConfigError("source shell requires 0 <= R_s' < R_s");
  }
  if (!offset.allFinite()) throw ConfigError("region offset R_sr must be finite");
}

SphericalCoord to_spherical(const Cartesian3& v) {
  const Real r = v.norm();
  if (r == 0.0) return {};
  const Real theta = std::acos(std::clamp(v.z() / r, -1.0, 1.0));
  Real phi = std::atan2(v.y(), v.x());
  if (phi < 0.0) phi += 2.0 * kPi;
  if (phi >= 2.0 * kPi) phi = 0.0;
  return {r, theta, phi};
}

Cartesian3 to_cartesian(const SphericalCoord& s) {
  const Real st = std::sin(s.theta);
  return {s.radius * st * std::cos(s.phi), s.radius * st * std::sin(s.phi),
          s.radius * std::cos(s.theta)};
}

std::vector<Cartesian3> to_cartesian(const std::vector<SphericalCoord>& points) {
  std::vector<Cartesian3> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(to_cartesian(p));
  return out;
}

std::vector<Direction> equal_area_directions(int count) {
  if (count < 1) throw ConfigError("equal_area_directions requires count >= 1");
  const Real golden_angle = kPi * (3.0 - std::sqrt(5.0));
  std::vector<Direction> dirs;
  dirs.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    // midpoint rule in z keeps every band the same area
    const Real z = 1.0 - (2.0 * i + 1.0) / count;
    const Real phi = std::fmod(golden_angle * i, 2.0 * kPi);
    dirs.push_back({std::acos(z), phi});
  }
  return dirs;
}

std::vector<SphericalCoord> shell_array(int count, Real outer, Real inner, std::uint64_t seed) {
  if (!(inner >= 0.0 && inner <= outer) || !(outer > 0.0)) {
    throw ConfigError("shell_array requires 0 <= inner <= outer");
  }
  std::mt19937_64 rng(seed);
  const auto dirs = equal_area_directions(count);
  std::vector<SphericalCoord> out;
  out.reserve(dirs.size());
  for (const auto& d : dirs) {
    const Real u = static_cast<Real>(rng() >> 11) * 0x1.0p-53;
    const Real r = inner == outer ? outer : inner + (outer - inner) * u;
    out.push_back({r, d.theta, d.phi});
  }
  return out;
}

std::vector<SphericalCoord> sphere_array(int count, Real radius) {
  if (!(radius > 0.0)) throw ConfigError("sphere_array requires radius > 0");
  const auto dirs = equal_area_directions(count);
  std::vector<SphericalCoord> out;
  out.reserve(dirs.size());
  for (const auto& d : dirs) out.push_back({radius, d.theta, d.phi});
  return out;
}

}  // namespace modalrtf
