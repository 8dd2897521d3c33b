#include "modalrtf/room.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <tuple>

namespace modalrtf {

RoomModel RoomModel::centered(const Cartesian3& dimensions, const std::array<Real, 6>& reflection,
                              int max_image_order) {
  RoomModel room;
  room.dimensions = dimensions;
  room.wall_reflection = reflection;
  room.max_image_order = max_image_order;
  room.origin_offset = dimensions / 2.0;
  room.validate();
  return room;
}

void RoomModel::validate() const {
  if (!(dimensions.array() > 0.0).all() || !dimensions.allFinite()) {
    throw ConfigError("room dimensions must be positive");
  }
  for (Real beta : wall_reflection) {
    if (!(beta >= 0.0 && beta <= 1.0)) {
      throw ConfigError("wall reflection coefficients must lie in [0, 1]");
    }
  }
  if (max_image_order < 0) throw ConfigError("max image order must be >= 0");
  if (!((origin_offset.array() > 0.0).all() && (origin_offset.array() < dimensions.array()).all())) {
    throw ConfigError("analysis origin must lie strictly inside the room");
  }
}

bool RoomModel::contains(const Cartesian3& p) const {
  const Cartesian3 c = p + origin_offset;
  return (c.array() > 0.0).all() && (c.array() < dimensions.array()).all();
}

std::vector<ImageSource> enumerate_images(const RoomModel& room, const Cartesian3& y,
                                          int max_order) {
  if (max_order < 0) throw DomainError("enumerate_images: negative order");
  if (!room.contains(y)) throw DomainError("enumerate_images: source lies outside the room");
  const Cartesian3 c = y + room.origin_offset;

  // Per axis: all (coordinate, reflection count, amplitude) with count <= max_order.
  struct AxisImage {
    Real coordinate;
    int hits;
    Real amplitude;
  };
  std::array<std::vector<AxisImage>, 3> axes;
  for (int d = 0; d < 3; ++d) {
    const Real low = room.wall_reflection[static_cast<std::size_t>(2 * d)];
    const Real high = room.wall_reflection[static_cast<std::size_t>(2 * d + 1)];
    for (int p = 0; p <= 1; ++p) {
      for (int m = -max_order - 1; m <= max_order + 1; ++m) {
        const int low_hits = std::abs(m - p);
        const int high_hits = std::abs(m);
        if (low_hits + high_hits > max_order) continue;
        const Real coord = (1 - 2 * p) * c[d] + 2.0 * m * room.dimensions[d];
        axes[static_cast<std::size_t>(d)].push_back(
            {coord, low_hits + high_hits, std::pow(low, low_hits) * std::pow(high, high_hits)});
      }
    }
  }

  std::vector<ImageSource> images;
  for (const auto& ix : axes[0]) {
    for (const auto& iy : axes[1]) {
      for (const auto& iz : axes[2]) {
        const int order = ix.hits + iy.hits + iz.hits;
        if (order > max_order) continue;
        const Cartesian3 corner{ix.coordinate, iy.coordinate, iz.coordinate};
        images.push_back({corner - room.origin_offset, ix.amplitude * iy.amplitude * iz.amplitude,
                          order});
      }
    }
  }
  std::sort(images.begin(), images.end(), [](const ImageSource& a, const ImageSource& b) {
    return std::make_tuple(a.order, a.position.x(), a.position.y(), a.position.z()) <
           std::make_tuple(b.order, b.position.x(), b.position.y(), b.position.z());
  });
  return images;
}

Complex rtf_from_images(const std::vector<ImageSource>& images, const Cartesian3& x,
                        Real wavenumber) {
  Complex total{0.0, 0.0};
  for (const auto& img : images) {
    if (img.amplitude == 0.0) continue;
    total += img.amplitude * greens_function((x - img.position).norm(), wavenumber);
  }
  return total;
}

Complex rtf_oracle(const RoomModel& room, const Cartesian3& x, const Cartesian3& y,
                   const WaveContext& ctx) {
  if (!room.contains(x)) throw DomainError("rtf_oracle: receiver lies outside the room");
  if ((x - y).norm() == 0.0) throw DomainError("rtf_oracle: coincident source and receiver");
  return rtf_from_images(enumerate_images(room, y, room.max_image_order), x, ctx.wavenumber());
}

}  // namespace modalrtf
