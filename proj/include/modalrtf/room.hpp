#pragma once

#include <array>
#include <vector>

#include "modalrtf/geometry.hpp"
#include "modalrtf/modal.hpp"

namespace modalrtf {

/// Shoebox room. Reflection coefficients are ordered (x-, x+, y-, y+, z-, z+);
/// `origin_offset` is the analysis origin O in corner-based room coordinates.
struct RoomModel {
  Cartesian3 dimensions{6.0, 5.0, 2.5};
  std::array<Real, 6> wall_reflection{0.9, 0.9, 0.9, 0.9, 0.7, 0.7};
  int max_image_order = 2;
  Cartesian3 origin_offset{3.0, 2.5, 1.25};

  /// Room with O at its center.
  static RoomModel centered(const Cartesian3& dimensions, const std::array<Real, 6>& reflection,
                            int max_image_order);

  void validate() const;
  /// Strictly inside, for a point given about O.
  [[nodiscard]] bool contains(const Cartesian3& p) const;
};

/// Image of the source after `order` wall reflections, in coordinates about O.
struct ImageSource {
  Cartesian3 position;
  Real amplitude = 1.0;
  int order = 0;
};

/// True source plus all lattice images with 1 <= order <= max_order, sorted by
/// order then lexicographic position.
std::vector<ImageSource> enumerate_images(const RoomModel& room, const Cartesian3& y,
                                          int max_order);

/// Direct path plus the image-source reverberation, all with e^{ikd}/(4 pi d).
Complex rtf_oracle(const RoomModel& room, const Cartesian3& x, const Cartesian3& y,
                   const WaveContext& ctx);

/// Same as rtf_oracle with a precomputed image list (from enumerate_images).
Complex rtf_from_images(const std::vector<ImageSource>& images, const Cartesian3& x,
                        Real wavenumber);

}  // namespace modalrtf
