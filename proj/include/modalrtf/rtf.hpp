#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "modalrtf/geometry.hpp"
#include "modalrtf/modal.hpp"
#include "modalrtf/room.hpp"

namespace modalrtf {

/// alpha^{nm}_{v mu} at one frequency: rows flat (n m) <= N_s, columns flat (v mu) <= N_r.
struct FrequencyCoefficients {
  Real frequency = 0.0;
  int source_order = 0;
  int receiver_order = 0;
  MatrixXc alpha;
};

/// The room's modal parameterization between the source and receiver regions.
struct RtfCoefficientSet {
  RegionPair regions;
  Real sound_speed = WaveContext::kDefaultSoundSpeed;
  std::vector<FrequencyCoefficients> bins;
  std::uint64_t geometry_digest = 0;
  std::uint64_t config_digest = 0;

  [[nodiscard]] std::vector<Real> frequencies() const;
  /// Exact grid lookup; throws DomainError for off-grid frequencies.
  [[nodiscard]] const FrequencyCoefficients& at_frequency(Real f) const;
};

/// Reverberant part i k sum alpha j_n(k y) j_v(k x) Y*_nm(y) Y_v mu(x).
/// x is about O, y_s about O_s. A non-negative `receiver_order_limit` drops v above it.
Complex reconstruct_reverberant(const RtfCoefficientSet& set, const SphericalCoord& x,
                                const SphericalCoord& y_s, const WaveContext& ctx,
                                int receiver_order_limit = -1);

/// Direct path plus reconstructed reverberation.
Complex reconstruct_rtf(const RtfCoefficientSet& set, const SphericalCoord& x,
                        const SphericalCoord& y_s, const WaveContext& ctx);

/// sum |truth - estimate| / sum |truth|.
Real relative_error(const std::vector<Complex>& truth, const std::vector<Complex>& estimate);

/// One receiver point about O paired with one source point about O_s.
struct ProbePair {
  Cartesian3 receiver;
  Cartesian3 source;
};

/// The seven axis points (0, +-R e_i) used both about O_s and O, paired one-to-one.
std::vector<ProbePair> axis_probes(Real radius);

/// E(f) against the image-source oracle for every frequency of the set.
std::vector<std::pair<Real, Real>> broadband_sweep(const RtfCoefficientSet& set,
                                                   const RoomModel& room,
                                                   const std::vector<ProbePair>& probes,
                                                   int threads = 1);

}  // namespace modalrtf
