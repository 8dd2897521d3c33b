#pragma once

#include <cstdint>
#include <vector>

#include "modalrtf/geometry.hpp"
#include "modalrtf/modal.hpp"
#include "modalrtf/room.hpp"
#include "modalrtf/synthesis.hpp"

namespace modalrtf {

/// Open-sphere higher-order microphone: `omni_count` omnis on a sphere of `local_radius`.
struct HoMicSpec {
  int order = 3;
  Real local_radius = 0.0;
  int omni_count = 16;

  void validate() const;
  [[nodiscard]] int mode_count() const { return harmonic_count(order); }
};

/// How the omni pressures of one HO microphone are turned into local coefficients.
enum class LocalFit {
  /// (4 pi / Q') / j_a(kr) * sum_q' P_q' Y*_ab(q'): the equal-weight orthogonality sum.
  kOrthogonalSum,
  /// Least-squares fit of the active harmonics to the Q' pressures, then / j_a(kr).
  kLeastSquares,
};

struct MicArray {
  std::vector<Cartesian3> centers;  // about O
  HoMicSpec spec;
  std::vector<SphericalCoord> local_offsets;  // shared by every unit

  /// Q units on a sphere of `array_radius` about O, each with Q' spiral omnis.
  static MicArray spherical(int unit_count, Real array_radius, const HoMicSpec& spec);

  void validate() const;
  [[nodiscard]] int unit_count() const { return static_cast<int>(centers.size()); }
  [[nodiscard]] Cartesian3 omni_position(int q, int q_prime) const;
};

/// r = A c / (pi e f_max).
Real mic_radius(int order, Real f_max, Real sound_speed);

/// Effective local order at this frequency: min(A, floor(pi f e r / c)).
int mic_active_order(const HoMicSpec& spec, const WaveContext& ctx);

/// Raw per-loudspeaker local coefficients gamma~_ab^(q,l), one block per frequency.
/// Block layout: rows (q, flat ab) with q major, columns loudspeaker l.
struct MeasurementTensor {
  int mic_count = 0;
  int speaker_count = 0;
  int mic_order = 0;
  std::vector<Real> frequencies;
  std::vector<int> active_orders;
  std::vector<MatrixXc> blocks;
  std::uint64_t geometry_digest = 0;
  std::uint64_t config_digest = 0;

  [[nodiscard]] int local_mode_count() const { return harmonic_count(mic_order); }
  [[nodiscard]] Complex at(std::size_t freq, int q, int l, int ab) const {
    return blocks[freq](q * local_mode_count() + ab, l);
  }
  [[nodiscard]] std::size_t frequency_index(Real f) const;
};

/// Local coefficients at every mic unit for one composed mode, stacked (q, flat ab).
struct ModeRecordings {
  int mic_count = 0;
  int mic_order = 0;
  VectorXc gamma;

  [[nodiscard]] Complex at(int q, int ab) const { return gamma[q * harmonic_count(mic_order) + ab]; }
};

/// Local coefficients from the pressures of a single HO microphone.
/// `pressures` is Q' x ncols; result is (A+1)^2 x ncols with modes a > active_order zeroed.
MatrixXc extract_local_coefficients(const MatrixXc& pressures, const MicArray& mics,
                                    const WaveContext& ctx, int active_order, LocalFit fit);

/// One frequency block of the raw measurement tensor from the image-source oracle.
/// Speaker positions are about O.
MatrixXc simulate_measurement_block(const RoomModel& room, const std::vector<Cartesian3>& speakers,
                                    const MicArray& mics, const WaveContext& ctx, LocalFit fit);

MeasurementTensor simulate_raw_measurements(const RoomModel& room,
                                            const std::vector<Cartesian3>& speakers,
                                            const MicArray& mics,
                                            const std::vector<Real>& frequencies, Real sound_speed,
                                            LocalFit fit, int threads = 1);

/// gamma^(q,nm) = sum_l w_l^{nm} gamma~^(q,l).
ModeRecordings compose_mode_response(const MeasurementTensor& mt, std::size_t freq,
                                     const VectorXc& weights);
ModeRecordings compose_mode_response(const MeasurementTensor& mt, std::size_t freq,
                                     const WeightMatrix& weights, HarmonicIndex target);

/// Analytic direct-path local coefficients i k h_a(k R_ql) Y*_ab(R_ql) per (q ab, l),
/// masked above `active_order`.
MatrixXc direct_block(const std::vector<Cartesian3>& speakers, const MicArray& mics,
                      const WaveContext& ctx, int active_order);

/// Direct-path local coefficients as the HO microphones themselves would report them:
/// free-field pressures at every omni passed through the same local fit. Unlike the
/// analytic form this stays exact when a loudspeaker sits close to or inside a mic sphere.
MatrixXc direct_block_sensor(const std::vector<Cartesian3>& speakers, const MicArray& mics,
                             const WaveContext& ctx, int active_order, LocalFit fit);

ModeRecordings direct_component(const std::vector<Cartesian3>& speakers, const VectorXc& weights,
                                const MicArray& mics, const WaveContext& ctx, int active_order);

ModeRecordings remove_direct(const ModeRecordings& total, const ModeRecordings& direct);

}  // namespace modalrtf
