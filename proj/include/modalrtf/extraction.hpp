#pragma once

#include <vector>

#include "modalrtf/recording.hpp"
#include "modalrtf/rtf.hpp"
#include "modalrtf/synthesis.hpp"
#include "modalrtf/translation.hpp"

namespace modalrtf {

/// Loudspeaker shell about O_s and HO-mic array about O, tied to a region pair.
struct ArrayGeometry {
  RegionPair regions;
  std::vector<SphericalCoord> speakers;  // about O_s
  MicArray mics;

  [[nodiscard]] std::vector<Cartesian3> speakers_about_origin() const;
  [[nodiscard]] int speaker_count() const { return static_cast<int>(speakers.size()); }
};

enum class DirectRemoval {
  /// Closed-form i k h_a(k R_ql) Y*_ab(R_ql) per speaker.
  kAnalytic,
  /// Free-field omni pressures through the same local fit as the measurement.
  kSensor,
};

struct ExtractionOptions {
  /// Aliasing bounds are enforced for f <= design_f_max only; above it the
  /// arrays are knowingly driven past their design order.
  Real design_f_max = 1000.0;
  bool allow_aliasing = false;
  /// Extra orders above the truncation rule for both regions, never beyond the
  /// largest order that keeps T and T' strictly overdetermined.
  int order_margin = 0;
  /// Match zero targets for source orders above N_s up to the overdetermined cap.
  bool guard_modes = false;
  DirectRemoval direct = DirectRemoval::kAnalytic;
  /// Must match the fit used when the measurement tensor was recorded.
  LocalFit fit = LocalFit::kOrthogonalSum;
};

/// Per-frequency orders (N_s, N_r) from the truncation rule.
struct RegionOrders {
  int source = 0;
  int receiver = 0;
};
RegionOrders region_orders(const RegionPair& regions, const WaveContext& ctx);

/// Largest N with (N+1)^2 < equations.
int overdetermined_order(int equations);

/// Truncation-rule orders raised by `margin`, capped by the array sizes.
RegionOrders region_orders(const ArrayGeometry& geometry, const WaveContext& ctx, int margin);

/// alpha for one frequency from one measurement block: weights (T^+), linear
/// composition, analytic direct removal, then T'^+ on the reverberant recordings.
FrequencyCoefficients extract_frequency(const MatrixXc& measurement_block, int active_mic_order,
                                        const ArrayGeometry& geometry, const WaveContext& ctx,
                                        const ExtractionOptions& options);

RtfCoefficientSet extract_coefficients(const MeasurementTensor& mt, const ArrayGeometry& geometry,
                                       Real sound_speed, const ExtractionOptions& options,
                                       int threads = 1);

}  // namespace modalrtf
