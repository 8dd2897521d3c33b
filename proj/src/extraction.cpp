#include "modalrtf/extraction.hpp"

#include <fmt/format.h>

#include "modalrtf/parallel.hpp"

namespace modalrtf {

std::vector<Cartesian3> ArrayGeometry::speakers_about_origin() const {
  std::vector<Cartesian3> out;
  out.reserve(speakers.size());
  for (const auto& s : speakers) out.push_back(to_cartesian(s) + regions.offset);
  return out;
}

RegionOrders region_orders(const RegionPair& regions, const WaveContext& ctx) {
  return {truncation_order(ctx.wavenumber(), regions.source_radius),
          truncation_order(ctx.wavenumber(), regions.receiver_radius)};
}

int overdetermined_order(int equations) {
  int n = 0;
  while ((n + 2) * (n + 2) < equations) ++n;
  return n;
}

RegionOrders region_orders(const ArrayGeometry& geometry, const WaveContext& ctx, int margin) {
  if (margin < 0) throw ConfigError("order margin must be non-negative");
  RegionOrders base = region_orders(geometry.regions, ctx);
  const int cap_s = overdetermined_order(geometry.speaker_count());
  const int cap_r = overdetermined_order(geometry.mics.unit_count() * geometry.mics.spec.mode_count());
  base.source = std::max(base.source, std::min(base.source + margin, cap_s));
  base.receiver = std::max(base.receiver, std::min(base.receiver + margin, cap_r));
  return base;
}

FrequencyCoefficients extract_frequency(const MatrixXc& measurement_block, int active_mic_order,
                                        const ArrayGeometry& geometry, const WaveContext& ctx,
                                        const ExtractionOptions& options) {
  const RegionOrders orders = region_orders(geometry, ctx, options.order_margin);
  const bool allow = options.allow_aliasing || ctx.frequency() > options.design_f_max;
  const int nab = geometry.mics.spec.mode_count();
  if (measurement_block.rows() != geometry.mics.unit_count() * nab ||
      measurement_block.cols() != geometry.speaker_count()) {
    throw ConfigError("measurement block shape does not match the array geometry");
  }

  const TranslationMatrixT t = build_T(geometry.speakers, orders.source, ctx);
  const int guard =
      options.guard_modes ? overdetermined_order(geometry.speaker_count()) : orders.source;
  const WeightMatrix weights = solve_guarded_weights(t, guard, ctx, allow);

  const MatrixXc total = measurement_block * weights.entries;
  const std::vector<Cartesian3> speakers = geometry.speakers_about_origin();
  const MatrixXc direct =
      (options.direct == DirectRemoval::kSensor
           ? direct_block_sensor(speakers, geometry.mics, ctx, active_mic_order, options.fit)
           : direct_block(speakers, geometry.mics, ctx, active_mic_order)) *
      weights.entries;
  const MatrixXc reverberant = total - direct;

  const TranslationMatrixTPrime tp =
      build_T_prime(geometry.mics, orders.receiver, ctx, active_mic_order, allow);

  FrequencyCoefficients out;
  out.frequency = ctx.frequency();
  out.source_order = orders.source;
  out.receiver_order = orders.receiver;
  out.alpha = solve_alpha_all(tp, reverberant).transpose();
  for (Eigen::Index nm = 0; nm < out.alpha.rows(); ++nm) {
    if (!out.alpha.row(nm).allFinite()) {
      const auto idx = HarmonicIndex::from_flat(static_cast<int>(nm));
      throw NumericalError(fmt::format("non-finite coefficients at f = {} Hz, (n, m) = ({}, {})",
                                       ctx.frequency(), idx.order, idx.degree));
    }
  }
  return out;
}

RtfCoefficientSet extract_coefficients(const MeasurementTensor& mt, const ArrayGeometry& geometry,
                                       Real sound_speed, const ExtractionOptions& options,
                                       int threads) {
  if (mt.mic_count != geometry.mics.unit_count() || mt.speaker_count != geometry.speaker_count() ||
      mt.mic_order != geometry.mics.spec.order) {
    throw ConfigError("measurement tensor dimensions do not match the array geometry");
  }
  RtfCoefficientSet set;
  set.regions = geometry.regions;
  set.sound_speed = sound_speed;
  set.geometry_digest = mt.geometry_digest;
  set.config_digest = mt.config_digest;
  set.bins.resize(mt.frequencies.size());
  parallel_for(mt.frequencies.size(), threads, [&](std::size_t i) {
    const WaveContext ctx(mt.frequencies[i], sound_speed);
    set.bins[i] = extract_frequency(mt.blocks[i], mt.active_orders[i], geometry, ctx, options);
  });
  return set;
}

}  // namespace modalrtf
