#include "modalrtf/recording.hpp"

#include <cmath>

#include <fmt/format.h>

#include "modalrtf/linalg.hpp"
#include "modalrtf/parallel.hpp"

namespace modalrtf {

namespace {

constexpr Real kBesselZeroFloor = 1e-8;

}  // namespace

void HoMicSpec::validate() const {
  if (order < 0) throw ConfigError("HO microphone order A must be >= 0");
  if (!(local_radius > 0.0)) throw ConfigError("HO microphone radius r must be positive");
  if (omni_count < harmonic_count(order)) {
    throw ConfigError(fmt::format("HO microphone needs Q' >= (A+1)^2 = {} omnis, got {}",
                                  harmonic_count(order), omni_count));
  }
}

MicArray MicArray::spherical(int unit_count, Real array_radius, const HoMicSpec& spec) {
  spec.validate();
  if (unit_count < 1) throw ConfigError("mic array needs Q >= 1 units");
  MicArray mics;
  mics.spec = spec;
  mics.centers = to_cartesian(sphere_array(unit_count, array_radius));
  mics.local_offsets = sphere_array(spec.omni_count, spec.local_radius);
  return mics;
}

void MicArray::validate() const {
  spec.validate();
  if (centers.empty()) throw ConfigError("mic array needs Q >= 1 units");
  if (static_cast<int>(local_offsets.size()) != spec.omni_count) {
    throw ConfigError("local omni layout size must equal Q'");
  }
  for (const auto& o : local_offsets) {
    if (std::abs(o.radius - spec.local_radius) > 1e-12) {
      throw ConfigError("all omnis must lie on the HO microphone sphere");
    }
  }
}

Cartesian3 MicArray::omni_position(int q, int q_prime) const {
  return centers[static_cast<std::size_t>(q)] +
         to_cartesian(local_offsets[static_cast<std::size_t>(q_prime)]);
}

Real mic_radius(int order, Real f_max, Real sound_speed) {
  if (order < 1 || !(f_max > 0.0) || !(sound_speed > 0.0)) {
    throw DomainError("mic_radius requires A >= 1, f_max > 0, c > 0");
  }
  return order * sound_speed / (kPi * kEuler * f_max);
}

int mic_active_order(const HoMicSpec& spec, const WaveContext& ctx) {
  return std::min(spec.order,
                  active_order(ctx.frequency(), spec.local_radius, ctx.sound_speed()));
}

std::size_t MeasurementTensor::frequency_index(Real f) const {
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    if (std::abs(frequencies[i] - f) <= 1e-9 * std::max(1.0, std::abs(f))) return i;
  }
  throw DomainError(fmt::format("frequency {} Hz is not on the measurement grid", f));
}

MatrixXc extract_local_coefficients(const MatrixXc& pressures, const MicArray& mics,
                                    const WaveContext& ctx, int active_order, LocalFit fit) {
  const HoMicSpec& spec = mics.spec;
  const int q_prime = spec.omni_count;
  if (pressures.rows() != q_prime) throw ConfigError("pressure rows must equal Q'");
  const int used_order = std::min(active_order, spec.order);
  MatrixXc out = MatrixXc::Zero(spec.mode_count(), pressures.cols());
  if (used_order < 0) return out;

  const Real kr = ctx.wavenumber() * spec.local_radius;
  const auto j = spherical_bessel_j_all(used_order, kr);
  for (int a = 0; a <= used_order; ++a) {
    if (std::abs(j[a]) < kBesselZeroFloor) {
      throw NumericalError(fmt::format("Bessel zero: j_{}(k r) = {:.3g} at f = {} Hz", a, j[a],
                                       ctx.frequency()));
    }
  }

  const int used = harmonic_count(used_order);
  MatrixXc harmonics(q_prime, used);
  for (int i = 0; i < q_prime; ++i) {
    const auto& o = mics.local_offsets[static_cast<std::size_t>(i)];
    harmonics.row(i) = spherical_harmonics_all(used_order, o.theta, o.phi).transpose();
  }

  MatrixXc fitted;
  if (fit == LocalFit::kOrthogonalSum) {
    fitted = (4.0 * kPi / q_prime) * harmonics.adjoint() * pressures;
  } else {
    fitted = TruncatedPseudoInverse<MatrixXc>(harmonics).solve(pressures);
  }
  for (int a = 0; a <= used_order; ++a) {
    out.middleRows(a * a, 2 * a + 1) = fitted.middleRows(a * a, 2 * a + 1) / j[a];
  }
  return out;
}

MatrixXc simulate_measurement_block(const RoomModel& room, const std::vector<Cartesian3>& speakers,
                                    const MicArray& mics, const WaveContext& ctx, LocalFit fit) {
  mics.validate();
  const int q_count = mics.unit_count();
  const int q_prime = mics.spec.omni_count;
  const int nab = mics.spec.mode_count();
  const auto l_count = static_cast<Eigen::Index>(speakers.size());
  const int active = mic_active_order(mics.spec, ctx);

  std::vector<MatrixXc> pressures(static_cast<std::size_t>(q_count), MatrixXc(q_prime, l_count));
  for (Eigen::Index l = 0; l < l_count; ++l) {
    const auto& y = speakers[static_cast<std::size_t>(l)];
    if (!room.contains(y)) {
      throw DomainError(fmt::format("loudspeaker {} lies outside the room", l));
    }
    const auto images = enumerate_images(room, y, room.max_image_order);
    for (int q = 0; q < q_count; ++q) {
      for (int i = 0; i < q_prime; ++i) {
        const Cartesian3 x = mics.omni_position(q, i);
        if (!room.contains(x)) {
          throw DomainError(fmt::format("omni {} of mic unit {} lies outside the room", i, q));
        }
        if ((x - y).norm() == 0.0) {
          throw DomainError(
              fmt::format("loudspeaker {} coincides with omni {} of mic unit {}", l, i, q));
        }
        pressures[static_cast<std::size_t>(q)](i, l) = rtf_from_images(images, x, ctx.wavenumber());
      }
    }
  }

  MatrixXc block(q_count * nab, l_count);
  for (int q = 0; q < q_count; ++q) {
    block.middleRows(q * nab, nab) =
        extract_local_coefficients(pressures[static_cast<std::size_t>(q)], mics, ctx, active, fit);
  }
  return block;
}

MeasurementTensor simulate_raw_measurements(const RoomModel& room,
                                            const std::vector<Cartesian3>& speakers,
                                            const MicArray& mics,
                                            const std::vector<Real>& frequencies, Real sound_speed,
                                            LocalFit fit, int threads) {
  room.validate();
  MeasurementTensor mt;
  mt.mic_count = mics.unit_count();
  mt.speaker_count = static_cast<int>(speakers.size());
  mt.mic_order = mics.spec.order;
  mt.frequencies = frequencies;
  mt.active_orders.resize(frequencies.size());
  mt.blocks.resize(frequencies.size());
  parallel_for(frequencies.size(), threads, [&](std::size_t i) {
    const WaveContext ctx(frequencies[i], sound_speed);
    mt.active_orders[i] = mic_active_order(mics.spec, ctx);
    mt.blocks[i] = simulate_measurement_block(room, speakers, mics, ctx, fit);
  });
  return mt;
}

ModeRecordings compose_mode_response(const MeasurementTensor& mt, std::size_t freq,
                                     const VectorXc& weights) {
  if (freq >= mt.blocks.size()) throw ConfigError("frequency index out of range");
  if (weights.size() != mt.speaker_count) {
    throw ConfigError(fmt::format("weight vector has {} entries, tensor has L = {}",
                                  weights.size(), mt.speaker_count));
  }
  ModeRecordings out;
  out.mic_count = mt.mic_count;
  out.mic_order = mt.mic_order;
  out.gamma = mt.blocks[freq] * weights;
  return out;
}

ModeRecordings compose_mode_response(const MeasurementTensor& mt, std::size_t freq,
                                     const WeightMatrix& weights, HarmonicIndex target) {
  if (target.flat() >= weights.entries.cols()) {
    throw ConfigError("target mode exceeds the synthesized weight set");
  }
  return compose_mode_response(mt, freq, VectorXc(weights.entries.col(target.flat())));
}

MatrixXc direct_block(const std::vector<Cartesian3>& speakers, const MicArray& mics,
                      const WaveContext& ctx, int active_order) {
  const int nab = mics.spec.mode_count();
  const int used_order = std::min(active_order, mics.spec.order);
  const Real k = ctx.wavenumber();
  MatrixXc block = MatrixXc::Zero(mics.unit_count() * nab, static_cast<Eigen::Index>(speakers.size()));
  if (used_order < 0) return block;
  for (int q = 0; q < mics.unit_count(); ++q) {
    for (std::size_t l = 0; l < speakers.size(); ++l) {
      const SphericalCoord rel = to_spherical(speakers[l] - mics.centers[static_cast<std::size_t>(q)]);
      if (rel.radius == 0.0) {
        throw DomainError(fmt::format("loudspeaker {} coincides with mic unit {} center", l, q));
      }
      const auto h = spherical_hankel_h1_all(used_order, k * rel.radius);
      const auto y = spherical_harmonics_all(used_order, rel.theta, rel.phi);
      for (int a = 0; a <= used_order; ++a) {
        for (int ab = a * a; ab <= a * a + 2 * a; ++ab) {
          block(q * nab + ab, static_cast<Eigen::Index>(l)) = kI * k * h[a] * std::conj(y[ab]);
        }
      }
    }
  }
  return block;
}

MatrixXc direct_block_sensor(const std::vector<Cartesian3>& speakers, const MicArray& mics,
                             const WaveContext& ctx, int active_order, LocalFit fit) {
  const int nab = mics.spec.mode_count();
  const int q_prime = mics.spec.omni_count;
  const auto l_count = static_cast<Eigen::Index>(speakers.size());
  MatrixXc block(mics.unit_count() * nab, l_count);
  MatrixXc pressures(q_prime, l_count);
  for (int q = 0; q < mics.unit_count(); ++q) {
    for (Eigen::Index l = 0; l < l_count; ++l) {
      for (int i = 0; i < q_prime; ++i) {
        pressures(i, l) = direct_field(mics.omni_position(q, i), speakers[static_cast<std::size_t>(l)], ctx);
      }
    }
    block.middleRows(q * nab, nab) = extract_local_coefficients(pressures, mics, ctx, active_order, fit);
  }
  return block;
}

ModeRecordings direct_component(const std::vector<Cartesian3>& speakers, const VectorXc& weights,
                                const MicArray& mics, const WaveContext& ctx, int active_order) {
  if (weights.size() != static_cast<Eigen::Index>(speakers.size())) {
    throw ConfigError("weight vector length must equal the loudspeaker count");
  }
  ModeRecordings out;
  out.mic_count = mics.unit_count();
  out.mic_order = mics.spec.order;
  out.gamma = direct_block(speakers, mics, ctx, active_order) * weights;
  return out;
}

ModeRecordings remove_direct(const ModeRecordings& total, const ModeRecordings& direct) {
  if (total.mic_count != direct.mic_count || total.mic_order != direct.mic_order ||
      total.gamma.size() != direct.gamma.size()) {
    throw ConfigError("remove_direct: recording shapes differ");
  }
  ModeRecordings out = total;
  out.gamma -= direct.gamma;
  return out;
}

}  // namespace modalrtf
