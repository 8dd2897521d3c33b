#include "modalrtf/translation.hpp"

#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "modalrtf/linalg.hpp"

namespace modalrtf {

namespace {

Complex i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

Real minus_one_pow(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// Entry from precomputed j_l(k R_q) and Y_{l lambda}(R_q) for l <= v + a.
Complex s_hat_entry(int v, int mu, int a, int b, const Eigen::VectorXd& bessel,
                    const VectorXc& harmonics) {
  Complex sum{0.0, 0.0};
  const int lambda = b - mu;
  for (int l = std::abs(v - a); l <= v + a; ++l) {
    if ((v + a + l) % 2 != 0 || std::abs(lambda) > l) continue;
    const Real w1 = wigner_3j(v, a, l, 0, 0, 0);
    const Real w2 = wigner_3j(v, a, l, mu, -b, lambda);
    if (w1 == 0.0 || w2 == 0.0) continue;
    const Real norm = std::sqrt((2.0 * v + 1.0) * (2.0 * a + 1.0) * (2.0 * l + 1.0) / (4.0 * kPi));
    sum += i_pow(l) * minus_one_pow(2 * mu - b) * bessel[l] *
           std::conj(harmonics[l * l + l + lambda]) * norm * w1 * w2;
  }
  return 4.0 * kPi * i_pow(a - v) * sum;
}

}  // namespace

Complex s_hat(int v, int mu, int a, int b, const SphericalCoord& offset, const WaveContext& ctx) {
  if (v < 0 || a < 0 || std::abs(mu) > v || std::abs(b) > a) {
    throw DomainError("s_hat requires |mu| <= v and |b| <= a");
  }
  const int l_max = v + a;
  const Eigen::VectorXd bessel = spherical_bessel_j_all(l_max, ctx.wavenumber() * offset.radius);
  const VectorXc harmonics = spherical_harmonics_all(l_max, offset.theta, offset.phi);
  return s_hat_entry(v, mu, a, b, bessel, harmonics);
}

MatrixXc s_hat_block(int max_receiver, int max_local, const SphericalCoord& offset,
                     Real wavenumber) {
  const int l_max = max_receiver + max_local;
  const Eigen::VectorXd bessel = spherical_bessel_j_all(l_max, wavenumber * offset.radius);
  const VectorXc harmonics = spherical_harmonics_all(l_max, offset.theta, offset.phi);
  MatrixXc block(harmonic_count(max_local), harmonic_count(max_receiver));
  for (int a = 0; a <= max_local; ++a) {
    for (int b = -a; b <= a; ++b) {
      for (int v = 0; v <= max_receiver; ++v) {
        for (int mu = -v; mu <= v; ++mu) {
          block(a * a + a + b, v * v + v + mu) = s_hat_entry(v, mu, a, b, bessel, harmonics);
        }
      }
    }
  }
  return block;
}

void check_mic_aliasing(int unit_count, int mic_order, int receiver_order, bool allow_aliasing) {
  if (!allow_aliasing && unit_count * harmonic_count(mic_order) < harmonic_count(receiver_order)) {
    throw ConfigError(fmt::format(
        "microphone aliasing bound Q (A+1)^2 >= (N_r+1)^2 violated: Q = {}, A = {}, N_r = {}",
        unit_count, mic_order, receiver_order));
  }
}

TranslationMatrixTPrime build_T_prime(const MicArray& mics, int receiver_order,
                                      const WaveContext& ctx, int active_mic_order,
                                      bool allow_aliasing) {
  if (receiver_order < 0) throw ConfigError("N_r must be >= 0");
  const int mic_order = mics.spec.order;
  check_mic_aliasing(mics.unit_count(), mic_order, receiver_order, allow_aliasing);
  const int nab = harmonic_count(mic_order);
  const int used_local = std::min(active_mic_order, mic_order);

  TranslationMatrixTPrime tp;
  tp.wavenumber = ctx.wavenumber();
  tp.receiver_order = receiver_order;
  tp.mic_order = mic_order;
  tp.active_mic_order = used_local;
  tp.centers = mics.centers;
  tp.entries = MatrixXc::Zero(mics.unit_count() * nab, harmonic_count(receiver_order));
  if (used_local < 0) return tp;
  for (int q = 0; q < mics.unit_count(); ++q) {
    const SphericalCoord offset = to_spherical(mics.centers[static_cast<std::size_t>(q)]);
    tp.entries.block(q * nab, 0, harmonic_count(used_local), tp.entries.cols()) =
        s_hat_block(receiver_order, used_local, offset, tp.wavenumber);
  }
  return tp;
}

TranslationMatrixTPrime build_T_prime(const MicArray& mics, int receiver_order,
                                      const WaveContext& ctx, bool allow_aliasing) {
  return build_T_prime(mics, receiver_order, ctx, mics.spec.order, allow_aliasing);
}

AlphaSolution solve_alpha(const TranslationMatrixTPrime& tp, const ModeRecordings& recordings) {
  if (recordings.gamma.size() != tp.entries.rows()) {
    throw ConfigError(fmt::format("recordings have {} rows, T' expects {}", recordings.gamma.size(),
                                  tp.entries.rows()));
  }
  const TruncatedPseudoInverse<MatrixXc> pinv(tp.entries);
  AlphaSolution out;
  out.alpha = CoefficientVector(tp.receiver_order, pinv.solve(recordings.gamma));
  out.residual = (tp.entries * out.alpha.entries - recordings.gamma).norm();
  return out;
}

MatrixXc solve_alpha_all(const TranslationMatrixTPrime& tp, const MatrixXc& recordings) {
  if (recordings.rows() != tp.entries.rows()) {
    throw ConfigError("recording stack rows must match T'");
  }
  return TruncatedPseudoInverse<MatrixXc>(tp.entries).solve(recordings);
}

}  // namespace modalrtf
