#include "modalrtf/synthesis.hpp"

#include <string>

#include <fmt/format.h>

#include "modalrtf/linalg.hpp"

namespace modalrtf {

TranslationMatrixT build_T(const std::vector<SphericalCoord>& speakers, int max_order,
                           const WaveContext& ctx) {
  if (speakers.empty()) throw ConfigError("build_T requires at least one loudspeaker");
  if (max_order < 0) throw ConfigError("build_T requires N_s >= 0");
  const Real k = ctx.wavenumber();
  TranslationMatrixT t;
  t.wavenumber = k;
  t.max_order = max_order;
  t.speakers = speakers;
  t.entries.resize(harmonic_count(max_order), static_cast<Eigen::Index>(speakers.size()));
  for (std::size_t l = 0; l < speakers.size(); ++l) {
    t.entries.col(static_cast<Eigen::Index>(l)) =
        (kI * k) * interior_basis(max_order, speakers[l], k).conjugate();
  }
  return t;
}

void check_speaker_aliasing(int speaker_count, int max_order, bool allow_aliasing) {
  if (!allow_aliasing && speaker_count < harmonic_count(max_order)) {
    throw ConfigError(fmt::format("loudspeaker aliasing bound L >= (N_s+1)^2 violated: L = {}, "
                                  "N_s = {} needs {}",
                                  speaker_count, max_order, harmonic_count(max_order)));
  }
}

WeightSolution solve_weights(const TranslationMatrixT& t, HarmonicIndex target,
                             bool allow_aliasing) {
  if (target.order > t.max_order) {
    throw ConfigError(fmt::format("target order {} exceeds N_s = {}", target.order, t.max_order));
  }
  check_speaker_aliasing(t.speaker_count(), t.max_order, allow_aliasing);
  const TruncatedPseudoInverse<MatrixXc> pinv(t.entries);
  VectorXc beta = VectorXc::Zero(t.entries.rows());
  beta[target.flat()] = 1.0;
  WeightSolution out;
  out.weights = pinv.matrix().col(target.flat());
  out.residual = (t.entries * out.weights - beta).norm();
  return out;
}

WeightMatrix solve_all_weights(const TranslationMatrixT& t, bool allow_aliasing) {
  check_speaker_aliasing(t.speaker_count(), t.max_order, allow_aliasing);
  const TruncatedPseudoInverse<MatrixXc> pinv(t.entries);
  WeightMatrix w;
  w.entries = pinv.matrix();
  const MatrixXc residual = t.entries * w.entries - MatrixXc::Identity(t.entries.rows(), t.entries.rows());
  w.residuals = residual.colwise().norm().transpose();
  return w;
}

WeightMatrix solve_guarded_weights(const TranslationMatrixT& t, int guard_order,
                                   const WaveContext& ctx, bool allow_aliasing) {
  if (guard_order <= t.max_order) return solve_all_weights(t, allow_aliasing);
  const TranslationMatrixT wide = build_T(t.speakers, guard_order, ctx);
  check_speaker_aliasing(wide.speaker_count(), guard_order, allow_aliasing);
  const TruncatedPseudoInverse<MatrixXc> pinv(wide.entries);
  const Eigen::Index wanted = t.entries.rows();
  WeightMatrix w;
  w.entries = pinv.matrix().leftCols(wanted);
  const MatrixXc residual =
      wide.entries * w.entries - MatrixXc::Identity(wide.entries.rows(), wanted);
  w.residuals = residual.colwise().norm().transpose();
  return w;
}

Real condition_number(const TranslationMatrixT& t) { return condition_number_2(t.entries); }

Real synthesis_probe_error(const TranslationMatrixT& t, const VectorXc& weights,
                           HarmonicIndex target, Real probe_radius, int probe_count) {
  if (weights.size() != t.speaker_count()) throw ConfigError("weight vector length must equal L");
  const auto probes = sphere_array(probe_count, probe_radius);
  const auto speakers = to_cartesian(t.speakers);
  Real err2 = 0.0;
  Real ref2 = 0.0;
  for (const auto& probe : probes) {
    const Cartesian3 z = to_cartesian(probe);
    Complex synthesized{0.0, 0.0};
    for (std::size_t l = 0; l < speakers.size(); ++l) {
      synthesized += weights[static_cast<Eigen::Index>(l)] *
                     greens_function((z - speakers[l]).norm(), t.wavenumber);
    }
    const Complex wanted =
        spherical_hankel_h1(target.order, t.wavenumber * probe.radius) *
        spherical_harmonic(target, probe.theta, probe.phi);
    err2 += std::norm(synthesized - wanted);
    ref2 += std::norm(wanted);
  }
  return std::sqrt(err2 / ref2);
}

}  // namespace modalrtf
