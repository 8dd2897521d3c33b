#pragma once

#include <vector>

#include "modalrtf/geometry.hpp"
#include "modalrtf/modal.hpp"

namespace modalrtf {

/// Mode-matching matrix: entry (nm, l) = i k j_n(k y_l) Y*_nm(y_l), positions about O_s.
struct TranslationMatrixT {
  MatrixXc entries;
  Real wavenumber = 0.0;
  int max_order = 0;
  std::vector<SphericalCoord> speakers;

  [[nodiscard]] int speaker_count() const { return static_cast<int>(entries.cols()); }
};

/// Loudspeaker weights; column (n'm') holds the weight vector producing that unit mode.
struct WeightMatrix {
  MatrixXc entries;
  Eigen::VectorXd residuals;
};

struct WeightSolution {
  VectorXc weights;
  Real residual = 0.0;
};

TranslationMatrixT build_T(const std::vector<SphericalCoord>& speakers, int max_order,
                           const WaveContext& ctx);

/// Throws ConfigError when L < (N_s+1)^2 unless `allow_aliasing`.
void check_speaker_aliasing(int speaker_count, int max_order, bool allow_aliasing);

/// Minimum-norm w = T^+ e_target and the residual |T w - e_target|.
WeightSolution solve_weights(const TranslationMatrixT& t, HarmonicIndex target,
                             bool allow_aliasing = false);

/// All (N_s+1)^2 unit-mode weight vectors at once.
WeightMatrix solve_all_weights(const TranslationMatrixT& t, bool allow_aliasing = false);

/// Unit-mode weights for orders <= t.max_order that also drive every order in
/// (t.max_order, guard_order] to zero, so the array does not leak uncontrolled
/// outgoing modes. Columns are the (N_s+1)^2 wanted modes; guard_order <= N_s
/// reduces to solve_all_weights.
WeightMatrix solve_guarded_weights(const TranslationMatrixT& t, int guard_order,
                                   const WaveContext& ctx, bool allow_aliasing = false);

Real condition_number(const TranslationMatrixT& t);

/// Relative deviation between the field radiated by weighted point sources and
/// the target mode h_n(kz) Y_nm(z) over spiral probes at `probe_radius` about O_s.
Real synthesis_probe_error(const TranslationMatrixT& t, const VectorXc& weights,
                           HarmonicIndex target, Real probe_radius, int probe_count = 64);

}  // namespace modalrtf
