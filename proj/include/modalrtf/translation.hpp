#pragma once

#include <vector>

#include "modalrtf/modal.hpp"
#include "modalrtf/recording.hpp"

namespace modalrtf {

/// Maps receiver-region coefficients (columns, flat v mu) to local HO-mic
/// coefficients (rows, q major then flat a b).
struct TranslationMatrixTPrime {
  MatrixXc entries;
  Real wavenumber = 0.0;
  int receiver_order = 0;
  int mic_order = 0;
  int active_mic_order = 0;
  std::vector<Cartesian3> centers;
};

/// Coefficient translation entry S^{mu b}_{v a}(R_q): weight of the (v, mu)
/// interior mode about O in the (a, b) local coefficient about O + R_q.
Complex s_hat(int v, int mu, int a, int b, const SphericalCoord& offset, const WaveContext& ctx);

/// All entries for one offset: rows flat (a b) <= max_local, columns flat (v mu) <= max_receiver.
MatrixXc s_hat_block(int max_receiver, int max_local, const SphericalCoord& offset, Real wavenumber);

/// Throws ConfigError when Q (A+1)^2 < (N_r+1)^2 unless `allow_aliasing`.
void check_mic_aliasing(int unit_count, int mic_order, int receiver_order, bool allow_aliasing);

/// Rows for local orders above `active_mic_order` are zero (masked).
TranslationMatrixTPrime build_T_prime(const MicArray& mics, int receiver_order,
                                      const WaveContext& ctx, int active_mic_order,
                                      bool allow_aliasing = false);

TranslationMatrixTPrime build_T_prime(const MicArray& mics, int receiver_order,
                                      const WaveContext& ctx, bool allow_aliasing = false);

struct AlphaSolution {
  CoefficientVector alpha;
  Real residual = 0.0;
};

/// alpha = T'^+ gamma (SVD least squares with the library cutoff).
AlphaSolution solve_alpha(const TranslationMatrixTPrime& tp, const ModeRecordings& recordings);

/// Column-wise solve for a stack of recordings (rows in T' order).
MatrixXc solve_alpha_all(const TranslationMatrixTPrime& tp, const MatrixXc& recordings);

}  // namespace modalrtf
