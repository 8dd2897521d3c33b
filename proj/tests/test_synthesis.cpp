#include <gtest/gtest.h>

#include "modalrtf/synthesis.hpp"

using namespace modalrtf;

namespace {

std::vector<SphericalCoord> shell() { return shell_array(121, 0.4, 0.3, 1); }

}  // namespace

TEST(ModeMatching, ShapeAndEntries) {
  const WaveContext ctx(600.0);
  const auto speakers = shell();
  const TranslationMatrixT t = build_T(speakers, 6, ctx);
  EXPECT_EQ(t.entries.rows(), 49);
  EXPECT_EQ(t.entries.cols(), 121);
  const double k = ctx.wavenumber();
  const auto& y = speakers[17];
  const HarmonicIndex idx(4, -3);
  const Complex want = kI * k * spherical_bessel_j(4, k * y.radius) *
                       std::conj(spherical_harmonic(idx, y.theta, y.phi));
  EXPECT_NEAR(std::abs(t.entries(idx.flat(), 17) - want), 0.0, 1e-15);
}

TEST(ModeMatching, WeightsReproduceUnitModes) {
  const WaveContext ctx(800.0);
  const TranslationMatrixT t = build_T(shell(), truncation_order(ctx.wavenumber(), 0.4), ctx);
  const WeightMatrix w = solve_all_weights(t);
  EXPECT_EQ(w.entries.rows(), 121);
  EXPECT_EQ(w.entries.cols(), t.entries.rows());
  EXPECT_LT(w.residuals.maxCoeff(), 1e-8);
  const MatrixXc product = t.entries * w.entries;
  EXPECT_LT((product - MatrixXc::Identity(product.rows(), product.cols())).norm(), 1e-8);

  const WeightSolution single = solve_weights(t, HarmonicIndex(3, 2));
  EXPECT_LT((single.weights - w.entries.col(HarmonicIndex(3, 2).flat())).norm(), 1e-12);
  EXPECT_LT(single.residual, 1e-8);
}

TEST(ModeMatching, AliasingBound) {
  const WaveContext ctx(900.0);
  const auto few = shell_array(30, 0.4, 0.3, 1);
  const TranslationMatrixT t = build_T(few, 9, ctx);
  EXPECT_THROW(solve_all_weights(t), ConfigError);
  EXPECT_THROW(solve_weights(t, HarmonicIndex(0, 0)), ConfigError);
  EXPECT_NO_THROW(solve_all_weights(t, true));
  EXPECT_THROW(check_speaker_aliasing(99, 9, false), ConfigError);
  EXPECT_NO_THROW(check_speaker_aliasing(100, 9, false));
}

TEST(ModeMatching, TargetAboveOrderRejected) {
  const TranslationMatrixT t = build_T(shell(), 3, WaveContext(300.0));
  EXPECT_THROW(solve_weights(t, HarmonicIndex(4, 0)), ConfigError);
}

TEST(ModeMatching, FieldOutsideShellMatchesTargetMode) {
  // With guard orders the synthesized exterior field is the requested mode alone.
  const WaveContext ctx(500.0);
  const int ns = truncation_order(ctx.wavenumber(), 0.4);
  const TranslationMatrixT t = build_T(shell(), ns, ctx);
  const WeightMatrix plain = solve_all_weights(t);
  const WeightMatrix guarded = solve_guarded_weights(t, 9, ctx);
  ASSERT_EQ(guarded.entries.cols(), plain.entries.cols());
  double worst_plain = 0.0;
  double worst_guarded = 0.0;
  for (int nm = 0; nm < harmonic_count(ns); ++nm) {
    const HarmonicIndex idx = HarmonicIndex::from_flat(nm);
    worst_plain = std::max(worst_plain, synthesis_probe_error(t, plain.entries.col(nm), idx, 1.5));
    worst_guarded = std::max(worst_guarded, synthesis_probe_error(t, guarded.entries.col(nm), idx, 1.5));
  }
  EXPECT_LT(worst_guarded, 1e-2);
  EXPECT_LT(worst_guarded, worst_plain);
}

TEST(ModeMatching, GuardAtOrBelowOrderIsPlainSolve) {
  const WaveContext ctx(400.0);
  const TranslationMatrixT t = build_T(shell(), 4, ctx);
  const WeightMatrix a = solve_all_weights(t);
  const WeightMatrix b = solve_guarded_weights(t, 4, ctx);
  EXPECT_EQ((a.entries - b.entries).norm(), 0.0);
}

TEST(ModeMatching, ConditionNumberFiniteForShell) {
  const WaveContext ctx(700.0);
  const TranslationMatrixT t = build_T(shell(), truncation_order(ctx.wavenumber(), 0.4), ctx);
  const double kappa = condition_number(t);
  EXPECT_TRUE(std::isfinite(kappa));
  EXPECT_GE(kappa, 1.0);
}

TEST(ModeMatching, ProbeErrorValidatesLength) {
  const TranslationMatrixT t = build_T(shell(), 2, WaveContext(200.0));
  EXPECT_THROW(synthesis_probe_error(t, VectorXc::Zero(5), HarmonicIndex(0, 0), 1.0), ConfigError);
}
