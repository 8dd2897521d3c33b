#include <gtest/gtest.h>

#include <random>

#include "modalrtf/rtf.hpp"
#include "test_support.hpp"

using namespace modalrtf;

namespace {

RtfCoefficientSet make_set(double f, int ns, int nr, const MatrixXc& alpha) {
  RtfCoefficientSet set;
  set.regions.offset = Cartesian3(1.0, 1.0, 0.5);
  FrequencyCoefficients bin;
  bin.frequency = f;
  bin.source_order = ns;
  bin.receiver_order = nr;
  bin.alpha = alpha;
  set.bins.push_back(bin);
  return set;
}

}  // namespace

TEST(Reconstruction, ZeroCoefficientsLeaveDirectPath) {
  const auto set = make_set(500.0, 4, 4, MatrixXc::Zero(25, 25));
  const WaveContext ctx(500.0);
  const SphericalCoord x = to_spherical({0.1, -0.2, 0.05});
  const SphericalCoord y = to_spherical({-0.1, 0.3, 0.0});
  EXPECT_EQ(reconstruct_reverberant(set, x, y, ctx), Complex(0.0, 0.0));
  const Complex direct = direct_field(to_cartesian(x), to_cartesian(y) + set.regions.offset, ctx);
  EXPECT_NEAR(std::abs(reconstruct_rtf(set, x, y, ctx) - direct), 0.0, 1e-16);
}

TEST(Reconstruction, SingleEntryClosedForm) {
  const WaveContext ctx(800.0);
  const double k = ctx.wavenumber();
  const HarmonicIndex nm(3, -2), vmu(2, 1);
  MatrixXc alpha = MatrixXc::Zero(36, 25);
  alpha(nm.flat(), vmu.flat()) = Complex(0.5, -0.25);
  const auto set = make_set(800.0, 5, 4, alpha);
  const SphericalCoord x = to_spherical({0.1, 0.2, -0.15});
  const SphericalCoord y = to_spherical({-0.3, 0.05, 0.1});
  const Complex want = kI * k * Complex(0.5, -0.25) * spherical_bessel_j(3, k * y.radius) *
                       std::conj(spherical_harmonic(nm, y.theta, y.phi)) *
                       spherical_bessel_j(2, k * x.radius) * spherical_harmonic(vmu, x.theta, x.phi);
  EXPECT_NEAR(std::abs(reconstruct_reverberant(set, x, y, ctx) - want), 0.0, 1e-15);
}

TEST(Reconstruction, BilinearInCoefficients) {
  std::mt19937_64 rng(41);
  const WaveContext ctx(600.0);
  MatrixXc a(25, 36), b(25, 36);
  for (int c = 0; c < 36; ++c) {
    a.col(c) = fixtures::random_complex(rng, 25);
    b.col(c) = fixtures::random_complex(rng, 25);
  }
  const SphericalCoord x = to_spherical({0.2, 0.0, 0.1});
  const SphericalCoord y = to_spherical({0.0, -0.25, 0.2});
  const Complex s(2.0, -0.5);
  const Complex lhs = reconstruct_reverberant(make_set(600.0, 4, 5, a + s * b), x, y, ctx);
  const Complex rhs = reconstruct_reverberant(make_set(600.0, 4, 5, a), x, y, ctx) +
                      s * reconstruct_reverberant(make_set(600.0, 4, 5, b), x, y, ctx);
  EXPECT_LT(std::abs(lhs - rhs) / std::abs(rhs), 1e-13);
}

TEST(Reconstruction, ReceiverTruncationConverges) {
  // Decaying coefficients: dropping higher receiver orders changes less and less.
  std::mt19937_64 rng(42);
  const WaveContext ctx(900.0);
  MatrixXc alpha(100, 100);
  for (int c = 0; c < 100; ++c) alpha.col(c) = fixtures::random_complex(rng, 100);
  const auto set = make_set(900.0, 9, 9, alpha);
  const SphericalCoord x = to_spherical({0.12, -0.05, 0.1});
  const SphericalCoord y = to_spherical({0.1, 0.2, -0.3});
  const Complex full = reconstruct_reverberant(set, x, y, ctx);
  EXPECT_EQ(reconstruct_reverberant(set, x, y, ctx, 9), full);
  EXPECT_EQ(reconstruct_reverberant(set, x, y, ctx, 20), full);
  double prev = std::numeric_limits<double>::infinity();
  for (int limit = 5; limit <= 9; ++limit) {
    const double dev = std::abs(reconstruct_reverberant(set, x, y, ctx, limit) - full);
    EXPECT_LE(dev, prev);
    prev = dev;
  }
}

TEST(Reconstruction, RejectsPointsOutsideRegionsAndOffGrid) {
  const auto set = make_set(500.0, 2, 2, MatrixXc::Zero(9, 9));
  const WaveContext ctx(500.0);
  EXPECT_THROW(reconstruct_reverberant(set, to_spherical({0.5, 0, 0}), SphericalCoord{}, ctx), DomainError);
  EXPECT_THROW(reconstruct_reverberant(set, SphericalCoord{}, to_spherical({0, 0, 0.41}), ctx), DomainError);
  EXPECT_NO_THROW(reconstruct_reverberant(set, to_spherical({0.4, 0, 0}), SphericalCoord{}, ctx));
  EXPECT_THROW(reconstruct_reverberant(set, SphericalCoord{}, SphericalCoord{}, WaveContext(510.0)), DomainError);
  EXPECT_THROW((void)set.at_frequency(499.0), DomainError);
  EXPECT_EQ(set.frequencies(), std::vector<double>{500.0});
}

TEST(ErrorMetric, Examples) {
  EXPECT_DOUBLE_EQ(relative_error({1.0, kI}, {1.0, 0.0}), 0.5);
  EXPECT_DOUBLE_EQ(relative_error({2.0}, {2.0}), 0.0);
  EXPECT_DOUBLE_EQ(relative_error({Complex(3, 4)}, {0.0}), 1.0);
  EXPECT_THROW(relative_error({}, {}), DomainError);
  EXPECT_THROW(relative_error({1.0}, {1.0, 2.0}), DomainError);
  EXPECT_THROW(relative_error({0.0}, {1.0}), DomainError);
}

TEST(ErrorMetric, ScaleInvariantAndLinearInDeviation) {
  std::mt19937_64 rng(43);
  const VectorXc t = fixtures::random_complex(rng, 7);
  const VectorXc d = fixtures::random_complex(rng, 7);
  std::vector<Complex> truth(t.data(), t.data() + 7);
  std::vector<Complex> est(7), scaled_truth(7), scaled_est(7), half(7);
  const Complex s(-3.0, 1.5);
  for (int i = 0; i < 7; ++i) {
    est[i] = t[i] + d[i];
    scaled_truth[i] = s * t[i];
    scaled_est[i] = s * est[i];
    half[i] = t[i] + 0.5 * d[i];
  }
  const double e = relative_error(truth, est);
  EXPECT_NEAR(relative_error(scaled_truth, scaled_est), e, 1e-14);
  EXPECT_NEAR(relative_error(truth, half), 0.5 * e, 1e-14);
}

TEST(Probes, SevenAxisPoints) {
  const auto probes = axis_probes(0.4);
  ASSERT_EQ(probes.size(), 7u);
  EXPECT_EQ(probes[0].receiver.norm(), 0.0);
  for (std::size_t i = 1; i < 7; ++i) {
    EXPECT_DOUBLE_EQ(probes[i].receiver.norm(), 0.4);
    EXPECT_EQ(probes[i].receiver, probes[i].source);
  }
}

TEST(Sweep, ZeroCoefficientsInAnechoicRoomAreExact) {
  const RoomModel room = RoomModel::centered({6.0, 5.0, 2.5}, {0, 0, 0, 0, 0, 0}, 2);
  RtfCoefficientSet set = make_set(300.0, 3, 3, MatrixXc::Zero(16, 16));
  FrequencyCoefficients second = set.bins[0];
  second.frequency = 450.0;
  set.bins.push_back(second);
  const auto sweep = broadband_sweep(set, room, axis_probes(0.3), 2);
  ASSERT_EQ(sweep.size(), 2u);
  EXPECT_EQ(sweep[0].first, 300.0);
  EXPECT_EQ(sweep[1].first, 450.0);
  EXPECT_LT(sweep[0].second, 1e-14);
  EXPECT_LT(sweep[1].second, 1e-14);

  const RoomModel live = RoomModel::centered({6.0, 5.0, 2.5}, {0.9, 0.9, 0.9, 0.9, 0.7, 0.7}, 2);
  EXPECT_GT(broadband_sweep(set, live, axis_probes(0.3))[0].second, 0.05);
}
