#include "modalrtf/rtf.hpp"

#include <cmath>

#include <fmt/format.h>

#include "modalrtf/parallel.hpp"

namespace modalrtf {

namespace {

constexpr Real kRegionSlack = 1e-12;

}  // namespace

std::vector<Real> RtfCoefficientSet::frequencies() const {
  std::vector<Real> out;
  out.reserve(bins.size());
  for (const auto& b : bins) out.push_back(b.frequency);
  return out;
}

const FrequencyCoefficients& RtfCoefficientSet::at_frequency(Real f) const {
  for (const auto& b : bins) {
    if (std::abs(b.frequency - f) <= 1e-9 * std::max(1.0, std::abs(f))) return b;
  }
  throw DomainError(fmt::format("frequency {} Hz is not on the coefficient grid", f));
}

Complex reconstruct_reverberant(const RtfCoefficientSet& set, const SphericalCoord& x,
                                const SphericalCoord& y_s, const WaveContext& ctx,
                                int receiver_order_limit) {
  if (x.radius > set.regions.receiver_radius + kRegionSlack) {
    throw DomainError(fmt::format("receiver point at radius {} lies outside R_r = {}", x.radius,
                                  set.regions.receiver_radius));
  }
  if (y_s.radius > set.regions.source_radius + kRegionSlack) {
    throw DomainError(fmt::format("source point at radius {} lies outside R_s = {}", y_s.radius,
                                  set.regions.source_radius));
  }
  const FrequencyCoefficients& bin = set.at_frequency(ctx.frequency());
  const Real k = ctx.wavenumber();
  int receiver_order = bin.receiver_order;
  if (receiver_order_limit >= 0) receiver_order = std::min(receiver_order, receiver_order_limit);
  const VectorXc source_basis = interior_basis(bin.source_order, y_s, k).conjugate();
  const VectorXc receiver_basis = interior_basis(receiver_order, x, k);
  const Complex sum = source_basis.transpose() *
                      bin.alpha.leftCols(harmonic_count(receiver_order)) * receiver_basis;
  return kI * k * sum;
}

Complex reconstruct_rtf(const RtfCoefficientSet& set, const SphericalCoord& x,
                        const SphericalCoord& y_s, const WaveContext& ctx) {
  const Cartesian3 xg = to_cartesian(x);
  const Cartesian3 yg = to_cartesian(y_s) + set.regions.offset;
  return direct_field(xg, yg, ctx) + reconstruct_reverberant(set, x, y_s, ctx);
}

Real relative_error(const std::vector<Complex>& truth, const std::vector<Complex>& estimate) {
  if (truth.empty() || truth.size() != estimate.size()) {
    throw DomainError("relative_error needs equal, non-zero lengths");
  }
  Real num = 0.0;
  Real den = 0.0;
  for (std::size_t g = 0; g < truth.size(); ++g) {
    num += std::abs(truth[g] - estimate[g]);
    den += std::abs(truth[g]);
  }
  if (den == 0.0) throw DomainError("relative_error undefined for an all-zero reference");
  return num / den;
}

std::vector<ProbePair> axis_probes(Real radius) {
  const std::vector<Cartesian3> points{
      {0.0, 0.0, 0.0},     {-radius, 0.0, 0.0}, {radius, 0.0, 0.0}, {0.0, -radius, 0.0},
      {0.0, radius, 0.0},  {0.0, 0.0, -radius}, {0.0, 0.0, radius},
  };
  std::vector<ProbePair> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back({p, p});
  return out;
}

std::vector<std::pair<Real, Real>> broadband_sweep(const RtfCoefficientSet& set,
                                                   const RoomModel& room,
                                                   const std::vector<ProbePair>& probes,
                                                   int threads) {
  std::vector<std::pair<Real, Real>> out(set.bins.size());
  parallel_for(set.bins.size(), threads, [&](std::size_t i) {
    const WaveContext ctx(set.bins[i].frequency, set.sound_speed);
    std::vector<Complex> truth;
    std::vector<Complex> estimate;
    for (const auto& p : probes) {
      const Cartesian3 y = p.source + set.regions.offset;
      truth.push_back(rtf_oracle(room, p.receiver, y, ctx));
      estimate.push_back(reconstruct_rtf(set, to_spherical(p.receiver), to_spherical(p.source), ctx));
    }
    out[i] = {ctx.frequency(), relative_error(truth, estimate)};
  });
  return out;
}

}  // namespace modalrtf
