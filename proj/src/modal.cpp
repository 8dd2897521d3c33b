#include "modalrtf/modal.hpp"

#include <cmath>
#include <string>

namespace modalrtf {

namespace {

// Absorbs rounding when k e R / 2 lands on an integer by construction
// (e.g. a mic radius designed as A c / (pi e f_max)).
constexpr Real kOrderRoundingSlack = 1e-9;

}  // namespace

WaveContext::WaveContext(Real frequency, Real sound_speed)
    : frequency_(frequency),
      sound_speed_(sound_speed),
      wavenumber_(2.0 * kPi * frequency / sound_speed) {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw DomainError("frequency must be positive and finite");
  }
  if (!(sound_speed > 0.0) || !std::isfinite(sound_speed)) {
    throw DomainError("sound speed must be positive and finite");
  }
}

CoefficientVector::CoefficientVector(int order, VectorXc values)
    : max_order(order), entries(std::move(values)) {
  if (entries.size() != harmonic_count(order)) {
    throw ConfigError("coefficient vector length must be (N+1)^2");
  }
}

CoefficientVector operator+(const CoefficientVector& a, const CoefficientVector& b) {
  if (a.max_order != b.max_order) throw ConfigError("coefficient order mismatch");
  return CoefficientVector(a.max_order, a.entries + b.entries);
}

int truncation_order(Real wavenumber, Real radius) {
  if (!(wavenumber > 0.0) || !(radius > 0.0)) {
    throw DomainError("truncation_order requires k > 0 and R > 0");
  }
  const Real x = wavenumber * kEuler * radius / 2.0;
  return static_cast<int>(std::ceil(x * (1.0 - kOrderRoundingSlack)));
}

int active_order(Real frequency, Real radius, Real sound_speed) {
  if (!(sound_speed > 0.0)) throw DomainError("active_order requires c > 0");
  if (!(frequency > 0.0) || !(radius > 0.0)) return 0;
  const Real x = kPi * frequency * kEuler * radius / sound_speed;
  return static_cast<int>(std::floor(x * (1.0 + kOrderRoundingSlack)));
}

VectorXc interior_basis(int max_order, const SphericalCoord& x, Real wavenumber) {
  const auto j = spherical_bessel_j_all(max_order, wavenumber * x.radius);
  VectorXc basis = spherical_harmonics_all(max_order, x.theta, x.phi);
  for (int n = 0; n <= max_order; ++n) {
    basis.segment(n * n, 2 * n + 1) *= j[n];
  }
  return basis;
}

VectorXc exterior_basis(int max_order, const SphericalCoord& z, Real wavenumber) {
  if (!(z.radius > 0.0)) throw DomainError("exterior field is singular at radius 0");
  const auto h = spherical_hankel_h1_all(max_order, wavenumber * z.radius);
  VectorXc basis = spherical_harmonics_all(max_order, z.theta, z.phi);
  for (int n = 0; n <= max_order; ++n) {
    basis.segment(n * n, 2 * n + 1) *= h[n];
  }
  return basis;
}

CoefficientVector point_source_outgoing_coeffs(const SphericalCoord& y_s, const WaveContext& ctx,
                                               int max_order) {
  const Real k = ctx.wavenumber();
  return CoefficientVector(max_order, (kI * k) * interior_basis(max_order, y_s, k).conjugate());
}

Complex eval_interior_field(const CoefficientVector& coeffs, const SphericalCoord& x,
                            const WaveContext& ctx) {
  return interior_basis(coeffs.max_order, x, ctx.wavenumber()).transpose() * coeffs.entries;
}

Complex eval_exterior_field(const CoefficientVector& coeffs, const SphericalCoord& z_s,
                            const WaveContext& ctx) {
  return exterior_basis(coeffs.max_order, z_s, ctx.wavenumber()).transpose() * coeffs.entries;
}

Complex greens_function(Real distance, Real wavenumber) {
  if (!(distance > 0.0)) throw DomainError("Green's function is singular at zero distance");
  return std::polar(1.0 / (4.0 * kPi * distance), wavenumber * distance);
}

Complex direct_field(const Cartesian3& x, const Cartesian3& y, const WaveContext& ctx) {
  const Real d = (x - y).norm();
  if (d == 0.0) throw DomainError("direct_field: coincident source and receiver");
  return greens_function(d, ctx.wavenumber());
}

}  // namespace modalrtf
