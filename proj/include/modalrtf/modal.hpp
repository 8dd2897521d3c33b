#pragma once

#include "modalrtf/geometry.hpp"
#include "modalrtf/specfun.hpp"
#include "modalrtf/types.hpp"

namespace modalrtf {

/// Frequency, sound speed and the derived wavenumber k = 2 pi f / c.
class WaveContext {
 public:
  static constexpr Real kDefaultSoundSpeed = 343.0;

  explicit WaveContext(Real frequency, Real sound_speed = kDefaultSoundSpeed);

  [[nodiscard]] Real frequency() const { return frequency_; }
  [[nodiscard]] Real sound_speed() const { return sound_speed_; }
  [[nodiscard]] Real wavenumber() const { return wavenumber_; }

 private:
  Real frequency_;
  Real sound_speed_;
  Real wavenumber_;
};

/// Modal coefficients for n <= max_order in flat (n^2 + n + m) order.
struct CoefficientVector {
  int max_order = 0;
  VectorXc entries;

  CoefficientVector() : entries(VectorXc::Zero(1)) {}
  explicit CoefficientVector(int order)
      : max_order(order), entries(VectorXc::Zero(harmonic_count(order))) {}
  CoefficientVector(int order, VectorXc values);

  [[nodiscard]] Complex& operator[](HarmonicIndex idx) { return entries[idx.flat()]; }
  [[nodiscard]] const Complex& operator[](HarmonicIndex idx) const { return entries[idx.flat()]; }
};

CoefficientVector operator+(const CoefficientVector& a, const CoefficientVector& b);

/// ceil(k e R / 2): order beyond which modes are negligible over radius R.
int truncation_order(Real wavenumber, Real radius);

/// floor(pi f e r / c): highest mode order excited at radius r.
int active_order(Real frequency, Real radius, Real sound_speed);

/// Row vector j_n(k r) Y_nm(theta, phi), n <= max_order.
VectorXc interior_basis(int max_order, const SphericalCoord& x, Real wavenumber);

/// Row vector h_n(k r) Y_nm(theta, phi), n <= max_order. Requires r > 0.
VectorXc exterior_basis(int max_order, const SphericalCoord& z, Real wavenumber);

/// Outgoing coefficients of a unit point source at y_s: i k j_n(k y) Y*_nm(y).
CoefficientVector point_source_outgoing_coeffs(const SphericalCoord& y_s, const WaveContext& ctx,
                                               int max_order);

Complex eval_interior_field(const CoefficientVector& coeffs, const SphericalCoord& x,
                            const WaveContext& ctx);

Complex eval_exterior_field(const CoefficientVector& coeffs, const SphericalCoord& z_s,
                            const WaveContext& ctx);

/// Free-space Green's function e^{ik|x-y|} / (4 pi |x-y|).
Complex direct_field(const Cartesian3& x, const Cartesian3& y, const WaveContext& ctx);

/// Same Green's function, evaluated from a precomputed distance.
Complex greens_function(Real distance, Real wavenumber);

}  // namespace modalrtf
