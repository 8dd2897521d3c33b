#pragma once

// Special functions for modal sound field work: spherical Bessel/Neumann/Hankel
// functions, orthonormal complex spherical harmonics (Condon-Shortley phase) and
// Wigner 3-j symbols. Everything here is pure and templated on the real scalar.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "modalrtf/types.hpp"

namespace modalrtf {

/// (order n, degree m) pair with |m| <= n.
struct HarmonicIndex {
  int order = 0;
  int degree = 0;

  constexpr HarmonicIndex() = default;
  constexpr HarmonicIndex(int n, int m) : order(n), degree(m) {
    if (n < 0 || m < -n || m > n) throw DomainError("HarmonicIndex requires |m| <= n");
  }

  /// Zero-based flat position n^2 + n + m.
  [[nodiscard]] constexpr int flat() const { return order * order + order + degree; }

  [[nodiscard]] static HarmonicIndex from_flat(int flat_index) {
    if (flat_index < 0) throw DomainError("negative flat harmonic index");
    int n = static_cast<int>(std::sqrt(static_cast<double>(flat_index)));
    while (n * n > flat_index) --n;
    while ((n + 1) * (n + 1) <= flat_index) ++n;
    return {n, flat_index - n * n - n};
  }

  friend constexpr bool operator==(HarmonicIndex, HarmonicIndex) = default;
};

/// Number of (n, m) pairs with n <= max_order.
[[nodiscard]] constexpr int harmonic_count(int max_order) {
  return max_order < 0 ? 0 : (max_order + 1) * (max_order + 1);
}

namespace detail {

template <typename T>
void check_finite(T x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

// Power series, used for small arguments where it converges in a few terms.
template <typename T>
T sph_bessel_series(int n, T x) {
  T lead = T(1);
  for (int i = 1; i <= n; ++i) lead *= x / T(2 * i + 1);
  const T half_x2 = x * x / T(2);
  T term = T(1);
  T sum = T(1);
  for (int k = 0; k < 200; ++k) {
    term *= -half_x2 / (T(k + 1) * T(2 * n + 2 * k + 3));
    sum += term;
    if (std::abs(term) <= std::numeric_limits<T>::epsilon() * std::abs(sum)) break;
  }
  return lead * sum;
}

}  // namespace detail

/// j_n(x) for n = 0..max_order. Upward recurrence when x >= max_order, Miller
/// downward recurrence otherwise, power series for x < 1.
template <typename T>
Eigen::Matrix<T, Eigen::Dynamic, 1> spherical_bessel_j_all(int max_order, T x) {
  if (max_order < 0) throw DomainError("spherical_bessel_j: negative order");
  detail::check_finite(x, "spherical_bessel_j");
  Eigen::Matrix<T, Eigen::Dynamic, 1> out(max_order + 1);
  T parity = T(1);
  if (x < T(0)) {
    x = -x;
    parity = T(-1);
  }
  if (x == T(0)) {
    out.setZero();
    out[0] = T(1);
    return out;
  }
  if (x < T(1)) {
    for (int n = 0; n <= max_order; ++n) out[n] = detail::sph_bessel_series(n, x);
  } else if (x >= T(max_order)) {
    const T s = std::sin(x);
    const T c = std::cos(x);
    out[0] = s / x;
    if (max_order >= 1) out[1] = s / (x * x) - c / x;
    for (int n = 1; n < max_order; ++n) out[n + 1] = T(2 * n + 1) / x * out[n] - out[n - 1];
  } else {
    const int start = max_order + 30 + static_cast<int>(std::sqrt(40.0 * max_order));
    T above = T(0);
    T current = std::numeric_limits<T>::min() * T(1e10);
    constexpr T kBig = T(1e250);
    for (int k = start; k >= 1; --k) {
      const T below = T(2 * k + 1) / x * current - above;
      above = current;
      current = below;
      if (k - 1 <= max_order) out[k - 1] = current;
      if (k <= max_order) out[k] = above;
      if (std::abs(current) > kBig) {
        current /= kBig;
        above /= kBig;
        for (int i = k - 1; i <= max_order; ++i) {
          if (i >= 0) out[i] /= kBig;
        }
      }
    }
    const T j0 = std::sin(x) / x;
    const T j1 = std::sin(x) / (x * x) - std::cos(x) / x;
    T scale;
    if (std::abs(j0) >= std::abs(j1) || max_order == 0) {
      scale = j0 / out[0];
    } else {
      scale = j1 / out[1];
    }
    out *= scale;
  }
  if (parity < T(0)) {
    for (int n = 1; n <= max_order; n += 2) out[n] = -out[n];
  }
  return out;
}

template <typename T>
T spherical_bessel_j(int n, T x) {
  return spherical_bessel_j_all(n, x)[n];
}

/// y_n(x) for n = 0..max_order by upward recurrence (stable for the dominant solution).
template <typename T>
Eigen::Matrix<T, Eigen::Dynamic, 1> spherical_bessel_y_all(int max_order, T x) {
  if (max_order < 0) throw DomainError("spherical_bessel_y: negative order");
  detail::check_finite(x, "spherical_bessel_y");
  if (!(x > T(0))) throw DomainError("spherical_bessel_y: requires x > 0");
  Eigen::Matrix<T, Eigen::Dynamic, 1> out(max_order + 1);
  const T s = std::sin(x);
  const T c = std::cos(x);
  out[0] = -c / x;
  if (max_order >= 1) out[1] = -c / (x * x) - s / x;
  for (int n = 1; n < max_order; ++n) out[n + 1] = T(2 * n + 1) / x * out[n] - out[n - 1];
  return out;
}

template <typename T>
T spherical_bessel_y(int n, T x) {
  return spherical_bessel_y_all(n, x)[n];
}

/// h_n(x) = j_n(x) + i y_n(x) for n = 0..max_order. Singular at x = 0.
template <typename T>
Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1> spherical_hankel_h1_all(int max_order, T x) {
  detail::check_finite(x, "spherical_hankel_h1");
  if (!(x > T(0))) throw DomainError("spherical_hankel_h1: requires x > 0");
  const auto j = spherical_bessel_j_all(max_order, x);
  const auto y = spherical_bessel_y_all(max_order, x);
  Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1> out(max_order + 1);
  for (int n = 0; n <= max_order; ++n) out[n] = std::complex<T>(j[n], y[n]);
  return out;
}

template <typename T>
std::complex<T> spherical_hankel_h1(int n, T x) {
  return spherical_hankel_h1_all(n, x)[n];
}

/// All Y_nm(theta, phi) for n <= max_order in flat (n^2 + n + m) order.
template <typename T>
Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1> spherical_harmonics_all(int max_order, T theta,
                                                                          T phi) {
  if (max_order < 0) throw DomainError("spherical_harmonics: negative order");
  detail::check_finite(theta, "spherical_harmonics");
  detail::check_finite(phi, "spherical_harmonics");
  Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1> out(harmonic_count(max_order));
  const T ct = std::cos(theta);
  const T st = std::sin(theta);
  const T inv4pi = T(1) / (T(4) * T(kPi));

  // Normalized associated Legendre values including sqrt((2n+1)/4pi (n-m)!/(n+m)!).
  T pmm = std::sqrt(inv4pi);
  for (int m = 0; m <= max_order; ++m) {
    if (m > 0) pmm *= -std::sqrt(T(2 * m + 1) / T(2 * m)) * st;
    const std::complex<T> phase = std::polar(T(1), T(m) * phi);
    T p_prev2 = T(0);
    T p_prev = pmm;
    for (int n = m; n <= max_order; ++n) {
      T p;
      if (n == m) {
        p = pmm;
      } else if (n == m + 1) {
        p = std::sqrt(T(2 * m + 3)) * ct * pmm;
      } else {
        const T a = std::sqrt(T(4 * n * n - 1) / T(n * n - m * m));
        const T b = std::sqrt(T((n - 1) * (n - 1) - m * m) / T(4 * (n - 1) * (n - 1) - 1));
        p = a * (ct * p_prev - b * p_prev2);
      }
      if (n > m) {
        p_prev2 = p_prev;
        p_prev = p;
      }
      const std::complex<T> y = p * phase;
      out[n * n + n + m] = y;
      if (m > 0) out[n * n + n - m] = (m % 2 == 0 ? T(1) : T(-1)) * std::conj(y);
    }
  }
  return out;
}

template <typename T>
std::complex<T> spherical_harmonic(HarmonicIndex idx, T theta, T phi) {
  return spherical_harmonics_all(idx.order, theta, phi)[idx.flat()];
}

namespace detail {

inline constexpr int kMaxLogFactorial = 512;

inline const std::array<double, kMaxLogFactorial + 1>& log_factorials() {
  static const auto table = [] {
    std::array<double, kMaxLogFactorial + 1> t{};
    long double acc = 0.0L;
    t[0] = 0.0;
    for (int i = 1; i <= kMaxLogFactorial; ++i) {
      acc += std::log(static_cast<long double>(i));
      t[i] = static_cast<double>(acc);
    }
    return t;
  }();
  return table;
}

inline double log_factorial(int n) {
  if (n < 0 || n > kMaxLogFactorial) throw DomainError("log_factorial out of range");
  return log_factorials()[n];
}

}  // namespace detail

/// Wigner 3-j symbol by the Racah single-sum formula with log-factorial terms.
/// Selection-rule violations (including |m_i| > j_i) give exactly zero.
inline double wigner_3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  if (j1 < 0 || j2 < 0 || j3 < 0) throw DomainError("wigner_3j: negative angular momentum");
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
  if (m1 + m2 + m3 != 0) return 0.0;
  if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
  if (m1 == 0 && m2 == 0 && m3 == 0 && (j1 + j2 + j3) % 2 != 0) return 0.0;

  using detail::log_factorial;
  const double log_delta = log_factorial(j1 + j2 - j3) + log_factorial(j1 - j2 + j3) +
                           log_factorial(-j1 + j2 + j3) - log_factorial(j1 + j2 + j3 + 1);
  const double log_m = log_factorial(j1 + m1) + log_factorial(j1 - m1) + log_factorial(j2 + m2) +
                       log_factorial(j2 - m2) + log_factorial(j3 + m3) + log_factorial(j3 - m3);
  const double log_pre = 0.5 * (log_delta + log_m);

  const int k_min = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int k_max = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  double sum = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const double log_den = log_factorial(k) + log_factorial(j3 - j2 + k + m1) +
                           log_factorial(j3 - j1 + k - m2) + log_factorial(j1 + j2 - j3 - k) +
                           log_factorial(j1 - k - m1) + log_factorial(j2 - k + m2);
    const double term = std::exp(log_pre - log_den);
    sum += (k % 2 == 0) ? term : -term;
  }
  const int phase_exp = j1 - j2 - m3;
  return (phase_exp % 2 == 0) ? sum : -sum;
}

}  // namespace modalrtf
