#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace modalrtf {

using Real = double;
using Complex = std::complex<Real>;

using VectorXc = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using MatrixXc = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using Vector3 = Eigen::Matrix<Real, 3, 1>;

inline constexpr Real kPi = 3.141592653589793238462643383279502884;
inline constexpr Real kEuler = 2.718281828459045235360287471352662498;
inline constexpr Complex kI{0.0, 1.0};

/// Argument outside the domain of a mathematical function or model.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid experiment or array configuration (aliasing bounds, containment, shapes).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical step could not be carried out reliably.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace modalrtf
