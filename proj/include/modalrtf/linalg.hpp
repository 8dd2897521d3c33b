#pragma once

#include <limits>

#include <Eigen/SVD>

#include "modalrtf/types.hpp"

namespace modalrtf {

/// Relative singular-value cutoff used for every pseudoinverse in the library.
inline constexpr Real kPinvRelativeCutoff = 1e-10;

/// Minimum-norm least-squares operator built from an SVD. Singular values
/// below cutoff * sigma_max are discarded.
template <typename MatrixType>
class TruncatedPseudoInverse {
 public:
  using Scalar = typename MatrixType::Scalar;
  using RealVector = Eigen::Matrix<typename Eigen::NumTraits<Scalar>::Real, Eigen::Dynamic, 1>;

  explicit TruncatedPseudoInverse(const MatrixType& a, Real relative_cutoff = kPinvRelativeCutoff)
      : rows_(a.rows()), cols_(a.cols()) {
    if (a.size() == 0) {
      pinv_ = MatrixType::Zero(a.cols(), a.rows());
      return;
    }
    Eigen::BDCSVD<MatrixType> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    singular_values_ = svd.singularValues();
    const Real sigma_max = singular_values_.size() > 0 ? singular_values_[0] : 0.0;
    RealVector inv = RealVector::Zero(singular_values_.size());
    for (Eigen::Index i = 0; i < singular_values_.size(); ++i) {
      if (singular_values_[i] > relative_cutoff * sigma_max && singular_values_[i] > 0.0) {
        inv[i] = 1.0 / singular_values_[i];
        ++rank_;
      }
    }
    pinv_ = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  }

  [[nodiscard]] const MatrixType& matrix() const { return pinv_; }
  [[nodiscard]] const RealVector& singular_values() const { return singular_values_; }
  [[nodiscard]] Eigen::Index rank() const { return rank_; }

  template <typename Rhs>
  [[nodiscard]] auto solve(const Eigen::MatrixBase<Rhs>& b) const {
    return (pinv_ * b).eval();
  }

 private:
  Eigen::Index rows_;
  Eigen::Index cols_;
  MatrixType pinv_;
  RealVector singular_values_;
  Eigen::Index rank_ = 0;
};

/// sigma_max / sigma_min; +infinity when the matrix is numerically rank deficient.
template <typename Derived>
Real condition_number_2(const Eigen::MatrixBase<Derived>& a) {
  using MatrixType = typename Derived::PlainObject;
  if (a.size() == 0) return std::numeric_limits<Real>::infinity();
  Eigen::BDCSVD<MatrixType> svd(a.eval());
  const auto& s = svd.singularValues();
  const Real sigma_max = s[0];
  const Real sigma_min = s[s.size() - 1];
  const Real floor =
      sigma_max * std::numeric_limits<Real>::epsilon() * static_cast<Real>(std::max(a.rows(), a.cols()));
  if (!(sigma_max > 0.0) || sigma_min <= floor) return std::numeric_limits<Real>::infinity();
  return sigma_max / sigma_min;
}

}  // namespace modalrtf
