#pragma once

#include "jel/common.hpp"

namespace jel {

/// Symmetric positive semidefinite d x d quadratic form with a cached
/// spectral factorization. All inverse-like operations go through the
/// pseudo-inverse: eigenvalues above rank_tolerance * lambda_max are
/// inverted, the rest are treated as exact zeros.
class SpdForm {
 public:
  /// Builds the form from a symmetric matrix. Throws if the matrix is not
  /// symmetric to 1e-12 relative, or has an eigenvalue below
  /// -rank_tolerance * lambda_max.
  /// rank_tolerance <= 0 selects the default d * machine epsilon.
  explicit SpdForm(const Eigen::MatrixXd& m, double rank_tolerance = -1.0);

  Eigen::Index dim() const { return matrix_.rows(); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  /// Nonincreasing, clamped at zero below the rank cutoff.
  const Vec& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  double rank_tolerance() const { return rank_tolerance_; }

  Eigen::Index rank() const { return rank_; }
  bool full_rank() const { return rank_ == dim(); }

  /// a^T Q^- a via the spectral pseudo-inverse, always >= 0.
  double quad_form_pinv(const Vec& a) const;

  /// Q^{-1/2} G restricted to the range of Q.
  Eigen::MatrixXd inv_sqrt_apply(const Eigen::MatrixXd& G) const;

  /// Dense pseudo-inverse and inverse square root (computed on demand,
  /// then cached).
  const Eigen::MatrixXd& pinv() const;
  const Eigen::MatrixXd& inv_sqrt() const;

  /// log det of the form; requires full rank.
  double logdet() const;

  /// Frobenius-relative reconstruction error of the factorization,
  /// |V diag(lambda) V^T - M|_F / |M|_F.
  double reconstruction_error() const;

 private:
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd eigenvectors_;
  Vec eigenvalues_;
  double rank_tolerance_ = 0.0;
  double cutoff_ = 0.0;
  Eigen::Index rank_ = 0;
  mutable Eigen::MatrixXd pinv_, inv_sqrt_;  // lazy caches
};

}  // namespace jel
