#include "jel/spd_form.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace jel {

SpdForm::SpdForm(const Eigen::MatrixXd& m, double rank_tolerance) {
  require(m.rows() == m.cols() && m.rows() >= 1, "SpdForm: matrix must be square");
  require(m.allFinite(), "SpdForm: entries must be finite");
  const Eigen::Index d = m.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double gap = std::abs(m(i, j) - m(j, i));
      require(gap <= 1e-12 * std::max(1.0, std::abs(m(i, j))),
              "SpdForm: matrix is not symmetric");
    }
  }
  matrix_ = 0.5 * (m + m.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix_);
  if (es.info() != Eigen::Success) throw numeric_error("SpdForm: eigendecomposition failed");

  // Eigen returns increasing eigenvalues; store nonincreasing.
  eigenvalues_ = es.eigenvalues().reverse();
  eigenvectors_ = es.eigenvectors().rowwise().reverse();

  rank_tolerance_ =
      rank_tolerance > 0 ? rank_tolerance
                         : static_cast<double>(d) * std::numeric_limits<double>::epsilon();
  const double lmax = std::max(eigenvalues_[0], 0.0);
  cutoff_ = rank_tolerance_ * lmax;

  for (Eigen::Index j = 0; j < d; ++j) {
    if (eigenvalues_[j] < -cutoff_)
      throw invalid_input("SpdForm: matrix has a negative eigenvalue beyond tolerance");
    if (eigenvalues_[j] <= cutoff_) eigenvalues_[j] = 0.0;
  }
  rank_ = (eigenvalues_.array() > 0.0).count();
}

double SpdForm::quad_form_pinv(const Vec& a) const {
  require(a.size() == dim(), "quad_form_pinv: dimension mismatch");
  const Vec z = eigenvectors_.transpose() * a;
  double out = 0.0;
  for (Eigen::Index j = 0; j < rank_; ++j) out += z[j] * z[j] / eigenvalues_[j];
  return out;
}

Eigen::MatrixXd SpdForm::inv_sqrt_apply(const Eigen::MatrixXd& g) const {
  require(g.rows() == dim(), "inv_sqrt_apply: dimension mismatch");
  Vec scale = Vec::Zero(dim());
  for (Eigen::Index j = 0; j < rank_; ++j) scale[j] = 1.0 / std::sqrt(eigenvalues_[j]);
  return eigenvectors_ * (scale.asDiagonal() * (eigenvectors_.transpose() * g));
}

const Eigen::MatrixXd& SpdForm::pinv() const {
  if (pinv_.size() == 0) {
    Vec inv = Vec::Zero(dim());
    for (Eigen::Index j = 0; j < rank_; ++j) inv[j] = 1.0 / eigenvalues_[j];
    pinv_ = eigenvectors_ * inv.asDiagonal() * eigenvectors_.transpose();
  }
  return pinv_;
}

const Eigen::MatrixXd& SpdForm::inv_sqrt() const {
  if (inv_sqrt_.size() == 0) {
    Vec inv = Vec::Zero(dim());
    for (Eigen::Index j = 0; j < rank_; ++j) inv[j] = 1.0 / std::sqrt(eigenvalues_[j]);
    inv_sqrt_ = eigenvectors_ * inv.asDiagonal() * eigenvectors_.transpose();
  }
  return inv_sqrt_;
}

double SpdForm::logdet() const {
  if (!full_rank()) throw numeric_error("logdet: form is rank deficient");
  double out = 0.0;
  for (Eigen::Index j = 0; j < dim(); ++j) out += std::log(eigenvalues_[j]);
  return out;
}

double SpdForm::reconstruction_error() const {
  const Eigen::MatrixXd rebuilt =
      eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.transpose();
  const double ref = matrix_.norm();
  return ref > 0 ? (rebuilt - matrix_).norm() / ref : (rebuilt - matrix_).norm();
}

}  // namespace jel
