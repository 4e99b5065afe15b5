#pragma once

#include "jel/common.hpp"

#include <utility>

namespace jel {

/// Dense row-major n x d matrix holding the constraint rows a_i of the
/// polytope {x : |<a_i, x>| <= 1}. Entries are validated finite on
/// construction.
class DenseMatrix {
 public:
  explicit DenseMatrix(Mat m) : m_(std::move(m)) {
    require(m_.rows() >= 1 && m_.cols() >= 1, "DenseMatrix: need n >= 1 and d >= 1");
    require(m_.allFinite(), "DenseMatrix: entries must be finite");
  }

  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }
  const Mat& mat() const { return m_; }
  Vec row(Eigen::Index i) const { return m_.row(i).transpose(); }

 private:
  Mat m_;
};

/// Nonnegative per-row weights, the dual variables of the ellipsoid program.
class WeightVector {
 public:
  explicit WeightVector(Vec v) : v_(std::move(v)) {
    require(v_.size() >= 1, "WeightVector: empty");
    require(v_.allFinite(), "WeightVector: entries must be finite");
    require((v_.array() >= 0.0).all(), "WeightVector: negative weight");
  }

  static WeightVector constant(Eigen::Index n, double value) {
    return WeightVector(Vec::Constant(n, value));
  }

  Eigen::Index size() const { return v_.size(); }
  double operator[](Eigen::Index i) const { return v_[i]; }
  const Vec& values() const { return v_; }
  double sum() const { return v_.sum(); }

 private:
  Vec v_;
};

}  // namespace jel
