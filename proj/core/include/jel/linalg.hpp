#pragma once

#include "jel/dense_matrix.hpp"
#include "jel/spd_form.hpp"

#include <cstdint>

namespace jel {

/// d x k matrix of i.i.d. standard normals, reproducible from the seed.
struct GaussianSketch {
  Eigen::Index rows_in = 0;
  Eigen::Index cols_out = 0;
  std::uint64_t seed = 0;
  Mat entries;
};

GaussianSketch gaussian_matrix(Eigen::Index d, Eigen::Index k, std::uint64_t seed);

/// A^T diag(w) A, accumulated on the upper triangle and mirrored.
SpdForm gram(const DenseMatrix& a, const WeightVector& w, double rank_tolerance = -1.0);

/// Cache-blocked dense product A * B with a fixed panel schedule. The
/// summation order over the inner dimension depends only on block_size, so
/// the result is bitwise reproducible for a fixed block_size regardless of
/// thread count or column partitioning.
Mat blocked_multiply(const Mat& a, const Mat& b, Eigen::Index block_size = 64);

inline Mat blocked_multiply(const DenseMatrix& a, const Mat& b, Eigen::Index block_size = 64) {
  return blocked_multiply(a.mat(), b, block_size);
}

}  // namespace jel
