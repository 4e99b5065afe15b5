#include "jel/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jel {

int max_threads() {
  static const int cached = [] {
    if (const char* env = std::getenv("JE_THREADS")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1) return static_cast<int>(v);
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
  }();
  return cached;
}

GaussianSketch gaussian_matrix(Eigen::Index d, Eigen::Index k, std::uint64_t seed) {
  require(d >= 1 && k >= 1, "gaussian_matrix: dimensions must be positive");
  GaussianSketch out;
  out.rows_in = d;
  out.cols_out = k;
  out.seed = seed;
  out.entries.resize(d, k);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < k; ++j) out.entries(i, j) = normal(gen);
  return out;
}

SpdForm gram(const DenseMatrix& a, const WeightVector& w, double rank_tolerance) {
  require(w.size() == a.rows(), "gram: weight length must match row count");
  const Mat scaled = w.values().array().sqrt().matrix().asDiagonal() * a.mat();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(a.cols(), a.cols());
  q.selfadjointView<Eigen::Upper>().rankUpdate(scaled.transpose());
  q.triangularView<Eigen::StrictlyLower>() = q.transpose();
  return SpdForm(q, rank_tolerance);
}

Mat blocked_multiply(const Mat& a, const Mat& b, Eigen::Index block_size) {
  require(a.cols() == b.rows(), "blocked_multiply: inner dimensions disagree");
  require(block_size >= 1, "blocked_multiply: block size must be positive");
  const Eigen::Index n = a.rows(), d = a.cols(), t = b.cols();
  Mat c = Mat::Zero(n, t);

  const Eigen::Index bs = block_size;
  // Row panels are independent; for each output entry the inner dimension is
  // consumed in ascending k0, ascending k order, so the floating-point sum is
  // identical for any thread count and any column-block phase.
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (Eigen::Index i0 = 0; i0 < n; i0 += bs) {
    const Eigen::Index imax = std::min(i0 + bs, n);
    for (Eigen::Index k0 = 0; k0 < d; k0 += bs) {
      const Eigen::Index kmax = std::min(k0 + bs, d);
      for (Eigen::Index j0 = 0; j0 < t; j0 += bs) {
        const Eigen::Index jmax = std::min(j0 + bs, t);
        for (Eigen::Index i = i0; i < imax; ++i) {
          const double* ai = a.data() + i * d;
          double* ci = c.data() + i * t;
          for (Eigen::Index k = k0; k < kmax; ++k) {
            const double aik = ai[k];
            const double* bk = b.data() + k * t;
            for (Eigen::Index j = j0; j < jmax; ++j) ci[j] += aik * bk[j];
          }
        }
      }
    }
  }
  return c;
}

}  // namespace jel
