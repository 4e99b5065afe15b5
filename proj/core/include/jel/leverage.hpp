#pragma once

#include "jel/linalg.hpp"

#include <cstdint>
#include <vector>

namespace jel {

/// Constants of the sketched leverage-score pipeline. The defaults target a
/// (1 +- eps) guarantee; callers that only need constant-factor estimates
/// (e.g. for oversampled row sampling) can dial them down.
struct SketchOptions {
  /// Base row count of the subspace-embedding stage; the actual count is
  /// ceil(embed_base(d, delta) / eps^2). When that exceeds n the sketch is
  /// skipped and the change of basis is computed from the full matrix.
  double embed_rows_d_factor = 16.0;
  double embed_rows_log_factor = 128.0;
  /// Column count t = ceil(jl_constant * eps^-2 * log(n / delta)).
  double jl_constant = 32.0;
  /// Overrides t when positive.
  Eigen::Index jl_cols_override = 0;
};

/// tau_i(sqrt(W) A) = w_i a_i^T (A^T W A)^- a_i for every row. Values are
/// asserted into [0, 1]; their sum equals rank(sqrt(W) A).
Vec exact_leverage_scores(const DenseMatrix& a, const WeightVector& w);

/// Sketch-based (1 +- eps) leverage scores, with success probability
/// >= 1 - delta over the seed: constant-size Gaussian subspace embedding,
/// change of basis from its factorization, then Johnson-Lindenstrauss row
/// norms of sqrt(W) A R^-1 via one blocked product.
Vec sketched_leverage_scores(const DenseMatrix& a, const WeightVector& w, double eps,
                             double delta, std::uint64_t seed,
                             const SketchOptions& opt = {});

/// Rows kept by independent Bernoulli leverage-score sampling, with the
/// 1/sqrt(p_i) rescale factors realizing the diagonal sampling matrix.
struct SampledRowSet {
  std::vector<Eigen::Index> indices;
  std::vector<double> scales;         // 1/sqrt(p_i) per kept row
  std::vector<double> probabilities;  // p_i per kept row
  double expected_size = 0.0;         // sum of p_i over all rows
};

struct SampleOptions {
  /// alpha = sampling_constant * eps^2 / log(d / delta).
  double sampling_constant = 1.0 / 16.0;
};

/// Keeps row i with probability p_i = min{1, tau_over_i / alpha}. The caller
/// guarantees tau_over_i >= tau_i(sqrt(W) A); then the sampled, rescaled
/// rows satisfy |S sqrt(W) A x|^2 = (1 +- eps) |sqrt(W) A x|^2 for all x
/// with probability >= 1 - delta.
SampledRowSet leverage_sample(const DenseMatrix& a, const WeightVector& w,
                              const Vec& tau_over, double eps, double delta,
                              std::uint64_t seed, const SampleOptions& opt = {});

}  // namespace jel
