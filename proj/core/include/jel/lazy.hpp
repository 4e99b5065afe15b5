#pragma once

#include "jel/fixed_point.hpp"

#include <cstdint>
#include <vector>

namespace jel {

enum class ResetMode {
  exact,  ///< recover weights from the quadratics themselves (no JL noise)
  jl      ///< Gaussian row-norm estimates, m columns per factor
};

enum class SamplingScoreMode {
  exact,     ///< exact leverage scores of sqrt(U) A for the row sample
  estimated  ///< JL row-norm estimates only, O(nd k) per iteration
};

struct LazyConfig {
  double eps = 0.25;
  double theta = 0.1;    ///< drift exponent; low-accuracy weights stay within n^{+-theta}
  int k = 0;             ///< chi^2 degrees of freedom per JL factor; 0 -> ceil(8/theta)
  double c = 0.1;        ///< inner-phase length constant, T <= ceil(c log2 n)
  int B = 0;             ///< blocks; 0 -> ceil(T_total / T)
  int T = 0;             ///< inner iterations per block; 0 -> min(ceil(c log2 n), T_total)
  Eigen::Index m = 0;    ///< reset JL columns; 0 -> ceil(32 (BT/eps)^2 ln(100 n B T))
  std::uint64_t seed = 0;

  ResetMode reset_mode = ResetMode::exact;
  SamplingScoreMode sampling_scores = SamplingScoreMode::exact;
  /// Oversampling factor applied to the sampling scores; 0 -> n^{2 theta}.
  double oversample_override = 0.0;
  SampleOptions sample;
  int max_sample_retries = 3;
  bool with_certificate = true;

  int resolved_k() const { return k > 0 ? k : static_cast<int>(std::ceil(8.0 / theta)); }
};

/// The per-block chain of approximate quadratics, forms[t] ~ A^T V^(t) A.
struct QuadraticHistory {
  std::vector<SpdForm> forms;          // Q~^(0) .. Q~^(T)
  std::vector<std::uint64_t> seeds;    // per-iteration sketch seeds
  // diagnostics
  std::vector<Vec> u_history;          // low-accuracy weights u^(1) .. u^(T)
  std::vector<Eigen::Index> sample_sizes;
};

/// One inner phase: per iteration, update the low-accuracy weights by a
/// k-column Gaussian row-norm estimate, draw an oversampled leverage-score
/// row sample, recover exact product weights on the sampled rows only, and
/// assemble the next quadratic from them.
QuadraticHistory approx_quadratic(const DenseMatrix& a, const WeightVector& w0,
                                  const LazyConfig& cfg, int T, std::uint64_t phase_seed);

/// Recovers the weights of every inner iteration from the stored quadratics
/// with ONE batched product A * [(Q~^(0))^{-1/2} G^(0) | ... |
/// (Q~^(T-1))^{-1/2} G^(T-1)]; returns w~^(t) for t = 1..T.
std::vector<WeightVector> reset_weights(const DenseMatrix& a, const QuadraticHistory& history,
                                        const WeightVector& w0, const LazyConfig& cfg,
                                        std::uint64_t reset_seed);

/// As above but with one product per iteration; algebraically identical,
/// used to validate the batched path.
std::vector<WeightVector> reset_weights_per_iteration(const DenseMatrix& a,
                                                      const QuadraticHistory& history,
                                                      const WeightVector& w0,
                                                      const LazyConfig& cfg,
                                                      std::uint64_t reset_seed);

/// Full solver: B blocks of {approx_quadratic, reset_weights}, chaining
/// w~^(0) <- w~^(b,T), returning the mean of all w~^(b,t).
EllipsoidResult solve_lazy(const DenseMatrix& a, const LazyConfig& cfg);

/// log E X^s for X ~ chi^2_k: C_{s,k} = 2^s Gamma(s + k/2) / Gamma(k/2),
/// in log space. Requires s > -k/2.
double chi2_log_mgf_constant(double s, int k);

/// Chernoff bound C_{s,k}^t R^{-|s|} on the tails of a product of t i.i.d.
/// chi^2_k variables, evaluated in log space. The sign of s selects the
/// tail: s > 0 bounds P{prod >= R}, s < 0 bounds P{prod <= 1/R} (the
/// lower-tail bound at parameter |s| < k/2). R > 1.
double chi2_product_bound(double s, int k, long t, double r);

struct DriftCheckResult {
  double below = 0.0;  ///< fraction of trials with product < n^-theta
  double above = 0.0;  ///< fraction with product > n^theta
  double exceedance() const { return below + above; }
};

/// Monte Carlo check of the drift band: samples products of T normalized
/// chi^2_k / k variables and reports the fraction escaping
/// [n^-theta, n^theta].
DriftCheckResult chi2_drift_check(int k, int T, double n, double theta, long trials,
                                  std::uint64_t seed);

/// Tail bounds on the normalized product prod (X_i / k) escaping
/// [n^-theta, n^theta], derived from chi2_product_bound by absorbing the
/// k^T normalization into R. s_upper/s_lower are the Chernoff parameters.
double chi2_drift_bound_above(double s, int k, long T, double n, double theta);
double chi2_drift_bound_below(double s, int k, long T, double n, double theta);

}  // namespace jel
