#include "jel/leverage.hpp"

#include <cmath>

namespace jel {

namespace {

// Row scores of sqrt(W) A against a d x d half-inverse H: w_i |a_i^T H|^2.
Vec row_scores(const DenseMatrix& a, const WeightVector& w, const Eigen::MatrixXd& half) {
  const Mat z = a.mat() * half;
  return w.values().array() * z.rowwise().squaredNorm().array();
}

}  // namespace

Vec exact_leverage_scores(const DenseMatrix& a, const WeightVector& w) {
  require(w.size() == a.rows(), "exact_leverage_scores: weight length mismatch");
  const SpdForm q = gram(a, w);
  Vec tau = row_scores(a, w, q.inv_sqrt());
  for (Eigen::Index i = 0; i < tau.size(); ++i) {
    if (tau[i] < 0.0 || tau[i] > 1.0 + 1e-6)
      throw numeric_error("exact_leverage_scores: score escaped [0, 1]");
    tau[i] = std::min(tau[i], 1.0);
  }
  return tau;
}

Vec sketched_leverage_scores(const DenseMatrix& a, const WeightVector& w, double eps,
                             double delta, std::uint64_t seed, const SketchOptions& opt) {
  require(eps > 0.0 && eps < 1.0, "sketched_leverage_scores: eps must be in (0,1)");
  require(delta > 0.0 && delta < 1.0, "sketched_leverage_scores: delta must be in (0,1)");
  require(w.size() == a.rows(), "sketched_leverage_scores: weight length mismatch");
  const Eigen::Index n = a.rows(), d = a.cols();

  const Mat sqw_a = w.values().array().sqrt().matrix().asDiagonal() * a.mat();

  // Stage 1: subspace embedding. The row count scales with eps^-2 so the
  // change of basis carries only an eps-fraction of the error budget; once
  // the count reaches n the sketch is pointless and the exact Gram is used.
  const double base = opt.embed_rows_d_factor * static_cast<double>(d) +
                      opt.embed_rows_log_factor * std::log(1.0 / delta);
  const auto embed_rows = static_cast<Eigen::Index>(std::ceil(base / (eps * eps)));

  Eigen::MatrixXd basis_gram(d, d);
  if (embed_rows < n) {
    const GaussianSketch pi = gaussian_matrix(embed_rows, n, mix_seed(seed, 0x5eb));
    const Mat y = pi.entries * sqw_a;
    basis_gram = (y.transpose() * y) / static_cast<double>(embed_rows);
  } else {
    basis_gram = sqw_a.transpose() * sqw_a;
  }
  // Stage 2: change of basis R^-1 = (Y^T Y)^{-1/2}; pseudo-inverse covers
  // rank deficiency (scores then refer to the captured range).
  const SpdForm r(0.5 * (basis_gram + basis_gram.transpose()));

  // Stage 3+4: JL columns, one deferred product. Above a memory budget the
  // columns are consumed in chunks; the row-norm accumulation is unchanged.
  Eigen::Index t = opt.jl_cols_override;
  if (t <= 0)
    t = static_cast<Eigen::Index>(
        std::ceil(opt.jl_constant / (eps * eps) * std::log(static_cast<double>(n) / delta)));
  const GaussianSketch g = gaussian_matrix(d, t, mix_seed(seed, 0x91f));

  // Keep the product panel cache-resident: above the budget, consume the
  // columns in chunks and accumulate the squared row norms on the fly.
  constexpr Eigen::Index kEntryBudget = Eigen::Index(1) << 22;
  Vec sq = Vec::Zero(n);
  if (n * t <= kEntryBudget) {
    const Mat k = r.inv_sqrt() * g.entries;
    const Mat z = blocked_multiply(sqw_a, k);
    sq = z.rowwise().squaredNorm();
  } else {
    const Eigen::Index chunk =
        std::max<Eigen::Index>(256, (Eigen::Index(1) << 20) / std::max<Eigen::Index>(1, n));
    for (Eigen::Index c0 = 0; c0 < t; c0 += chunk) {
      const Eigen::Index width = std::min(chunk, t - c0);
      const Mat k = r.inv_sqrt() * g.entries.middleCols(c0, width);
      const Mat z = blocked_multiply(sqw_a, k);
      sq += z.rowwise().squaredNorm();
    }
  }
  return sq / static_cast<double>(t);
}

SampledRowSet leverage_sample(const DenseMatrix& a, const WeightVector& w, const Vec& tau_over,
                              double eps, double delta, std::uint64_t seed,
                              const SampleOptions& opt) {
  require(eps > 0.0 && eps < 1.0, "leverage_sample: eps must be in (0,1)");
  require(delta > 0.0 && delta < 1.0, "leverage_sample: delta must be in (0,1)");
  require(tau_over.size() == a.rows(), "leverage_sample: tau_over length mismatch");
  require(w.size() == a.rows(), "leverage_sample: weight length mismatch");
  require((tau_over.array() >= 0.0).all(), "leverage_sample: negative overestimate");

  const double alpha =
      opt.sampling_constant * eps * eps / std::log(static_cast<double>(a.cols()) / delta);

  SampledRowSet out;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double p = std::min(1.0, tau_over[i] / alpha);
    out.expected_size += p;
    if (p <= 0.0) continue;
    if (uniform01(mix_seed(seed, 0xa11, static_cast<std::uint64_t>(i))) < p) {
      out.indices.push_back(i);
      out.scales.push_back(1.0 / std::sqrt(p));
      out.probabilities.push_back(p);
    }
  }
  return out;
}

}  // namespace jel
