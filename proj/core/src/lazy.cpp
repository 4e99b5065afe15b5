#include "jel/lazy.hpp"

#include <cmath>
#include <random>

namespace jel {

namespace {

// Exact product weights of the sampled rows against the quadratic chain,
// v_i = w0_i * prod_{t'=1..upto} a_i^T (Q~^(t'-1))^- a_i, evaluated as
// squared row norms of A_S (Q~)^{-1/2} so the chain runs at matrix-product
// speed.
Vec product_weights(const std::vector<SpdForm>& forms, int upto, const Mat& sampled_rows,
                    const Vec& w0_sampled) {
  Vec v = w0_sampled;
  for (int t = 0; t < upto; ++t) {
    const Mat z = sampled_rows * forms[static_cast<std::size_t>(t)].inv_sqrt();
    v = v.cwiseProduct(z.rowwise().squaredNorm());
  }
  return v;
}

SpdForm gram_from_sample(const DenseMatrix& a, const SampledRowSet& sample, const Vec& v) {
  const Eigen::Index d = a.cols();
  Mat rows(static_cast<Eigen::Index>(sample.indices.size()), d);
  for (std::size_t s = 0; s < sample.indices.size(); ++s)
    rows.row(static_cast<Eigen::Index>(s)) =
        sample.scales[s] * std::sqrt(v[static_cast<Eigen::Index>(s)]) *
        a.mat().row(sample.indices[s]);
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(d, d);
  q.selfadjointView<Eigen::Upper>().rankUpdate(rows.transpose());
  q.triangularView<Eigen::StrictlyLower>() = q.transpose();
  return SpdForm(q);
}

}  // namespace

QuadraticHistory approx_quadratic(const DenseMatrix& a, const WeightVector& w0,
                                  const LazyConfig& cfg, int T, std::uint64_t phase_seed) {
  require(T >= 0, "approx_quadratic: negative T");
  require((w0.values().array() > 0.0).all(), "approx_quadratic: w0 must be positive");
  require(cfg.theta > 0.0 && cfg.theta <= 0.25, "approx_quadratic: theta must be in (0, 1/4]");
  const Eigen::Index n = a.rows();
  const int k = cfg.resolved_k();
  require(k >= 2, "approx_quadratic: k must be >= 2");

  QuadraticHistory h;
  h.forms.push_back(gram(a, w0));
  if (!h.forms[0].full_rank())
    throw numeric_error("approx_quadratic: initial quadratic is rank deficient");

  const double oversample = cfg.oversample_override > 0.0
                                ? cfg.oversample_override
                                : std::pow(static_cast<double>(n), 2.0 * cfg.theta);
  const double sample_delta = std::min(0.01, 1.0 / static_cast<double>(n));

  Vec u = w0.values();
  for (int t = 1; t <= T; ++t) {
    // Low-accuracy weight update: k-column Gaussian row norms of
    // A (Q~^(t-1))^{-1/2}, normalized by 1/k so each factor is unbiased.
    const std::uint64_t gseed = mix_seed(phase_seed, 0x6a, t);
    h.seeds.push_back(gseed);
    const GaussianSketch g = gaussian_matrix(a.cols(), k, gseed);
    const Mat z = a.mat() * h.forms[t - 1].inv_sqrt_apply(g.entries);
    const Vec factor = z.rowwise().squaredNorm() / static_cast<double>(k);
    u = u.cwiseProduct(factor);
    h.u_history.push_back(u);

    Vec tau_hat;
    if (cfg.sampling_scores == SamplingScoreMode::exact) {
      tau_hat = exact_leverage_scores(a, WeightVector(u));
    } else {
      // u_i * (JL estimate of a_i^T (Q~^(t-1))^- a_i); the oversampling
      // factor absorbs both the chi^2 drift and this estimate's slack.
      tau_hat = u.cwiseProduct(factor).cwiseMin(1.0);
    }

    double boost = 1.0;
    SpdForm* built = nullptr;
    SpdForm candidate = h.forms[0];  // placeholder, overwritten below
    for (int attempt = 0; attempt <= cfg.max_sample_retries; ++attempt) {
      const Vec tau_over = (boost * oversample) * tau_hat;
      const SampledRowSet sample =
          leverage_sample(a, WeightVector(u), tau_over, cfg.eps, sample_delta,
                          mix_seed(phase_seed, 0x5a17, t, attempt), cfg.sample);

      // High-accuracy product weights, sampled rows only.
      const auto ns = static_cast<Eigen::Index>(sample.indices.size());
      Mat sampled_rows(ns, a.cols());
      Vec w0_sampled(ns);
      for (Eigen::Index s = 0; s < ns; ++s) {
        sampled_rows.row(s) = a.mat().row(sample.indices[static_cast<std::size_t>(s)]);
        w0_sampled[s] = w0[sample.indices[static_cast<std::size_t>(s)]];
      }
      const Vec v = ns > 0 ? product_weights(h.forms, t, sampled_rows, w0_sampled) : Vec();

      if (ns > 0) {
        candidate = gram_from_sample(a, sample, v);
        if (candidate.full_rank()) {
          built = &candidate;
          h.sample_sizes.push_back(ns);
          break;
        }
      }
      boost *= 2.0;
    }
    if (built == nullptr)
      throw numeric_error("approx_quadratic: sampled quadratic stayed rank deficient");
    h.forms.push_back(*built);
  }
  return h;
}

namespace {

Eigen::Index reset_jl_columns(const LazyConfig& cfg, Eigen::Index n, int T) {
  if (cfg.m > 0) return cfg.m;
  const int BT = (cfg.B > 0 ? cfg.B : 1) * (cfg.T > 0 ? cfg.T : T);
  const double ratio = BT / cfg.eps;
  return static_cast<Eigen::Index>(
      std::ceil(32.0 * ratio * ratio * std::log(100.0 * static_cast<double>(n) * BT)));
}

std::vector<WeightVector> weights_from_blocks(const Mat& z, const WeightVector& w0, int T,
                                              Eigen::Index width, double norm) {
  std::vector<WeightVector> out;
  out.reserve(T);
  Vec w = w0.values();
  for (int t = 0; t < T; ++t) {
    const Vec factor = z.middleCols(t * width, width).rowwise().squaredNorm() / norm;
    w = w.cwiseProduct(factor);
    out.emplace_back(w);
  }
  return out;
}

}  // namespace

std::vector<WeightVector> reset_weights(const DenseMatrix& a, const QuadraticHistory& history,
                                        const WeightVector& w0, const LazyConfig& cfg,
                                        std::uint64_t reset_seed) {
  require(!history.forms.empty(), "reset_weights: empty history");
  require(w0.size() == a.rows(), "reset_weights: weight length mismatch");
  const int T = static_cast<int>(history.forms.size()) - 1;
  if (T == 0) return {};
  const Eigen::Index d = a.cols();

  const bool jl = cfg.reset_mode == ResetMode::jl;
  const Eigen::Index width = jl ? reset_jl_columns(cfg, a.rows(), T) : d;
  require(width >= 1, "reset_weights: m must be >= 1");

  // One deferred batch product with the concatenated half-inverses.
  Mat concat(d, static_cast<Eigen::Index>(T) * width);
  for (int t = 0; t < T; ++t) {
    if (jl) {
      const GaussianSketch g = gaussian_matrix(d, width, mix_seed(reset_seed, 0x2e5e7, t));
      concat.middleCols(t * width, width) = history.forms[t].inv_sqrt_apply(g.entries);
    } else {
      concat.middleCols(t * width, width) = history.forms[t].inv_sqrt();
    }
  }
  const Mat z = blocked_multiply(a.mat(), concat);
  return weights_from_blocks(z, w0, T, width, jl ? static_cast<double>(width) : 1.0);
}

std::vector<WeightVector> reset_weights_per_iteration(const DenseMatrix& a,
                                                      const QuadraticHistory& history,
                                                      const WeightVector& w0,
                                                      const LazyConfig& cfg,
                                                      std::uint64_t reset_seed) {
  require(!history.forms.empty(), "reset_weights: empty history");
  const int T = static_cast<int>(history.forms.size()) - 1;
  if (T == 0) return {};
  const Eigen::Index d = a.cols();
  const bool jl = cfg.reset_mode == ResetMode::jl;
  const Eigen::Index width = jl ? reset_jl_columns(cfg, a.rows(), T) : d;

  std::vector<WeightVector> out;
  out.reserve(T);
  Vec w = w0.values();
  for (int t = 0; t < T; ++t) {
    Mat k(d, width);
    if (jl) {
      const GaussianSketch g = gaussian_matrix(d, width, mix_seed(reset_seed, 0x2e5e7, t));
      k = history.forms[t].inv_sqrt_apply(g.entries);
    } else {
      k = history.forms[t].inv_sqrt();
    }
    const Mat z = blocked_multiply(a.mat(), k);
    const Vec factor =
        z.rowwise().squaredNorm() / (jl ? static_cast<double>(width) : 1.0);
    w = w.cwiseProduct(factor);
    out.emplace_back(w);
  }
  return out;
}

EllipsoidResult solve_lazy(const DenseMatrix& a, const LazyConfig& cfg) {
  require(cfg.eps > 0.0 && cfg.eps < 1.0, "solve_lazy: eps must be in (0,1)");
  validate_solver_input(a);
  const Eigen::Index n = a.rows(), d = a.cols();

  const int T_total = std::max(1, baseline_iterations(n, d, cfg.eps, 4.0));
  const int phase_cap =
      std::max(1, static_cast<int>(std::ceil(cfg.c * std::log2(static_cast<double>(n)))));
  const int T = cfg.T > 0 ? cfg.T : std::min(phase_cap, T_total);
  const int B = cfg.B > 0 ? cfg.B : (T_total + T - 1) / T;
  require(B * T >= T_total, "solve_lazy: B*T below the required iteration count");

  Vec current = Vec::Constant(n, static_cast<double>(d) / static_cast<double>(n));
  Vec accum = Vec::Zero(n);
  long count = 0;
  std::vector<double> residuals;
  residuals.reserve(static_cast<std::size_t>(B) * T);

  for (int b = 0; b < B; ++b) {
    const WeightVector w0(current);
    const QuadraticHistory history =
        approx_quadratic(a, w0, cfg, T, mix_seed(cfg.seed, 0xb10c, b));
    const std::vector<WeightVector> ws =
        reset_weights(a, history, w0, cfg, mix_seed(cfg.seed, 0x2e5e, b));

    const Vec* prev = &current;
    for (const WeightVector& w : ws) {
      accum += w.values();
      ++count;
      const double lead = prev->maxCoeff();
      double r = 0.0;
      for (Eigen::Index i = 0; i < n; ++i)
        if ((*prev)[i] > 1e-4 * lead) r = std::max(r, std::abs(w[i] / (*prev)[i] - 1.0));
      residuals.push_back(r);
      prev = &w.values();
    }
    // Product weights of rows far off the support underflow to exact zero;
    // floor them at a relative epsilon so the next block's positivity
    // precondition holds. 250 orders below the leading weight is inert.
    current = ws.back().values().cwiseMax(1e-250 * ws.back().values().maxCoeff());
  }

  Vec wbar = accum / static_cast<double>(count);
  const double mass = wbar.sum();
  if (mass > static_cast<double>(d)) wbar *= static_cast<double>(d) / mass;

  EllipsoidResult res{gram(a, WeightVector(wbar)), WeightVector(wbar), B * T,
                      std::move(residuals), std::nullopt, std::nullopt};
  if (cfg.with_certificate) res.certificate = certify(a, res, cfg.eps);
  return res;
}

double chi2_log_mgf_constant(double s, int k) {
  require(k >= 1, "chi2 bound: k must be >= 1");
  require(s > -0.5 * k, "chi2 bound: s out of range (need s > -k/2)");
  return s * std::log(2.0) + std::lgamma(s + 0.5 * k) - std::lgamma(0.5 * k);
}

double chi2_product_bound(double s, int k, long t, double r) {
  require(t >= 0, "chi2_product_bound: negative t");
  require(r > 1.0, "chi2_product_bound: need R > 1");
  const double log_c = chi2_log_mgf_constant(s, k);
  return std::exp(static_cast<double>(t) * log_c - std::abs(s) * std::log(r));
}

double chi2_drift_bound_above(double s, int k, long T, double n, double theta) {
  require(s > 0.0, "drift bound: s must be positive");
  // P{prod X_i/k >= n^theta} = P{prod X_i >= n^theta k^T}
  const double log_c = chi2_log_mgf_constant(s, k) - s * std::log(static_cast<double>(k));
  return std::exp(static_cast<double>(T) * log_c - s * theta * std::log(n));
}

double chi2_drift_bound_below(double s, int k, long T, double n, double theta) {
  require(s > 0.0 && s < 0.5 * k, "drift bound: need s in (0, k/2)");
  const double log_c = chi2_log_mgf_constant(-s, k) + s * std::log(static_cast<double>(k));
  return std::exp(static_cast<double>(T) * log_c - s * theta * std::log(n));
}

DriftCheckResult chi2_drift_check(int k, int T, double n, double theta, long trials,
                                  std::uint64_t seed) {
  require(k >= 1 && T >= 0 && trials >= 1, "chi2_drift_check: bad parameters");
  std::mt19937_64 gen(seed);
  std::chi_squared_distribution<double> chi2(k);
  const double lo = std::pow(n, -theta), hi = std::pow(n, theta);
  long below = 0, above = 0;
  for (long trial = 0; trial < trials; ++trial) {
    double prod = 1.0;
    for (int t = 0; t < T; ++t) prod *= chi2(gen) / static_cast<double>(k);
    if (prod < lo) ++below;
    if (prod > hi) ++above;
  }
  DriftCheckResult out;
  out.below = static_cast<double>(below) / static_cast<double>(trials);
  out.above = static_cast<double>(above) / static_cast<double>(trials);
  return out;
}

}  // namespace jel
