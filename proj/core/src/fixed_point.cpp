#include "jel/fixed_point.hpp"

#include <cmath>

namespace jel {

int baseline_iterations(Eigen::Index n, Eigen::Index d, double eps, double c) {
  return static_cast<int>(
      std::ceil(c / eps * std::log(static_cast<double>(n) / static_cast<double>(d))));
}

void validate_solver_input(const DenseMatrix& a) {
  require(a.rows() >= a.cols(), "solver: need n >= d, the polytope is unbounded otherwise");
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    require(a.mat().row(i).squaredNorm() > 0.0,
            "solver: zero row (degenerate unbounded-direction constraint)");
  const SpdForm q0 = gram(a, WeightVector::constant(a.rows(), 1.0));
  if (!q0.full_rank())
    throw invalid_input("solver: rank-deficient input, the polytope is unbounded");
}

namespace {

// Step residual between consecutive iterates over the supported rows.
double step_residual(const Vec& prev, const Vec& next, double support_rtol) {
  const double lead = prev.maxCoeff();
  double out = 0.0;
  for (Eigen::Index i = 0; i < prev.size(); ++i) {
    if (prev[i] > support_rtol * lead)
      out = std::max(out, std::abs(next[i] / prev[i] - 1.0));
  }
  return out;
}

}  // namespace

double fixed_point_residual(const DenseMatrix& a, const WeightVector& w, double support_rtol) {
  require(w.sum() > 0.0, "fixed_point_residual: all-zero weights");
  const Vec tau = exact_leverage_scores(a, w);
  return step_residual(w.values(), tau, support_rtol);
}

EllipsoidResult solve_baseline(const DenseMatrix& a, const SolverConfig& cfg) {
  require(cfg.eps > 0.0 && cfg.eps < 1.0, "solve_baseline: eps must be in (0,1)");
  if (cfg.T_override) require(*cfg.T_override >= 1, "solve_baseline: T_override must be >= 1");
  validate_solver_input(a);

  const Eigen::Index n = a.rows(), d = a.cols();
  const int T = cfg.T_override
                    ? *cfg.T_override
                    : baseline_iterations(n, d, cfg.eps, cfg.iter_constant);

  Vec w = Vec::Constant(n, static_cast<double>(d) / static_cast<double>(n));
  Vec accum = Vec::Zero(n);
  std::vector<double> residuals;
  residuals.reserve(T);

  const double sketch_eps = cfg.eps * cfg.sketch_eps_fraction;
  SketchOptions sopt;
  sopt.jl_constant = cfg.sketch_jl_constant;

  for (int t = 0; t < T; ++t) {
    Vec next;
    if (cfg.score_mode == ScoreMode::exact) {
      next = exact_leverage_scores(a, WeightVector(w));
    } else {
      next = sketched_leverage_scores(a, WeightVector(w), sketch_eps, cfg.sketch_delta,
                                      mix_seed(cfg.seed, 0xba5e, t), sopt);
    }
    residuals.push_back(step_residual(w, next, 1e-4));
    w = next;
    accum += w;
  }

  Vec out = (cfg.averaging == Averaging::average && T > 0) ? Vec(accum / T) : w;
  // Sketched scores can push the mass slightly above d; project back so the
  // outer containment witness stays valid.
  const double mass = out.sum();
  if (mass > static_cast<double>(d)) out *= static_cast<double>(d) / mass;

  EllipsoidResult res{gram(a, WeightVector(out)), WeightVector(out), T, std::move(residuals),
                      std::nullopt, std::nullopt};
  if (cfg.score_mode == ScoreMode::exact)
    res.final_residual = fixed_point_residual(a, WeightVector(w));
  if (cfg.with_certificate) res.certificate = certify(a, res, cfg.eps);
  return res;
}

}  // namespace jel
