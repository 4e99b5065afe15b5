#pragma once

#include "jel/certify.hpp"
#include "jel/leverage.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace jel {

enum class ScoreMode { exact, sketched };
enum class Averaging { average, final };

struct SolverConfig {
  double eps = 0.25;
  std::optional<int> T_override;
  ScoreMode score_mode = ScoreMode::exact;
  std::uint64_t seed = 0;
  Averaging averaging = Averaging::average;
  bool with_certificate = true;

  /// Iteration count constant in T = ceil(iter_constant / eps * ln(n/d)).
  double iter_constant = 4.0;

  /// Per-iteration accuracy of sketched scores, as a fraction of eps. The
  /// convergence guarantee needs per-iteration scores within (1 +- eps);
  /// half of eps leaves headroom without blowing up the sketch width.
  double sketch_eps_fraction = 0.5;
  double sketch_delta = 0.01;
  /// JL constant used by the in-solver sketched calls. Far below the
  /// standalone default: the iteration averages out per-round noise, and
  /// the certificate gates the result.
  double sketch_jl_constant = 2.0;
};

struct EllipsoidResult {
  SpdForm quadratic;
  WeightVector weights;
  int iterations = 0;
  /// Support-restricted step residuals max_i |w^(t+1)_i / w^(t)_i - 1|.
  std::vector<double> per_iteration_residuals;
  std::optional<Certificate> certificate;
  /// Exact fixed-point residual of the final iterate (exact mode only).
  std::optional<double> final_residual;
};

/// Number of iterations T = ceil(c / eps * ln(n/d)).
int baseline_iterations(Eigen::Index n, Eigen::Index d, double eps, double c = 4.0);

/// Iterative solver: w^(0) = d/n, then w^(t)_i = tau_i(sqrt(W^(t-1)) A)
/// computed exactly or by the sketched pipeline. Requires full column rank
/// (a rank-deficient A leaves the polytope unbounded) and no zero rows.
EllipsoidResult solve_baseline(const DenseMatrix& a, const SolverConfig& cfg);

/// max_i |tau_i(sqrt(W) A) / w_i - 1| over numerically supported rows,
/// i.e. rows with w_i > support_rtol * max_j w_j. Rows the iteration has
/// driven orders of magnitude below the leading weight sit on the
/// complementarity branch (w_i = 0) of the optimality condition and are
/// excluded.
double fixed_point_residual(const DenseMatrix& a, const WeightVector& w,
                            double support_rtol = 1e-4);

/// Shared input validation for all solvers.
void validate_solver_input(const DenseMatrix& a);

}  // namespace jel
