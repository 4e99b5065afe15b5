#include "jel/certify.hpp"

#include "jel/fixed_point.hpp"
#include "jel/leverage.hpp"

#include <cmath>

namespace jel {

Certificate certify(const DenseMatrix& a, const SpdForm& q, const WeightVector& w, double eps) {
  require(w.size() == a.rows(), "certify: weight length mismatch");
  require(q.dim() == a.cols(), "certify: dimension mismatch");
  if (!q.full_rank()) throw numeric_error("certify: quadratic form is singular");

  // max_i a_i^T Q^- a_i as squared row norms of A Q^{-1/2}.
  const Mat z = a.mat() * q.inv_sqrt();
  Certificate c;
  c.max_row_form = z.rowwise().squaredNorm().maxCoeff();
  c.weight_mass = w.sum();
  c.eps_used = eps;
  c.logdet = q.logdet();
  c.inner_ok = c.max_row_form <= Certificate::inner_gate(eps);
  c.outer_ok = c.weight_mass <= static_cast<double>(a.cols()) + Certificate::mass_tol;
  return c;
}

Certificate certify(const DenseMatrix& a, const EllipsoidResult& result, double eps) {
  return certify(a, result.quadratic, result.weights, eps);
}

SpdForm brute_force_mvee(const DenseMatrix& a, double tol, int max_iters) {
  require(tol > 0.0, "brute_force_mvee: tol must be positive");
  require(a.rows() <= 2000 && a.cols() <= 30, "brute_force_mvee: desk-scale oracle only");
  validate_solver_input(a);

  const Eigen::Index n = a.rows(), d = a.cols();
  Vec w = Vec::Constant(n, static_cast<double>(d) / static_cast<double>(n));
  for (int it = 0; it < max_iters; ++it) {
    const Vec tau = exact_leverage_scores(a, WeightVector(w));
    const double lead = w.maxCoeff();
    double res = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (w[i] > 1e-4 * lead) res = std::max(res, std::abs(tau[i] / w[i] - 1.0));
    w = tau;
    if (res <= tol) return gram(a, WeightVector(w));
  }
  throw numeric_error("brute_force_mvee: did not reach tol within max_iters");
}

double volume_gap(const SpdForm& q, const SpdForm& qstar) {
  require(q.dim() == qstar.dim(), "volume_gap: dimension mismatch");
  return 0.5 * (qstar.logdet() - q.logdet());
}

}  // namespace jel
