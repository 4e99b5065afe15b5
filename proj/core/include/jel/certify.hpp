#pragma once

#include "jel/dense_matrix.hpp"
#include "jel/spd_form.hpp"

namespace jel {

/// Self-contained containment certificate. With Q the returned quadratic
/// form and w the weights that produced it:
///   max_i a_i^T Q^- a_i <= 1 + eps   witnesses (1/sqrt(1+eps)) E_Q inside P,
///   sum_i w_i <= d                   witnesses P inside sqrt(d) E_Q,
/// where E_Q = {x : x^T Q x <= 1}. Both checks depend only on (A, Q, w),
/// never on how Q was produced.
struct Certificate {
  double max_row_form = 0.0;
  double weight_mass = 0.0;
  bool inner_ok = false;
  bool outer_ok = false;
  double eps_used = 0.0;
  double logdet = 0.0;

  bool passed() const { return inner_ok && outer_ok; }

  /// Inner tolerance: eps plus 5% slack for floating error.
  static double inner_gate(double eps) { return 1.0 + 1.05 * eps; }
  static constexpr double mass_tol = 1e-6;
};

struct EllipsoidResult;  // fixed_point.hpp

Certificate certify(const DenseMatrix& a, const EllipsoidResult& result, double eps);
Certificate certify(const DenseMatrix& a, const SpdForm& q, const WeightVector& w, double eps);

/// Desk-scale reference optimum: the exact fixed-point iteration run until
/// the support-restricted residual drops below tol. Throws on
/// non-convergence.
SpdForm brute_force_mvee(const DenseMatrix& a, double tol, int max_iters = 200000);

/// log(vol(E_Q) / vol(E_Qstar)) = (logdet(Qstar) - logdet(Q)) / 2.
double volume_gap(const SpdForm& q, const SpdForm& qstar);

}  // namespace jel
