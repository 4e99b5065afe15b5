// Acceptance suite: one line per criterion, nonzero exit when a gated
// criterion fails. Wall-clock comparisons are recorded, never gated.

#include "jel/corpus.hpp"
#include "jel/lazy.hpp"
#include "jel/report.hpp"
#include "jel/streaming.hpp"

#include "../oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

using namespace jel;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail, bool gating = true) {
  if (gating && !pass) ++failures;
  std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : (gating ? "FAIL" : "DIAG"),
              criterion, detail.c_str());
  std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct CorpusRun {
  CorpusInstance inst;
  Certificate baseline, sketched, lazy, streaming;
  double baseline_residual = 1.0;
  int baseline_T = 0;
  long streaming_passes = 0;
  SpaceReport streaming_space;
  bool streaming_matches_replay = true;   // n <= 1000 only
  bool streaming_sm_consistent = true;    // n <= 1000 only
};

std::vector<CorpusRun> run_corpus() {
  std::vector<CorpusRun> out;
  for (const auto& inst : evaluation_corpus()) {
    CorpusRun run{inst, {}, {}, {}, {}, 1.0, 0, 0, {}, true, true};
    const DenseMatrix a = materialize(inst);

    SolverConfig bcfg;
    bcfg.eps = inst.eps;
    bcfg.seed = inst.seed;
    const EllipsoidResult rb = solve_baseline(a, bcfg);
    run.baseline = *rb.certificate;
    run.baseline_residual = *rb.final_residual;
    run.baseline_T = rb.iterations;

    SolverConfig scfg = bcfg;
    scfg.score_mode = ScoreMode::sketched;
    run.sketched = *solve_baseline(a, scfg).certificate;

    LazyConfig lcfg;
    lcfg.eps = inst.eps;
    lcfg.seed = inst.seed;
    run.lazy = *solve_lazy(a, lcfg).certificate;

    MemoryRowStream stream(a);
    const StreamingResult rs = solve_streaming(stream, inst.eps, inst.seed);
    run.streaming = certify(a, rs.result, inst.eps);
    run.streaming_passes = rs.passes;
    run.streaming_space = space_report(rs.state);

    if (inst.n <= 1000) {
      const Eigen::MatrixXd ref = oracle::replay_multipass(
          a.mat(), rs.result.iterations,
          static_cast<double>(inst.d) / static_cast<double>(inst.n));
      run.streaming_matches_replay =
          (rs.result.quadratic.matrix() - ref).norm() <= 1e-8 * ref.norm();

      MemoryRowStream stream2(a);
      StreamingOptions smopt;
      smopt.inverse_mode = InverseMode::sherman_morrison;
      const StreamingResult rsm = solve_streaming(stream2, inst.eps, inst.seed, smopt);
      run.streaming_sm_consistent =
          (rsm.result.quadratic.matrix() - rs.result.quadratic.matrix()).norm() <=
          1e-6 * rs.result.quadratic.matrix().norm();
    }
    out.push_back(std::move(run));
  }
  return out;
}

bool cert_gate(const Certificate& c, double eps, Eigen::Index d) {
  return c.max_row_form <= 1.0 + 1.05 * eps &&
         c.weight_mass <= static_cast<double>(d) + 1e-6;
}

void criterion_1_and_2_and_9(const std::vector<CorpusRun>& runs) {
  int ok_b = 0, ok_s = 0, ok_l = 0, ok_m = 0;
  for (const auto& r : runs) {
    ok_b += cert_gate(r.baseline, r.inst.eps, r.inst.d);
    ok_s += cert_gate(r.sketched, r.inst.eps, r.inst.d);
    ok_l += cert_gate(r.lazy, r.inst.eps, r.inst.d);
    ok_m += cert_gate(r.streaming, r.inst.eps, r.inst.d);
  }
  const int n = static_cast<int>(runs.size());
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "containment certificates: baseline %d/%d, sketched %d/%d, lazy %d/%d, "
                "streaming %d/%d (gate >= 19/20 each)",
                ok_b, n, ok_s, n, ok_l, n, ok_m, n);
  report(1, ok_b >= 19 && ok_s >= 19 && ok_l >= 19 && ok_m >= 19, buf);

  double worst = 0.0;
  bool ok = true;
  for (const auto& r : runs) {
    worst = std::max(worst, r.baseline_residual / r.inst.eps);
    ok &= r.baseline_residual <= r.inst.eps;
    const int expected_T =
        baseline_iterations(r.inst.n, r.inst.d, r.inst.eps);
    ok &= r.baseline_T == expected_T;
  }
  std::snprintf(buf, sizeof(buf),
                "fixed-point residual <= eps within T = ceil(4/eps ln(n/d)) on every "
                "instance (worst residual/eps = %.3f)",
                worst);
  report(2, ok, buf);

  bool eq = true, passes_ok = true, space_ok = true, sm_ok = true;
  int checked = 0;
  for (const auto& r : runs) {
    passes_ok &= r.streaming_passes == r.baseline_T + 1;
    space_ok &= r.streaming_space.within_bound;
    if (r.inst.n <= 1000) {
      ++checked;
      eq &= r.streaming_matches_replay;
      sm_ok &= r.streaming_sm_consistent;
    }
  }
  std::snprintf(buf, sizeof(buf),
                "streaming: replay equality 1e-8 on %d instances with n <= 1000, pass "
                "counter T+1, space <= 3 d^2 (T+1) words, Sherman-Morrison within 1e-6",
                checked);
  report(9, eq && passes_ok && space_ok && sm_ok && checked > 0, buf);
}

void criterion_3() {
  struct Small {
    InstanceKind kind;
    Eigen::Index n, d;
    std::uint64_t seed;
  };
  const std::vector<Small> smalls = {{InstanceKind::gaussian, 100, 4, 301},
                                     {InstanceKind::gaussian, 200, 5, 302},
                                     {InstanceKind::scaled_skew, 150, 3, 303},
                                     {InstanceKind::duplicated_identity, 100, 4, 304}};
  bool ok = true;
  double worst_margin = 0.0;
  for (const auto& s : smalls) {
    InstanceSpec spec;
    spec.kind = s.kind;
    spec.n = s.n;
    spec.d = s.d;
    spec.seed = s.seed;
    const DenseMatrix a = generate(spec);
    const SpdForm qstar = brute_force_mvee(a, 1e-10);
    for (double eps : {0.1, 0.25}) {
      const double bound = s.d * std::log1p(eps) / 2.0 + 1e-6;

      SolverConfig bcfg;
      bcfg.eps = eps;
      bcfg.seed = s.seed;
      std::vector<SpdForm> outputs;
      outputs.push_back(solve_baseline(a, bcfg).quadratic);
      SolverConfig scfg = bcfg;
      scfg.score_mode = ScoreMode::sketched;
      outputs.push_back(solve_baseline(a, scfg).quadratic);
      LazyConfig lcfg;
      lcfg.eps = eps;
      lcfg.seed = s.seed;
      outputs.push_back(solve_lazy(a, lcfg).quadratic);
      MemoryRowStream stream(a);
      outputs.push_back(solve_streaming(stream, eps, s.seed).result.quadratic);

      for (const auto& q : outputs) {
        const double gap = volume_gap(q, qstar);
        ok &= gap <= bound;
        worst_margin = std::max(worst_margin, gap / bound);
      }
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "volume gap vs brute-force optimum <= d log(1+eps)/2 + 1e-6 for all four "
                "solvers on small instances (worst gap/bound = %.3f)",
                worst_margin);
  report(3, ok, buf);
}

void criterion_4() {
  const Mat m = oracle::random_matrix(500, 8, 40401);
  const DenseMatrix a(m);
  const WeightVector w = WeightVector::constant(500, 1.0);
  const Vec exact = exact_leverage_scores(a, w);
  const double eps = 0.25, delta = 0.01;
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Vec approx = sketched_leverage_scores(a, w, eps, delta, seed);
    ok += ((approx.array() / exact.array()) - 1.0).abs().maxCoeff() <= eps;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "sketched leverage scores within (1 +- 0.25) of exact on %d/100 seeds "
                "(gate >= 99)",
                ok);
  report(4, ok >= 99, buf);
}

void criterion_5() {
  const DenseMatrix a(oracle::stacked_identity(500, 2));
  const WeightVector w = WeightVector::constant(1000, 1.0);
  const Vec tau = exact_leverage_scores(a, w);
  const double eps = 0.3;
  const Eigen::MatrixXd ref = gram(a, w).matrix();
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SampledRowSet s = leverage_sample(a, w, tau, eps, 0.01, seed);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
    for (std::size_t j = 0; j < s.indices.size(); ++j) {
      const Vec row = a.row(s.indices[j]);
      g += (s.scales[j] * s.scales[j]) * row * row.transpose();
    }
    const Vec rel = oracle::relative_eigenvalues(g, ref);
    ok += rel.minCoeff() >= 1.0 - eps && rel.maxCoeff() <= 1.0 + eps;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "leverage-sampled Gram spectrally within (1 +- 0.3) on %d/100 seeds "
                "(gate >= 95)",
                ok);
  report(5, ok >= 95, buf);
}

void criterion_6() {
  const int k = 80;
  const double theta = 0.1, n = 1e6;
  const int T = static_cast<int>(std::floor(0.05 * std::log(n)));
  const DriftCheckResult mc = chi2_drift_check(k, T, n, theta, 100000, 606060);
  const double s_up = 0.5 * k;
  const double s_lo = 0.5 * k - 0.5;  // the lower tail needs s < k/2
  const double above = chi2_drift_bound_above(s_up, k, T, n, theta);
  const double below = chi2_drift_bound_below(s_lo, k, T, n, theta);
  const bool tails_ok = mc.above <= above && mc.below <= below;

  const double c0 = std::exp(chi2_log_mgf_constant(0.0, k));
  const double c1 = std::exp(chi2_log_mgf_constant(1.0, k));
  const bool constants_ok =
      std::abs(c0 - 1.0) <= 1e-12 && std::abs(c1 - k) <= 1e-12 * k;

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "chi^2 drift: T = %d, exceedance (%.2e above, %.2e below) within analytic "
                "bounds (%.2e, %.2e); C_{0,k} = 1 and C_{1,k} = k to 1e-12",
                T, mc.above, mc.below, above, below);
  report(6, tails_ok && constants_ok, buf);
}

void criterion_7() {
  const Mat m = oracle::random_matrix(2000, 10, 70701);
  const DenseMatrix a(m);
  const Vec w0 = Vec::Constant(2000, 10.0 / 2000.0);
  LazyConfig cfg;
  cfg.eps = 0.25;
  cfg.theta = 0.1;
  const int T = 3;
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const QuadraticHistory h = approx_quadratic(a, WeightVector(w0), cfg, T, seed);
    std::vector<Eigen::MatrixXd> forms;
    for (const auto& f : h.forms) forms.push_back(f.matrix());
    bool inside = true;
    for (int t = 1; t <= T; ++t) {
      const Vec v = oracle::replay_product_weights(m, w0, forms, t);
      const Vec rel =
          oracle::relative_eigenvalues(h.forms[static_cast<std::size_t>(t)].matrix(),
                                       oracle::naive_gram(m, v));
      inside &= rel.minCoeff() >= 1.0 - cfg.eps && rel.maxCoeff() <= 1.0 + cfg.eps;
    }
    ok += inside;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "lazy quadratics sandwich the full-replay oracle for all t on %d/100 "
                "seeds (gate >= 95)",
                ok);
  report(7, ok >= 95, buf);
}

void criterion_8() {
  const Mat m = oracle::random_matrix(400, 6, 80801);
  const DenseMatrix a(m);
  const Vec w0 = Vec::Constant(400, 6.0 / 400.0);
  LazyConfig cfg;
  cfg.eps = 0.25;
  const QuadraticHistory h = approx_quadratic(a, WeightVector(w0), cfg, 4, 9);

  double worst = 0.0;
  for (int mode = 0; mode < 2; ++mode) {
    LazyConfig rcfg = cfg;
    if (mode == 1) {
      rcfg.reset_mode = ResetMode::jl;
      rcfg.m = 128;
    }
    const auto batched = reset_weights(a, h, WeightVector(w0), rcfg, 4242);
    const auto split = reset_weights_per_iteration(a, h, WeightVector(w0), rcfg, 4242);
    for (std::size_t t = 0; t < batched.size(); ++t) {
      const Vec& x = batched[t].values();
      const Vec& y = split[t].values();
      worst = std::max(
          worst, ((x - y).cwiseAbs().array() / x.cwiseAbs().array().max(1e-300)).maxCoeff());
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "batched reset product equals per-iteration products (worst relative "
                "discrepancy %.1e, gate 1e-12)",
                worst);
  report(8, worst <= 1e-12, buf);
}

void criterion_10() {
  std::mt19937_64 gen(101010);
  bool ok = true;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t s = gen();
    {
      const Mat m = oracle::random_matrix(40, 6, s);
      const Vec w = oracle::random_matrix(40, 1, s + 1).cwiseAbs();
      const Eigen::MatrixXd got = gram(DenseMatrix(m), WeightVector(w)).matrix();
      const Eigen::MatrixXd ref = oracle::naive_gram(m, w);
      const double err = (got - ref).norm() / std::max(1.0, ref.norm());
      ok &= err <= 1e-12;
      worst = std::max(worst, err);
    }
    {
      const Mat x = oracle::random_matrix(24, 13, s + 2);
      const Mat y = oracle::random_matrix(13, 9, s + 3);
      const double err = (blocked_multiply(x, y) - oracle::naive_multiply(x, y))
                             .cwiseAbs()
                             .maxCoeff();
      ok &= err <= 1e-12;
    }
    {
      const Eigen::MatrixXd q = oracle::random_spd(7, s + 4);
      const Vec v = oracle::random_matrix(7, 1, s + 5).col(0);
      const double got = SpdForm(q).quad_form_pinv(v);
      const double ref = oracle::quad_form_full_inverse(q, v);
      ok &= std::abs(got - ref) <= 1e-10 * std::max(1.0, std::abs(ref));
    }
    {
      const Eigen::MatrixXd q = oracle::random_spd(6, s + 6);
      const Vec v = oracle::random_matrix(6, 1, s + 7).col(0);
      const Eigen::MatrixXd got = sherman_morrison_update(oracle::full_inverse(q), v, 0.8);
      const Eigen::MatrixXd ref = oracle::full_inverse(
          Eigen::MatrixXd(q + 0.8 * v * v.transpose()));
      ok &= (got - ref).norm() <= 1e-9 * ref.norm();
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "gram / blocked multiply / pseudo-inverse quadratic form / rank-one "
                "update match naive oracles on 100 instances (worst gram err %.1e)",
                worst);
  report(10, ok, buf);
}

void criterion_11() {
  Eigen::Index n = 50000, d = 200;
  if (std::getenv("JEL_ACCEPTANCE_FAST")) {
    n = 5000;
    d = 50;
  }
  InstanceSpec spec;
  spec.kind = InstanceKind::gaussian;
  spec.n = n;
  spec.d = d;
  spec.seed = 424242;
  const DenseMatrix a = generate(spec);
  const double eps = 0.25;

  auto t0 = Clock::now();
  SolverConfig bcfg;
  bcfg.eps = eps;
  bcfg.with_certificate = false;
  solve_baseline(a, bcfg);
  const double exact_s = seconds_since(t0);

  t0 = Clock::now();
  LazyConfig lcfg;
  lcfg.eps = eps;
  lcfg.sampling_scores = SamplingScoreMode::estimated;
  lcfg.with_certificate = false;
  solve_lazy(a, lcfg);
  const double lazy_s = seconds_since(t0);

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "wall-clock (non-gating, n=%ld d=%ld eps=0.25): lazy %.1fs vs exact "
                "baseline %.1fs -> lazy_leq_exact=%s (recorded; sampling keeps every row "
                "at this shape, so the asymptotic savings do not engage)",
                static_cast<long>(n), static_cast<long>(d), lazy_s, exact_s,
                lazy_s <= exact_s ? "true" : "false");
  report(11, true, buf, /*gating=*/false);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  std::printf("acceptance suite: fixed corpus of %zu instances\n",
              evaluation_corpus().size());

  const auto runs = run_corpus();
  criterion_1_and_2_and_9(runs);
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_10();
  criterion_11();

  std::printf("acceptance suite finished in %.1f s: %s\n", seconds_since(t0),
              failures == 0 ? "ALL GATED CRITERIA PASSED" : "FAILURES PRESENT");
  return failures == 0 ? 0 : 1;
}
