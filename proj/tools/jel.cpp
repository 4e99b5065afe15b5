// jel: approximate John ellipsoids of symmetric polytopes {x : |Ax|_inf <= 1}
// via fixed-point leverage-score iteration, with sketched, lazy-update, and
// multi-pass streaming solvers plus self-certifying containment checks.

#include "jel/corpus.hpp"
#include "jel/io.hpp"
#include "jel/lazy.hpp"
#include "jel/report.hpp"
#include "jel/streaming.hpp"

#include "CLI11.hpp"

#include <Eigen/Core>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace jel;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void apply_thread_cap() {
  const int t = max_threads();
#ifdef _OPENMP
  omp_set_num_threads(t);
#endif
  Eigen::setNbThreads(t);
}

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << std::endl;
    return;
  }
  std::ofstream out(path);
  if (!out) throw invalid_input("cannot open output file " + path);
  out << j.dump(2) << '\n';
}

struct SolveArgs {
  std::string algo = "baseline";
  double eps = 0.25;
  std::uint64_t seed = 0;
  std::string in;
  std::string out;
  bool certify_flag = false;
  int t_override = 0;
  std::string averaging = "average";
  double theta = 0.1;
  bool paper_literal = false;
  bool sherman_morrison = false;
  bool jl_reset = false;
};

RunReport run_solve_on(const DenseMatrix& a, RowStream* stream, const SolveArgs& args,
                       const std::string& source) {
  RunReport rep;
  rep.algorithm = args.algo;
  rep.n = a.rows();
  rep.d = a.cols();
  rep.source = source;
  rep.seed = args.seed;

  const auto start = Clock::now();
  if (args.algo == "baseline" || args.algo == "sketched") {
    SolverConfig cfg;
    cfg.eps = args.eps;
    cfg.seed = args.seed;
    cfg.score_mode = args.algo == "sketched" ? ScoreMode::sketched : ScoreMode::exact;
    cfg.averaging = args.averaging == "final" ? Averaging::final : Averaging::average;
    if (args.t_override > 0) cfg.T_override = args.t_override;
    cfg.with_certificate = true;
    const EllipsoidResult r = solve_baseline(a, cfg);
    rep.wall_time_ms = ms_since(start);
    rep.iterations = r.iterations;
    rep.residuals = r.per_iteration_residuals;
    rep.certificate = r.certificate;
    rep.quadratic = r.quadratic.matrix();
    rep.weights = r.weights.values();
    rep.config = {{"eps", cfg.eps},
                  {"score_mode", args.algo == "sketched" ? "sketched" : "exact"},
                  {"averaging", args.averaging},
                  {"T", r.iterations}};
  } else if (args.algo == "lazy") {
    LazyConfig cfg;
    cfg.eps = args.eps;
    cfg.seed = args.seed;
    cfg.theta = args.theta;
    if (args.jl_reset) cfg.reset_mode = ResetMode::jl;
    cfg.with_certificate = true;
    const EllipsoidResult r = solve_lazy(a, cfg);
    rep.wall_time_ms = ms_since(start);
    rep.iterations = r.iterations;
    rep.residuals = r.per_iteration_residuals;
    rep.certificate = r.certificate;
    rep.quadratic = r.quadratic.matrix();
    rep.weights = r.weights.values();
    rep.config = {{"eps", cfg.eps},
                  {"theta", cfg.theta},
                  {"k", cfg.resolved_k()},
                  {"reset_mode", args.jl_reset ? "jl" : "exact"},
                  {"iterations", r.iterations}};
  } else if (args.algo == "streaming") {
    StreamingOptions opt;
    opt.baseline_convention = !args.paper_literal;
    opt.inverse_mode =
        args.sherman_morrison ? InverseMode::sherman_morrison : InverseMode::per_pass;
    opt.reconstruct_weights = true;
    if (args.t_override > 0) opt.T_override = args.t_override;
    MemoryRowStream fallback(a);
    RowStream& s = stream ? *stream : fallback;
    const StreamingResult r = solve_streaming(s, args.eps, args.seed, opt);
    rep.wall_time_ms = ms_since(start);
    rep.iterations = r.result.iterations;
    rep.certificate = certify(a, r.result, args.eps);
    rep.space = space_report(r.state);
    rep.quadratic = r.result.quadratic.matrix();
    rep.weights = r.result.weights.values();
    rep.config = {{"eps", args.eps},
                  {"convention", args.paper_literal ? "paper-literal" : "baseline"},
                  {"inverse_mode", args.sherman_morrison ? "sherman-morrison" : "per-pass"},
                  {"passes", r.passes},
                  {"T", r.result.iterations}};
  } else {
    throw invalid_input("unknown algorithm: " + args.algo);
  }

  if (args.certify_flag && !rep.certificate) {
    Eigen::MatrixXd qm = rep.quadratic;
    rep.certificate = certify(a, SpdForm(qm), WeightVector(rep.weights), args.eps);
  }
  return rep;
}

int cmd_solve(const SolveArgs& args) {
  DenseMatrix a = load_matrix(args.in);
  std::unique_ptr<FileRowStream> fstream;
  if (args.algo == "streaming" && format_from_path(args.in) == MatrixFormat::binary)
    fstream = std::make_unique<FileRowStream>(args.in);

  const RunReport rep = run_solve_on(a, fstream.get(), args, args.in);
  write_json(rep.to_json(), args.out);

  if (rep.certificate && !rep.certificate->passed()) {
    std::cerr << "certificate FAILED: max_row_form=" << rep.certificate->max_row_form
              << " gate=" << Certificate::inner_gate(rep.certificate->eps_used)
              << " mass=" << rep.certificate->weight_mass << "\n";
    return 1;
  }
  return 0;
}

int cmd_certify(const std::string& in, const std::string& report_path) {
  DenseMatrix a = load_matrix(in);
  std::ifstream rf(report_path);
  if (!rf) throw invalid_input("cannot open report " + report_path);
  json j;
  rf >> j;
  if (auto err = validate_report_json(j))
    throw invalid_input("report does not match schema: " + *err);
  const RunReport rep = RunReport::from_json(j);
  const double eps = rep.certificate ? rep.certificate->eps_used
                                     : rep.config.value("eps", 0.25);
  Eigen::MatrixXd qm = rep.quadratic;
  const Certificate c = certify(a, SpdForm(qm), WeightVector(rep.weights), eps);
  std::cout << certificate_to_json(c).dump(2) << std::endl;
  return c.passed() ? 0 : 1;
}

int cmd_gen(const std::string& kind, Eigen::Index n, Eigen::Index d, double scale_max,
            std::uint64_t seed, const std::string& out) {
  InstanceSpec spec;
  spec.kind = instance_kind_from_string(kind);
  spec.n = n;
  spec.d = d;
  spec.scale_max = scale_max;
  spec.seed = seed;
  save_matrix(generate(spec), out);
  return 0;
}

json bench_instance(const CorpusInstance& inst, bool all_algorithms) {
  const DenseMatrix a = materialize(inst);
  json runs = json::array();
  std::vector<std::string> algos = {"baseline"};
  if (all_algorithms) algos = {"baseline", "sketched", "lazy", "streaming"};
  for (const auto& algo : algos) {
    SolveArgs args;
    args.algo = algo;
    args.eps = inst.eps;
    args.seed = inst.seed;
    const RunReport rep =
        run_solve_on(a, nullptr, args, "generated:" + to_string(inst.kind));
    json rj = rep.to_json();
    rj["result"].erase("weights");  // keep aggregate files small
    rj["result"].erase("quadratic");
    runs.push_back(std::move(rj));
  }
  return json{{"kind", to_string(inst.kind)}, {"n", inst.n},       {"d", inst.d},
              {"eps", inst.eps},              {"seed", inst.seed}, {"runs", runs}};
}

json bench_table1(Eigen::Index n, Eigen::Index d, double eps) {
  InstanceSpec spec;
  spec.kind = InstanceKind::gaussian;
  spec.n = n;
  spec.d = d;
  spec.seed = 424242;
  const DenseMatrix a = generate(spec);

  auto t0 = Clock::now();
  SolverConfig bcfg;
  bcfg.eps = eps;
  bcfg.with_certificate = false;
  const EllipsoidResult rb = solve_baseline(a, bcfg);
  const double exact_ms = ms_since(t0);

  t0 = Clock::now();
  LazyConfig lcfg;
  lcfg.eps = eps;
  lcfg.sampling_scores = SamplingScoreMode::estimated;
  lcfg.with_certificate = false;
  const EllipsoidResult rl = solve_lazy(a, lcfg);
  const double lazy_ms = ms_since(t0);

  // batching diagnostic: one wide product vs many narrow ones
  const Eigen::Index m = 16, pieces = 16;
  const Mat wide = gaussian_matrix(d, m * pieces, 7).entries;
  t0 = Clock::now();
  const Mat once = blocked_multiply(a.mat(), wide);
  const double batched_ms = ms_since(t0);
  t0 = Clock::now();
  double sink = 0.0;
  for (Eigen::Index p = 0; p < pieces; ++p) {
    const Mat piece = blocked_multiply(a.mat(), Mat(wide.middleCols(p * m, m)));
    sink += piece(0, 0);
  }
  const double split_ms = ms_since(t0);
  (void)sink;
  (void)once;

  return json{{"n", n},
              {"d", d},
              {"eps", eps},
              {"exact_ms", exact_ms},
              {"lazy_ms", lazy_ms},
              {"lazy_leq_exact", lazy_ms <= exact_ms},
              {"exact_iterations", rb.iterations},
              {"lazy_iterations", rl.iterations},
              {"batched_product_ms", batched_ms},
              {"split_product_ms", split_ms}};
}

int cmd_bench(const std::string& suite, const std::string& out) {
  json result;
  result["suite"] = suite;
  if (suite == "smoke" || suite == "corpus") {
    const auto instances = suite == "smoke" ? smoke_corpus() : evaluation_corpus();
    json entries = json::array();
    for (const auto& inst : instances) entries.push_back(bench_instance(inst, true));
    result["instances"] = entries;
  } else if (suite == "table1") {
    result["comparison"] = bench_table1(50000, 200, 0.25);
  } else {
    throw invalid_input("unknown suite: " + suite + " (expected smoke|corpus|table1)");
  }
  write_json(result, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"approximate John ellipsoids of symmetric polytopes"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a test instance");
  std::string gen_kind = "gaussian", gen_out;
  Eigen::Index gen_n = 1000, gen_d = 10;
  double gen_scale = 1e3;
  std::uint64_t gen_seed = 0;
  gen->add_option("--kind", gen_kind, "gaussian|duplicated-identity|scaled-skew");
  gen->add_option("--n", gen_n, "rows")->required();
  gen->add_option("--d", gen_d, "columns")->required();
  gen->add_option("--scale-max", gen_scale, "scaled-skew dynamic range");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out", gen_out, "output path (.jemx/.csv/.mtx)")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance and emit a JSON report");
  SolveArgs sa;
  solve->add_option("--algo", sa.algo, "baseline|sketched|lazy|streaming");
  solve->add_option("--eps", sa.eps, "target accuracy in (0,1)");
  solve->add_option("--seed", sa.seed, "master seed");
  solve->add_option("--in", sa.in, "input matrix path")->required();
  solve->add_option("--out", sa.out, "report path ('-' for stdout)");
  solve->add_flag("--certify", sa.certify_flag, "attach a containment certificate");
  solve->add_option("--iterations", sa.t_override, "override the iteration count");
  solve->add_option("--averaging", sa.averaging, "average|final weight policy");
  solve->add_option("--theta", sa.theta, "lazy drift exponent");
  solve->add_flag("--paper-literal", sa.paper_literal,
                  "streaming: unit-weight pass 0 instead of the d/n convention");
  solve->add_flag("--sherman-morrison", sa.sherman_morrison,
                  "streaming: incremental inverse maintenance");
  solve->add_flag("--jl-reset", sa.jl_reset, "lazy: Gaussian reset instead of exact");

  // certify
  auto* cert = app.add_subcommand("certify", "re-check a report against its instance");
  std::string cert_in, cert_report;
  cert->add_option("--in", cert_in, "input matrix path")->required();
  cert->add_option("--report", cert_report, "report JSON path")->required();

  // bench
  auto* bench = app.add_subcommand("bench", "run a suite and emit aggregate JSON");
  std::string bench_suite = "smoke", bench_out;
  bench->add_option("--suite", bench_suite, "smoke|corpus|table1");
  bench->add_option("--out", bench_out, "aggregate report path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_kind, gen_n, gen_d, gen_scale, gen_seed, gen_out);
    if (solve->parsed()) return cmd_solve(sa);
    if (cert->parsed()) return cmd_certify(cert_in, cert_report);
    if (bench->parsed()) return cmd_bench(bench_suite, bench_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
