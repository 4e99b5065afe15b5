#include "jel/lazy.hpp"
#include "jel/linalg.hpp"
#include "jel/streaming.hpp"

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include <random>

using namespace jel;

namespace {

Mat random_matrix(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Mat m(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = normal(gen);
  return m;
}

void BM_BlockedMultiply(benchmark::State& state) {
  const Eigen::Index n = state.range(0), d = state.range(1), t = state.range(2);
  const Mat a = random_matrix(n, d, 1);
  const Mat b = random_matrix(d, t, 2);
  for (auto _ : state) benchmark::DoNotOptimize(blocked_multiply(a, b));
  state.SetItemsProcessed(state.iterations() * n * d * t);
}
BENCHMARK(BM_BlockedMultiply)
    ->Args({2048, 128, 128})
    ->Args({8192, 128, 32})
    ->Args({8192, 256, 256});

// One wide product versus the same columns issued piecewise: the deferred
// batch reads A once instead of `pieces` times.
void BM_BatchedVsSplit(benchmark::State& state) {
  const bool batched = state.range(0) == 1;
  const Eigen::Index n = 20000, d = 128, m = 16, pieces = 16;
  const Mat a = random_matrix(n, d, 3);
  const Mat wide = random_matrix(d, m * pieces, 4);
  for (auto _ : state) {
    if (batched) {
      benchmark::DoNotOptimize(blocked_multiply(a, wide));
    } else {
      for (Eigen::Index p = 0; p < pieces; ++p)
        benchmark::DoNotOptimize(blocked_multiply(a, Mat(wide.middleCols(p * m, m))));
    }
  }
  state.SetItemsProcessed(state.iterations() * n * d * m * pieces);
}
BENCHMARK(BM_BatchedVsSplit)->Arg(1)->Arg(0);

void BM_Gram(benchmark::State& state) {
  const Eigen::Index n = state.range(0), d = state.range(1);
  const DenseMatrix a(random_matrix(n, d, 5));
  const WeightVector w = WeightVector::constant(n, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(gram(a, w));
  state.SetItemsProcessed(state.iterations() * n * d * d);
}
BENCHMARK(BM_Gram)->Args({4096, 64})->Args({16384, 128});

void BM_ExactLeverageScores(benchmark::State& state) {
  const Eigen::Index n = state.range(0), d = state.range(1);
  const DenseMatrix a(random_matrix(n, d, 6));
  const WeightVector w = WeightVector::constant(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(exact_leverage_scores(a, w));
}
BENCHMARK(BM_ExactLeverageScores)->Args({4096, 64})->Args({16384, 128});

void BM_ShermanMorrison(benchmark::State& state) {
  const Eigen::Index d = state.range(0);
  const Mat b = random_matrix(d, d, 7);
  const Eigen::MatrixXd m =
      b.transpose() * b + Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd minv = m.inverse();
  const Vec v = random_matrix(d, 1, 8).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(sherman_morrison_update(minv, v, 0.3));
  state.SetItemsProcessed(state.iterations() * d * d);
}
BENCHMARK(BM_ShermanMorrison)->Arg(64)->Arg(256);

void BM_Chi2DriftCheck(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(chi2_drift_check(80, 3, 1e6, 0.1, 10000, 42));
}
BENCHMARK(BM_Chi2DriftCheck);

}  // namespace

BENCHMARK_MAIN();
