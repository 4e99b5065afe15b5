#include "jel/streaming.hpp"

#include "jel/io.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <cstdio>
#include <filesystem>

using namespace jel;

TEST_CASE("identity stream is a fixed point of every pass") {
  MemoryRowStream s(DenseMatrix(Mat::Identity(4, 4)));
  const StreamingResult r = solve_streaming(s, 0.25, 0);
  CHECK((r.result.quadratic.matrix() - Eigen::MatrixXd::Identity(4, 4)).norm() <= 1e-12);
  CHECK(r.passes == r.result.iterations + 1);
}

TEST_CASE("scalar stream traces through the recursion") {
  Mat m(1, 1);
  m << 2.0;
  MemoryRowStream s{DenseMatrix(m)};
  StreamingOptions opt;
  opt.T_override = 1;
  const StreamingResult r = solve_streaming(s, 0.5, 0, opt);
  // Q^(0) = 4, w^(1) = 4 * (1/4) = 1, Q^(1) = 4; average 4
  CHECK(r.result.quadratic.matrix()(0, 0) == doctest::Approx(4.0));
}

TEST_CASE("streaming output equals the in-memory replay oracle") {
  for (auto [n, d, seed] : {std::tuple{300, 6, 8001ull}, {120, 4, 8002ull}}) {
    const Mat m = oracle::random_matrix(n, d, seed);
    MemoryRowStream s{DenseMatrix(m)};
    const double eps = 0.25;
    const StreamingResult r = solve_streaming(s, eps, 0);
    const int T = baseline_iterations(n, d, eps);
    const Eigen::MatrixXd ref =
        oracle::replay_multipass(m, T, static_cast<double>(d) / static_cast<double>(n));
    CHECK((r.result.quadratic.matrix() - ref).norm() <= 1e-8 * ref.norm());
  }
}

TEST_CASE("paper-literal convention differs only in the pass-0 term") {
  const Mat m = oracle::random_matrix(80, 3, 8003);
  const int T = 7;
  StreamingOptions base;
  base.T_override = T;
  StreamingOptions literal = base;
  literal.baseline_convention = false;

  MemoryRowStream s1{DenseMatrix(m)};
  MemoryRowStream s2{DenseMatrix(m)};
  const auto r1 = solve_streaming(s1, 0.25, 0, base);
  const auto r2 = solve_streaming(s2, 0.25, 0, literal);
  const double w0 = 3.0 / 80.0;
  // literal average carries A^T A, the baseline convention carries w0 A^T A
  const Eigen::MatrixXd gap =
      (r2.result.quadratic.matrix() - r1.result.quadratic.matrix()) *
      static_cast<double>(T + 1);
  const Eigen::MatrixXd expected = (1.0 - w0) * (m.transpose() * m);
  CHECK((gap - expected).norm() <= 1e-8 * expected.norm());
}

TEST_CASE("streaming equals solve_baseline with averaging over all iterates") {
  // The product-form weights reproduce the baseline trajectory; the
  // streaming average additionally includes the t = 0 term.
  const Mat m = oracle::random_matrix(200, 5, 8004);
  const double eps = 0.25;
  MemoryRowStream s{DenseMatrix(m)};
  StreamingOptions opt;
  opt.reconstruct_weights = true;
  const StreamingResult r = solve_streaming(s, eps, 0, opt);

  const int T = baseline_iterations(200, 5, eps);
  Vec w = Vec::Constant(200, 5.0 / 200.0);
  Vec acc = w;
  for (int t = 0; t < T; ++t) {
    w = exact_leverage_scores(DenseMatrix(m), WeightVector(w));
    acc += w;
  }
  acc /= static_cast<double>(T + 1);
  CHECK((r.result.weights.values() - acc).cwiseAbs().maxCoeff() <= 1e-8);
  const Eigen::MatrixXd ref = oracle::naive_gram(m, acc);
  CHECK((r.result.quadratic.matrix() - ref).norm() <= 1e-8 * ref.norm());
}

TEST_CASE("sherman_morrison_update closed-form cases") {
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  Vec e1(2);
  e1 << 1.0, 0.0;
  const Eigen::MatrixXd up = sherman_morrison_update(id, e1, 1.0);
  CHECK(up(0, 0) == doctest::Approx(0.5));
  CHECK(up(1, 1) == doctest::Approx(1.0));
  CHECK(std::abs(up(0, 1)) <= 1e-15);

  // w = 0 leaves the inverse untouched
  const Eigen::MatrixXd same = sherman_morrison_update(id, e1, 0.0);
  CHECK((same - id).norm() == 0.0);
}

TEST_CASE("sherman_morrison_update matches full re-inversion") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Eigen::MatrixXd m = oracle::random_spd(8, seed);
    const Eigen::MatrixXd minv = oracle::full_inverse(m);
    const Vec a = oracle::random_matrix(8, 1, seed + 40).col(0);
    const double w = 0.7;
    const Eigen::MatrixXd got = sherman_morrison_update(minv, a, w);
    const Eigen::MatrixXd ref = oracle::full_inverse(m + w * a * a.transpose());
    CHECK((got - ref).norm() <= 1e-9 * ref.norm());
  }
}

TEST_CASE("sherman-morrison incremental mode matches per-pass inversion") {
  const Mat m = oracle::random_matrix(300, 6, 8005);
  const double eps = 0.25;
  MemoryRowStream s1{DenseMatrix(m)};
  MemoryRowStream s2{DenseMatrix(m)};
  StreamingOptions sm;
  sm.inverse_mode = InverseMode::sherman_morrison;
  const auto r1 = solve_streaming(s1, eps, 0);
  const auto r2 = solve_streaming(s2, eps, 0, sm);
  CHECK((r1.result.quadratic.matrix() - r2.result.quadratic.matrix()).norm() <=
        1e-6 * r1.result.quadratic.matrix().norm());
}

TEST_CASE("space meter stays within the d^2 T budget and ignores n") {
  const double eps = 0.25;
  StreamingOptions opt;
  opt.T_override = 10;
  long words_small = 0, words_large = 0;
  {
    MemoryRowStream s{DenseMatrix(oracle::random_matrix(100, 6, 8006))};
    const auto r = solve_streaming(s, eps, 0, opt);
    words_small = r.state.peak_words;
    const SpaceReport rep = space_report(r.state);
    CHECK(rep.within_bound);
    CHECK(rep.bound == 3 * 36 * 11);
  }
  {
    MemoryRowStream s{DenseMatrix(oracle::random_matrix(1000, 6, 8007))};
    const auto r = solve_streaming(s, eps, 0, opt);
    words_large = r.state.peak_words;
    CHECK(space_report(r.state).within_bound);
  }
  CHECK(words_small == words_large);  // no per-row persistent state
}

TEST_CASE("fresh state bound arithmetic") {
  PassState st;
  st.T = 4;
  st.d = 10;
  CHECK(st.word_bound() == 1500);
  CHECK(space_report(st).within_bound);
}

TEST_CASE("pass counter is T+1, plus one with weight reconstruction") {
  const Mat m = oracle::random_matrix(60, 3, 8008);
  const double eps = 0.3;
  const int T = baseline_iterations(60, 3, eps);
  {
    MemoryRowStream s{DenseMatrix(m)};
    CHECK(solve_streaming(s, eps, 0).passes == T + 1);
  }
  {
    MemoryRowStream s{DenseMatrix(m)};
    StreamingOptions opt;
    opt.reconstruct_weights = true;
    CHECK(solve_streaming(s, eps, 0, opt).passes == T + 2);
  }
}

TEST_CASE("file-backed stream round-trips the same result") {
  const Mat m = oracle::random_matrix(150, 4, 8009);
  const std::string path = "stream_roundtrip_test.jemx";
  save_matrix(DenseMatrix(m), path, MatrixFormat::binary);
  FileRowStream fs(path);
  MemoryRowStream ms{DenseMatrix(m)};
  const auto rf = solve_streaming(fs, 0.25, 0);
  const auto rm = solve_streaming(ms, 0.25, 0);
  CHECK((rf.result.quadratic.matrix() - rm.result.quadratic.matrix()).norm() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("length-inconsistent streams are rejected") {
  class LyingStream final : public RowStream {
   public:
    Eigen::Index rows() const override { return 5; }
    Eigen::Index cols() const override { return 2; }
    void start_pass() override {
      ++passes_;
      pos_ = 0;
    }
    bool next(Vec& row) override {
      const Eigen::Index limit = passes_ > 1 ? 4 : 5;  // drops a row after pass 1
      if (pos_ >= limit) return false;
      row = Vec::Zero(2);
      row[pos_ % 2] = 1.0;
      ++pos_;
      return true;
    }
    long passes_made() const override { return passes_; }

   private:
    Eigen::Index pos_ = 0;
    long passes_ = 0;
  };
  LyingStream s;
  CHECK_THROWS_AS(solve_streaming(s, 0.3, 0), numeric_error);
}

TEST_CASE("rank-deficient pass-0 accumulators are rejected") {
  Mat m(4, 3);
  m.setZero();
  m.col(0).setOnes();
  m.col(1) << 1, 2, 3, 4;
  m.col(2) = m.col(0) + m.col(1);
  MemoryRowStream s{DenseMatrix(m)};
  CHECK_THROWS_AS(solve_streaming(s, 0.3, 0), numeric_error);
}

TEST_CASE("streaming certificate via reconstructed weights") {
  const Mat m = oracle::random_matrix(400, 8, 8010);
  MemoryRowStream s{DenseMatrix(m)};
  StreamingOptions opt;
  opt.reconstruct_weights = true;
  const double eps = 0.25;
  const auto r = solve_streaming(s, eps, 0, opt);
  const Certificate c = certify(DenseMatrix(m), r.result, eps);
  CHECK(c.passed());
}
