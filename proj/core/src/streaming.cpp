#include "jel/streaming.hpp"

#include "jel/io.hpp"

#include <cmath>
#include <cstring>
#include <vector>

namespace jel {

FileRowStream::FileRowStream(const std::string& path) : path_(path) {
  in_.open(path, std::ios::binary);
  if (!in_) throw invalid_input("FileRowStream: cannot open " + path);
  char magic[4];
  in_.read(magic, 4);
  if (!in_ || std::memcmp(magic, kBinaryMagic, 4) != 0)
    throw invalid_input("FileRowStream: bad magic in " + path);
  std::uint64_t n = 0, d = 0;
  in_.read(reinterpret_cast<char*>(&n), 8);
  in_.read(reinterpret_cast<char*>(&d), 8);
  if (!in_ || n == 0 || d == 0) throw invalid_input("FileRowStream: malformed header");
  n_ = static_cast<Eigen::Index>(n);
  d_ = static_cast<Eigen::Index>(d);
}

void FileRowStream::start_pass() {
  in_.clear();
  in_.seekg(20, std::ios::beg);
  pos_ = 0;
  ++passes_;
}

bool FileRowStream::next(Vec& row) {
  if (pos_ >= n_) return false;
  row.resize(d_);
  in_.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(d_ * 8));
  if (!in_) throw numeric_error("FileRowStream: truncated row data in " + path_);
  if (!row.allFinite()) throw invalid_input("FileRowStream: non-finite entry in " + path_);
  ++pos_;
  return true;
}

SpaceReport space_report(const PassState& state) {
  SpaceReport r;
  r.words_used = state.peak_words;
  r.bound = state.word_bound();
  r.within_bound = state.within_bound();
  return r;
}

Eigen::MatrixXd sherman_morrison_update(const Eigen::MatrixXd& minv, const Vec& a, double w,
                                        double tolerance) {
  require(minv.rows() == minv.cols(), "sherman_morrison_update: square matrix required");
  require(a.size() == minv.rows(), "sherman_morrison_update: dimension mismatch");
  require(w >= 0.0, "sherman_morrison_update: negative weight");
  if (w == 0.0) return minv;
  const Vec ma = minv * a;
  const double denom = 1.0 + w * a.dot(ma);
  if (denom <= tolerance)
    throw numeric_error("sherman_morrison_update: denominator below tolerance");
  return minv - (w / denom) * (ma * ma.transpose());
}

namespace {

// Incremental inverse of an accumulating sum of rank-one terms: direct
// inversion the first time the accumulator reaches full rank, rank-one
// updates afterwards. The accumulator stays current so the inverse can be
// rebuilt when an update would be numerically unsafe (a new row can dwarf
// a near-vanishing prefix by hundreds of orders of magnitude).
class RunningInverse {
 public:
  explicit RunningInverse(Eigen::Index d) : d_(d), acc_(Eigen::MatrixXd::Zero(d, d)) {}

  void add(const Vec& a, double w) {
    acc_.selfadjointView<Eigen::Upper>().rankUpdate(a, w);
    ++count_;
    if (!ready_) {
      ++since_check_;
      if (count_ >= d_ && since_check_ >= check_stride_) rebuild();
      return;
    }
    if (w == 0.0) return;
    const Vec ma = inv_.selfadjointView<Eigen::Upper>() * a;
    const double ama = a.dot(ma);
    const double denom = 1.0 + w * ama;
    if (!std::isfinite(denom) || denom <= 1e-12 || w * ama > 1e12) {
      rebuild();  // scale jump; the rank-one correction would overflow
      return;
    }
    const Vec u = std::sqrt(w / denom) * ma;
    inv_.selfadjointView<Eigen::Upper>().rankUpdate(u, -1.0);
    inv_.triangularView<Eigen::StrictlyLower>() = inv_.transpose();
  }

  bool ready() const { return ready_; }
  const Eigen::MatrixXd& inverse() const { return inv_; }

  void finalize() {
    if (!ready_) rebuild();
  }

 private:
  void rebuild() {
    since_check_ = 0;
    Eigen::MatrixXd full = acc_.selfadjointView<Eigen::Upper>();
    const SpdForm form(full);
    if (!form.full_rank()) {
      check_stride_ *= 2;  // back off while the prefix stays deficient
      return;
    }
    inv_ = form.pinv();
    ready_ = true;
  }

  Eigen::Index d_;
  Eigen::MatrixXd acc_;
  Eigen::MatrixXd inv_;
  bool ready_ = false;
  Eigen::Index count_ = 0;
  int since_check_ = 0;
  int check_stride_ = 1;
};

}  // namespace

StreamingResult solve_streaming(RowStream& stream, double eps, std::uint64_t seed,
                                const StreamingOptions& opt) {
  (void)seed;  // the recursion is deterministic; kept for interface symmetry
  require(eps > 0.0 && eps < 1.0, "solve_streaming: eps must be in (0,1)");
  const Eigen::Index n = stream.rows(), d = stream.cols();
  require(n >= d, "solve_streaming: need n >= d");

  const int T = opt.T_override ? *opt.T_override
                               : baseline_iterations(n, d, eps, opt.iter_constant);
  const double w0 = opt.baseline_convention ? static_cast<double>(d) / static_cast<double>(n)
                                            : 1.0;

  StreamingResult out{EllipsoidResult{SpdForm(Eigen::MatrixXd::Identity(1, 1)),
                                      WeightVector::constant(1, 0.0),
                                      0,
                                      {},
                                      std::nullopt,
                                      std::nullopt},
                      PassState{}, 0};
  PassState& state = out.state;
  state.T = T;
  state.d = d;

  const long dd = static_cast<long>(d) * static_cast<long>(d);
  std::vector<Eigen::MatrixXd> inverses;  // (Q^(0))^- .. (Q^(t-1))^-
  inverses.reserve(T);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);  // running sum of Q^(t)
  double mass_sum = 0.0;  // sum over t of sum_i w_i^(t)

  // Rows are buffered in panels of d so the per-row weight products run as
  // d x d matrix products; the panel is scratch of exactly d^2 reals and
  // does not count against the persistent-state meter.
  const Eigen::Index panel_rows = d;
  Mat panel(panel_rows, d);

  for (int t = 0; t <= T; ++t) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    RunningInverse incr(d);
    const bool use_sm = opt.inverse_mode == InverseMode::sherman_morrison;
    double mass = 0.0;
    Eigen::Index seen = 0;

    stream.start_pass();
    Vec row;
    bool more = true;
    while (more) {
      Eigen::Index filled = 0;
      while (filled < panel_rows && (more = stream.next(row))) panel.row(filled++) = row;
      if (filled == 0) break;
      const auto rows = panel.topRows(filled);

      Vec w = Vec::Constant(filled, w0);
      for (int tp = 0; tp < t; ++tp) {
        const Mat y = rows * inverses[tp];
        w = w.cwiseProduct((y.array() * rows.array()).rowwise().sum().matrix());
      }
      acc.selfadjointView<Eigen::Upper>().rankUpdate(
          (w.array().sqrt().matrix().asDiagonal() * rows).transpose());
      if (use_sm)
        for (Eigen::Index i = 0; i < filled; ++i) incr.add(rows.row(i).transpose(), w[i]);
      mass += w.sum();
      seen += filled;
      // Persistent words between arrivals: cached inverses, the current
      // accumulator, the running sum, plus the incremental accumulator and
      // inverse in SM mode. Scratch is O(d^2).
      state.track(static_cast<long>(inverses.size()) * dd + dd + dd + (use_sm ? 2 * dd : 0));
    }
    if (seen != n) throw numeric_error("solve_streaming: stream length changed between passes");

    Eigen::MatrixXd full = acc.selfadjointView<Eigen::Upper>();
    sum += full;
    mass_sum += mass;

    if (t < T) {
      if (use_sm) {
        incr.finalize();
        if (!incr.ready())
          throw numeric_error("solve_streaming: accumulated quadratic is rank deficient");
        inverses.push_back(incr.inverse());
      } else {
        const SpdForm form(full);
        if (!form.full_rank())
          throw numeric_error("solve_streaming: accumulated quadratic is rank deficient");
        inverses.push_back(form.pinv());
      }
      state.track(static_cast<long>(inverses.size()) * dd + dd + dd);
    }
  }

  sum /= static_cast<double>(T + 1);
  SpdForm q(sum);
  if (!q.full_rank()) throw numeric_error("solve_streaming: averaged quadratic is singular");

  // Weight reconstruction pass (certification): the averaged quadratic is
  // exactly gram(A, wbar) for wbar_i = mean_t w_i^(t).
  Vec wbar;
  if (opt.reconstruct_weights) {
    wbar.resize(n);
    stream.start_pass();
    Vec row;
    Eigen::Index i = 0;
    while (stream.next(row)) {
      double acc_w = w0;  // t = 0 term
      double w = w0;
      for (int t = 1; t <= T; ++t) {
        w *= row.dot(inverses[t - 1].selfadjointView<Eigen::Upper>() * row);
        acc_w += w;
      }
      wbar[i++] = acc_w / static_cast<double>(T + 1);
    }
  } else {
    wbar = Vec::Constant(n, mass_sum / static_cast<double>(T + 1) / static_cast<double>(n));
  }

  out.result = EllipsoidResult{std::move(q), WeightVector(wbar), T, {}, std::nullopt,
                               std::nullopt};
  out.passes = stream.passes_made();
  return out;
}

}  // namespace jel
