#include "jel/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

namespace jel {

MatrixFormat format_from_path(const std::string& path) {
  const auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == "csv") return MatrixFormat::csv;
  if (ext == "mtx" || ext == "mm") return MatrixFormat::matrix_market;
  return MatrixFormat::binary;
}

namespace {

DenseMatrix load_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("load_matrix: cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kBinaryMagic, 4) != 0)
    throw invalid_input("load_matrix: bad magic header in " + path);
  std::uint64_t n = 0, d = 0;
  in.read(reinterpret_cast<char*>(&n), 8);
  in.read(reinterpret_cast<char*>(&d), 8);
  if (!in || n == 0 || d == 0) throw invalid_input("load_matrix: malformed header in " + path);
  Mat m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(n * d * 8));
  if (!in) throw invalid_input("load_matrix: truncated data in " + path);
  return DenseMatrix(std::move(m));  // ctor rejects NaN/Inf
}

double parse_double(const std::string& tok, const std::string& path) {
  double v = 0.0;
  const char* begin = tok.data();
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    throw invalid_input("load_matrix: bad number '" + tok + "' in " + path);
  return v;
}

DenseMatrix load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("load_matrix: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(parse_double(tok, path));
    if (!rows.empty() && row.size() != rows.front().size())
      throw invalid_input("load_matrix: inconsistent row length in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw invalid_input("load_matrix: empty CSV " + path);
  Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return DenseMatrix(std::move(m));
}

DenseMatrix load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("load_matrix: cannot open " + path);
  std::string header;
  if (!std::getline(in, header) || header.rfind("%%MatrixMarket", 0) != 0)
    throw invalid_input("load_matrix: missing MatrixMarket banner in " + path);
  std::stringstream hs(header);
  std::string tag, object, fmt, field, symmetry;
  hs >> tag >> object >> fmt >> field >> symmetry;
  if (object != "matrix" || fmt != "array" || field != "real" || symmetry != "general")
    throw invalid_input("load_matrix: only 'matrix array real general' supported: " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::stringstream ds(line);
  Eigen::Index n = 0, d = 0;
  ds >> n >> d;
  if (n <= 0 || d <= 0) throw invalid_input("load_matrix: bad dimensions in " + path);
  Mat m(n, d);
  // array format stores column-major; transpose into our row-major layout
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      double v;
      if (!(in >> v)) throw invalid_input("load_matrix: truncated values in " + path);
      m(i, j) = v;
    }
  }
  return DenseMatrix(std::move(m));
}

}  // namespace

DenseMatrix load_matrix(const std::string& path, MatrixFormat format) {
  switch (format) {
    case MatrixFormat::binary: return load_binary(path);
    case MatrixFormat::csv: return load_csv(path);
    case MatrixFormat::matrix_market: return load_matrix_market(path);
  }
  throw invalid_input("load_matrix: unknown format");
}

DenseMatrix load_matrix(const std::string& path) {
  return load_matrix(path, format_from_path(path));
}

void save_matrix(const DenseMatrix& a, const std::string& path, MatrixFormat format) {
  std::ofstream out;
  if (format == MatrixFormat::binary)
    out.open(path, std::ios::binary);
  else
    out.open(path);
  if (!out) throw invalid_input("save_matrix: cannot open " + path);

  if (format == MatrixFormat::binary) {
    out.write(kBinaryMagic, 4);
    const std::uint64_t n = static_cast<std::uint64_t>(a.rows());
    const std::uint64_t d = static_cast<std::uint64_t>(a.cols());
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&d), 8);
    out.write(reinterpret_cast<const char*>(a.mat().data()),
              static_cast<std::streamsize>(n * d * 8));
  } else if (format == MatrixFormat::csv) {
    out.precision(17);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (j) out << ',';
        out << a.mat()(i, j);
      }
      out << '\n';
    }
  } else {
    out.precision(17);
    out << "%%MatrixMarket matrix array real general\n";
    out << a.rows() << ' ' << a.cols() << '\n';
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index i = 0; i < a.rows(); ++i) out << a.mat()(i, j) << '\n';
  }
  if (!out) throw numeric_error("save_matrix: write failed for " + path);
}

void save_matrix(const DenseMatrix& a, const std::string& path) {
  save_matrix(a, path, format_from_path(path));
}

InstanceKind instance_kind_from_string(const std::string& s) {
  if (s == "gaussian") return InstanceKind::gaussian;
  if (s == "duplicated-identity") return InstanceKind::duplicated_identity;
  if (s == "scaled-skew") return InstanceKind::scaled_skew;
  if (s == "file") return InstanceKind::file;
  throw invalid_input("unknown instance kind: " + s);
}

std::string to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::gaussian: return "gaussian";
    case InstanceKind::duplicated_identity: return "duplicated-identity";
    case InstanceKind::scaled_skew: return "scaled-skew";
    case InstanceKind::file: return "file";
  }
  return "?";
}

DenseMatrix generate(const InstanceSpec& spec) {
  if (spec.kind == InstanceKind::file) {
    require(spec.path.has_value(), "generate: file kind needs a path");
    return load_matrix(*spec.path);
  }
  require(spec.n >= spec.d && spec.d >= 1, "generate: need n >= d >= 1");

  if (spec.kind == InstanceKind::duplicated_identity) {
    Mat m = Mat::Zero(spec.n, spec.d);
    for (Eigen::Index i = 0; i < spec.n; ++i) m(i, i % spec.d) = 1.0;
    return DenseMatrix(std::move(m));
  }

  std::mt19937_64 gen(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat m(spec.n, spec.d);
  for (Eigen::Index i = 0; i < spec.n; ++i)
    for (Eigen::Index j = 0; j < spec.d; ++j) m(i, j) = normal(gen);

  if (spec.kind == InstanceKind::scaled_skew) {
    require(spec.scale_max > 0.0, "generate: scale_max must be positive");
    for (Eigen::Index i = 0; i < spec.n; ++i)
      m.row(i) *= std::pow(spec.scale_max,
                           static_cast<double>(i) / static_cast<double>(spec.n));
  }
  return DenseMatrix(std::move(m));
}

}  // namespace jel
