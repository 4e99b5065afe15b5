#pragma once

#include "jel/dense_matrix.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace jel {

enum class MatrixFormat { binary, csv, matrix_market };

/// Binary layout: magic "JEMX", u64 LE n, u64 LE d, then n*d IEEE-754
/// little-endian doubles, row-major.
inline constexpr char kBinaryMagic[4] = {'J', 'E', 'M', 'X'};

MatrixFormat format_from_path(const std::string& path);
DenseMatrix load_matrix(const std::string& path, MatrixFormat format);
DenseMatrix load_matrix(const std::string& path);  // format from extension
void save_matrix(const DenseMatrix& a, const std::string& path, MatrixFormat format);
void save_matrix(const DenseMatrix& a, const std::string& path);

enum class InstanceKind { gaussian, duplicated_identity, scaled_skew, file };

struct InstanceSpec {
  InstanceKind kind = InstanceKind::gaussian;
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  double scale_max = 1e3;  // scaled-skew only
  std::uint64_t seed = 0;
  std::optional<std::string> path;  // file kind
};

InstanceKind instance_kind_from_string(const std::string& s);
std::string to_string(InstanceKind k);

/// gaussian: i.i.d. N(0,1); duplicated-identity: ceil(n/d) copies of I_d
/// truncated to n rows; scaled-skew: gaussian with row i scaled by
/// scale_max^{i/n}; file: loaded from spec.path.
DenseMatrix generate(const InstanceSpec& spec);

}  // namespace jel
