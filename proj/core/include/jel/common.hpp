#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace jel {

// Row-major storage throughout: the on-disk formats and the row-streaming
// code hand out contiguous rows.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXd;

// Thrown on contract violations (bad dimensions, invalid parameters,
// malformed inputs).
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a computation cannot proceed (singular where full rank is
// required, non-convergence, repeated sampling failure).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw invalid_input(msg);
}

// Thread cap for parallel kernels. JE_THREADS wins over the OpenMP default;
// results never depend on the value.
int max_threads();

// SplitMix64. Used to derive independent per-(tag, index) streams from one
// master seed so parallel loops stay deterministic.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
  std::uint64_t h = splitmix64(seed ^ 0x9e3779b97f4a7c15ULL);
  h = splitmix64(h ^ a);
  h = splitmix64(h ^ b);
  h = splitmix64(h ^ c);
  return h;
}

// Uniform double in [0, 1) from a mixed seed, stateless.
inline double uniform01(std::uint64_t mixed) {
  return static_cast<double>(splitmix64(mixed) >> 11) * 0x1.0p-53;
}

}  // namespace jel
