#pragma once

#include "jel/io.hpp"

#include <vector>

namespace jel {

/// One entry of the fixed evaluation corpus.
struct CorpusInstance {
  InstanceKind kind;
  Eigen::Index n;
  Eigen::Index d;
  double eps;
  std::uint64_t seed;
};

/// The fixed 20-instance corpus used by `jel bench --suite corpus` and the
/// acceptance suite: gaussian / duplicated-identity / scaled-skew across
/// n in {500, 2000, 5000}, d in {5, 20, 50}, eps in {0.1, 0.25}. Large-d
/// instances pair with the larger eps to keep multi-pass runs tractable.
const std::vector<CorpusInstance>& evaluation_corpus();

/// A three-instance subset for quick smoke runs.
std::vector<CorpusInstance> smoke_corpus();

DenseMatrix materialize(const CorpusInstance& inst);

}  // namespace jel
