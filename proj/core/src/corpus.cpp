#include "jel/corpus.hpp"

namespace jel {

const std::vector<CorpusInstance>& evaluation_corpus() {
  using K = InstanceKind;
  // d = 50 pairs with eps = 0.25 except at n = 500: the multi-pass solver
  // costs O(n d^2 T^2) and T doubles when eps drops to 0.1.
  static const std::vector<CorpusInstance> corpus = {
      {K::gaussian, 500, 5, 0.10, 9001},
      {K::gaussian, 500, 20, 0.10, 9002},
      {K::gaussian, 500, 50, 0.25, 9003},
      {K::gaussian, 2000, 20, 0.10, 9004},
      {K::gaussian, 2000, 50, 0.25, 9005},
      {K::gaussian, 5000, 20, 0.25, 9006},
      {K::gaussian, 5000, 50, 0.25, 9007},
      {K::gaussian, 5000, 5, 0.10, 9008},
      {K::duplicated_identity, 500, 5, 0.10, 9009},
      {K::duplicated_identity, 500, 50, 0.25, 9010},
      {K::duplicated_identity, 2000, 20, 0.10, 9011},
      {K::duplicated_identity, 5000, 50, 0.25, 9012},
      {K::duplicated_identity, 5000, 5, 0.25, 9013},
      {K::scaled_skew, 500, 5, 0.10, 9014},
      {K::scaled_skew, 500, 20, 0.25, 9015},
      {K::scaled_skew, 500, 50, 0.25, 9016},
      {K::scaled_skew, 2000, 5, 0.10, 9017},
      {K::scaled_skew, 2000, 20, 0.25, 9018},
      {K::scaled_skew, 5000, 20, 0.25, 9019},
      {K::scaled_skew, 5000, 50, 0.25, 9020},
  };
  return corpus;
}

std::vector<CorpusInstance> smoke_corpus() {
  using K = InstanceKind;
  return {{K::gaussian, 200, 5, 0.25, 71},
          {K::duplicated_identity, 100, 4, 0.25, 72},
          {K::scaled_skew, 200, 5, 0.25, 73}};
}

DenseMatrix materialize(const CorpusInstance& inst) {
  InstanceSpec spec;
  spec.kind = inst.kind;
  spec.n = inst.n;
  spec.d = inst.d;
  spec.seed = inst.seed;
  return generate(spec);
}

}  // namespace jel
