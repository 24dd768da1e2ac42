#include "featnet/model.hpp"

#include <stdexcept>
#include <string>

namespace featnet {

namespace {

void check_ids(std::span<const FeatureId> ids, std::size_t m) {
  for (FeatureId h : ids) {
    if (h >= m) {
      throw std::domain_error("feature " + std::to_string(h) + " outside matrix of size " +
                              std::to_string(m));
    }
  }
}

}  // namespace

double score(std::span<const FeatureId> fi, std::span<const FeatureId> fj,
             const InteractionMatrix& w) {
  check_ids(fi, w.size());
  check_ids(fj, w.size());
  return w.block_sum(fi, fj);
}

double score_weighted(std::span<const WeightedFeature> zi, std::span<const WeightedFeature> zj,
                      const InteractionMatrix& w) {
  double sum = 0.0;
  for (const auto& a : zi) {
    for (const auto& b : zj) sum += a.weight * w.at(a.id, b.id) * b.weight;
  }
  return sum;
}

double link_probability(NodeId i, NodeId j, const FeatureAssignment& z,
                        const InteractionMatrix& w, const ActivationSpec& spec) {
  if (i >= z.num_nodes() || j >= z.num_nodes()) {
    throw std::domain_error("node pair (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside assignment of " + std::to_string(z.num_nodes()) + " nodes");
  }
  return activate(spec, score(z.features_of(i), z.features_of(j), w));
}

}  // namespace featnet
