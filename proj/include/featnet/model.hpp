#pragma once

#include <span>

#include "featnet/activation.hpp"
#include "featnet/features.hpp"
#include "featnet/interaction_matrix.hpp"

namespace featnet {

// Sum over h in fi, k in fj of W[h][k]: the argument of the activation.
// Throws std::domain_error if any id is >= w.size().
double score(std::span<const FeatureId> fi, std::span<const FeatureId> fj,
             const InteractionMatrix& w);

// Sum of z_ih * W[h][k] * z_jk over the listed entries.
double score_weighted(std::span<const WeightedFeature> zi, std::span<const WeightedFeature> zj,
                      const InteractionMatrix& w);

// P((i, j) in A) = activate(spec, score(F_i, F_j, W)).
double link_probability(NodeId i, NodeId j, const FeatureAssignment& z,
                        const InteractionMatrix& w, const ActivationSpec& spec);

}  // namespace featnet
