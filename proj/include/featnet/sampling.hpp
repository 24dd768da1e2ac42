#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "featnet/graph.hpp"

namespace featnet {

// Draws `count` distinct pairs (u, v) from domain x domain that are not arcs of g,
// uniformly by rejection, in draw order. Throws InfeasibleSampling when fewer
// than `count` such pairs exist.
std::vector<Arc> sample_non_arcs(const FeatureGraph& g, std::span<const NodeId> domain,
                                 std::size_t count, std::uint64_t seed);

}  // namespace featnet
