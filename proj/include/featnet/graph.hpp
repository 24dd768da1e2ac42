#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "featnet/common.hpp"

namespace featnet {

struct Arc {
  NodeId src = 0;
  NodeId dst = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

// Directed graph over dense ids [0, n) stored as a CSR out-adjacency.
// Self-loops are allowed; duplicate arcs are collapsed on construction.
class FeatureGraph {
 public:
  FeatureGraph() = default;

  // Throws std::domain_error if an endpoint is >= n.
  FeatureGraph(std::size_t n, std::vector<Arc> arcs);

  std::size_t num_nodes() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t num_arcs() const { return targets_.size(); }

  // Sorted destination list of node i.
  std::span<const NodeId> successors(NodeId i) const {
    return {targets_.data() + offsets_[i], targets_.data() + offsets_[i + 1]};
  }
  std::size_t out_degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }

  bool has_arc(NodeId i, NodeId j) const;

  // All arcs in (src, dst) lexicographic order.
  std::vector<Arc> arcs() const;

  template <class Fn>
  void for_each_arc(Fn&& fn) const {
    const std::size_t n = num_nodes();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t e = offsets_[i]; e < offsets_[i + 1]; ++e) {
        fn(static_cast<NodeId>(i), targets_[e]);
      }
    }
  }

  friend bool operator==(const FeatureGraph&, const FeatureGraph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
};

}  // namespace featnet
