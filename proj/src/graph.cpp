#include "featnet/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace featnet {

FeatureGraph::FeatureGraph(std::size_t n, std::vector<Arc> arcs) {
  for (const Arc& a : arcs) {
    if (a.src >= n || a.dst >= n) {
      throw std::domain_error("arc (" + std::to_string(a.src) + ", " + std::to_string(a.dst) +
                              ") outside node range " + std::to_string(n));
    }
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  offsets_.assign(n + 1, 0);
  for (const Arc& a : arcs) ++offsets_[a.src + 1];
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  targets_.reserve(arcs.size());
  for (const Arc& a : arcs) targets_.push_back(a.dst);
}

bool FeatureGraph::has_arc(NodeId i, NodeId j) const {
  if (i >= num_nodes()) return false;
  auto succ = successors(i);
  return std::binary_search(succ.begin(), succ.end(), j);
}

std::vector<Arc> FeatureGraph::arcs() const {
  std::vector<Arc> out;
  out.reserve(num_arcs());
  for_each_arc([&](NodeId i, NodeId j) { out.push_back({i, j}); });
  return out;
}

}  // namespace featnet
