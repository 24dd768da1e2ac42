#include "featnet/sampling.hpp"

#include <absl/container/flat_hash_set.h>

#include <cstdint>
#include <random>
#include <string>

#include "featnet/common.hpp"

namespace featnet {

namespace {

constexpr std::uint64_t kBitsetLimit = std::uint64_t{1} << 30;

}  // namespace

std::vector<Arc> sample_non_arcs(const FeatureGraph& g, std::span<const NodeId> domain,
                                 std::size_t count, std::uint64_t seed) {
  std::vector<Arc> out;
  if (count == 0) return out;
  const std::uint64_t d = domain.size();
  const std::uint64_t universe = d * d;

  // position of each node in the domain, or -1
  std::vector<std::int64_t> pos(g.num_nodes(), -1);
  for (std::size_t a = 0; a < domain.size(); ++a) pos[domain[a]] = static_cast<std::int64_t>(a);
  std::uint64_t arcs_inside = 0;
  for (NodeId v : domain) {
    for (NodeId w : g.successors(v)) arcs_inside += pos[w] >= 0 ? 1 : 0;
  }
  if (universe - arcs_inside < count) {
    throw InfeasibleSampling("need " + std::to_string(count) + " non-arc pairs but only " +
                             std::to_string(universe - arcs_inside) + " exist");
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, universe - 1);
  out.reserve(count);

  if (universe <= kBitsetLimit) {
    // One bit per pair, set for arcs and for pairs already drawn: a draw is a single probe.
    std::vector<bool> taken(universe, false);
    for (std::uint64_t a = 0; a < d; ++a) {
      for (NodeId w : g.successors(domain[a])) {
        if (pos[w] >= 0) taken[a * d + static_cast<std::uint64_t>(pos[w])] = true;
      }
    }
    while (out.size() < count) {
      const std::uint64_t idx = pick(rng);
      if (taken[idx]) continue;
      taken[idx] = true;
      out.push_back({domain[idx / d], domain[idx % d]});
    }
    return out;
  }

  absl::flat_hash_set<std::uint64_t> drawn;
  while (out.size() < count) {
    const std::uint64_t idx = pick(rng);
    const NodeId u = domain[idx / d];
    const NodeId v = domain[idx % d];
    if (g.has_arc(u, v)) continue;
    if (!drawn.insert(idx).second) continue;
    out.push_back({u, v});
  }
  return out;
}

}  // namespace featnet
