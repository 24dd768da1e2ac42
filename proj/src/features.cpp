#include "featnet/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace featnet {

FeatureAssignment::FeatureAssignment(std::size_t n, std::size_t m,
                                     std::vector<std::pair<NodeId, FeatureId>> incidences)
    : n_(n), m_(m) {
  for (const auto& [i, h] : incidences) {
    if (i >= n || h >= m) {
      throw std::domain_error("incidence (" + std::to_string(i) + ", " + std::to_string(h) +
                              ") outside " + std::to_string(n) + " x " + std::to_string(m));
    }
  }
  std::sort(incidences.begin(), incidences.end());
  incidences.erase(std::unique(incidences.begin(), incidences.end()), incidences.end());

  node_offsets_.assign(n + 1, 0);
  feature_offsets_.assign(m + 1, 0);
  for (const auto& [i, h] : incidences) {
    ++node_offsets_[i + 1];
    ++feature_offsets_[h + 1];
  }
  for (std::size_t i = 0; i < n; ++i) node_offsets_[i + 1] += node_offsets_[i];
  for (std::size_t h = 0; h < m; ++h) feature_offsets_[h + 1] += feature_offsets_[h];

  node_features_.reserve(incidences.size());
  for (const auto& inc : incidences) node_features_.push_back(inc.second);

  // Incidences are sorted by node, so each owner list comes out sorted too.
  feature_owners_.resize(incidences.size());
  std::vector<std::size_t> cursor(feature_offsets_.begin(), feature_offsets_.end() - 1);
  for (const auto& [i, h] : incidences) feature_owners_[cursor[h]++] = i;
}

FeatureAssignment FeatureAssignment::from_lists(
    std::size_t m, const std::vector<std::vector<FeatureId>>& features_of) {
  std::vector<std::pair<NodeId, FeatureId>> inc;
  for (std::size_t i = 0; i < features_of.size(); ++i) {
    for (FeatureId h : features_of[i]) inc.emplace_back(static_cast<NodeId>(i), h);
  }
  return FeatureAssignment(features_of.size(), m, std::move(inc));
}

FeatureAssignment FeatureAssignment::identity(std::size_t n) {
  std::vector<std::pair<NodeId, FeatureId>> inc;
  inc.reserve(n);
  for (std::size_t i = 0; i < n; ++i) inc.emplace_back(static_cast<NodeId>(i), static_cast<FeatureId>(i));
  return FeatureAssignment(n, n, std::move(inc));
}

bool FeatureAssignment::has(NodeId i, FeatureId h) const {
  auto f = features_of(i);
  return std::binary_search(f.begin(), f.end(), h);
}

FeatureAssignment FeatureAssignment::permuted_nodes(std::span<const NodeId> perm) const {
  if (perm.size() != n_) throw std::domain_error("permutation size does not match node count");
  std::vector<bool> seen(n_, false);
  std::vector<std::pair<NodeId, FeatureId>> inc;
  inc.reserve(num_incidences());
  for (std::size_t i = 0; i < n_; ++i) {
    if (perm[i] >= n_ || seen[perm[i]]) throw std::domain_error("not a permutation");
    seen[perm[i]] = true;
    for (FeatureId h : features_of(perm[i])) inc.emplace_back(static_cast<NodeId>(i), h);
  }
  return FeatureAssignment(n_, m_, std::move(inc));
}

namespace {

void check_norm_order(double p) {
  if (!(p >= 1.0)) throw std::domain_error("normalization order p must be >= 1");
}

}  // namespace

WeightedAssignment column_normalize(const FeatureAssignment& z, double p) {
  check_norm_order(p);
  const std::size_t n = z.num_nodes();
  std::vector<std::size_t> offsets{0};
  std::vector<WeightedFeature> entries;
  entries.reserve(z.num_incidences());
  for (NodeId i = 0; i < n; ++i) {
    for (FeatureId h : z.features_of(i)) {
      // |N_h| >= 1 here since i owns h; ownerless features never show up.
      const double norm = std::pow(static_cast<double>(z.owner_count(h)), 1.0 / p);
      entries.push_back({h, 1.0 / norm});
    }
    offsets.push_back(entries.size());
  }
  return WeightedAssignment(n, z.num_features(), std::move(offsets), std::move(entries));
}

WeightedAssignment row_normalize(const FeatureAssignment& z, double p) {
  check_norm_order(p);
  const std::size_t n = z.num_nodes();
  std::vector<std::size_t> offsets{0};
  std::vector<WeightedFeature> entries;
  entries.reserve(z.num_incidences());
  for (NodeId i = 0; i < n; ++i) {
    auto f = z.features_of(i);
    if (!f.empty()) {
      const double w = 1.0 / std::pow(static_cast<double>(f.size()), 1.0 / p);
      for (FeatureId h : f) entries.push_back({h, w});
    }
    offsets.push_back(entries.size());
  }
  return WeightedAssignment(n, z.num_features(), std::move(offsets), std::move(entries));
}

}  // namespace featnet
