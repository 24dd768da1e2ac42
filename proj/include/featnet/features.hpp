#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "featnet/common.hpp"

namespace featnet {

// Binary node-feature incidence Z, kept in both orientations:
// features_of(i) is F_i and owners_of(h) is N_h, each sorted.
class FeatureAssignment {
 public:
  FeatureAssignment() = default;

  // Incidences may repeat; each (node, feature) pair is kept once.
  // Throws std::domain_error on ids outside [0, n) x [0, m).
  FeatureAssignment(std::size_t n, std::size_t m,
                    std::vector<std::pair<NodeId, FeatureId>> incidences);

  static FeatureAssignment from_lists(std::size_t m,
                                      const std::vector<std::vector<FeatureId>>& features_of);

  // Z = I: node i owns exactly feature i.
  static FeatureAssignment identity(std::size_t n);

  std::size_t num_nodes() const { return n_; }
  std::size_t num_features() const { return m_; }
  std::size_t num_incidences() const { return node_features_.size(); }

  std::span<const FeatureId> features_of(NodeId i) const {
    return {node_features_.data() + node_offsets_[i],
            node_features_.data() + node_offsets_[i + 1]};
  }
  std::span<const NodeId> owners_of(FeatureId h) const {
    return {feature_owners_.data() + feature_offsets_[h],
            feature_owners_.data() + feature_offsets_[h + 1]};
  }
  std::size_t owner_count(FeatureId h) const {
    return feature_offsets_[h + 1] - feature_offsets_[h];
  }
  bool has(NodeId i, FeatureId h) const;

  // Node i receives the feature set of node perm[i]; perm must be a permutation of [0, n).
  FeatureAssignment permuted_nodes(std::span<const NodeId> perm) const;

  friend bool operator==(const FeatureAssignment&, const FeatureAssignment&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<std::size_t> node_offsets_{0};
  std::vector<FeatureId> node_features_;
  std::vector<std::size_t> feature_offsets_{0};
  std::vector<NodeId> feature_owners_;
};

struct WeightedFeature {
  FeatureId id = 0;
  double weight = 0.0;

  friend bool operator==(const WeightedFeature&, const WeightedFeature&) = default;
};

// Real-valued incidence obtained by normalizing a FeatureAssignment.
// The support is always a subset of the source assignment's support.
class WeightedAssignment {
 public:
  WeightedAssignment(std::size_t n, std::size_t m, std::vector<std::size_t> offsets,
                     std::vector<WeightedFeature> entries)
      : n_(n), m_(m), offsets_(std::move(offsets)), entries_(std::move(entries)) {}

  std::size_t num_nodes() const { return n_; }
  std::size_t num_features() const { return m_; }

  std::span<const WeightedFeature> entries_of(NodeId i) const {
    return {entries_.data() + offsets_[i], entries_.data() + offsets_[i + 1]};
  }

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<std::size_t> offsets_;
  std::vector<WeightedFeature> entries_;
};

// Entry (i, h) becomes |N_h|^{-1/p}: rare features weigh more.
WeightedAssignment column_normalize(const FeatureAssignment& z, double p);

// Entry (i, h) becomes |F_i|^{-1/p}: nodes with few features weigh more.
WeightedAssignment row_normalize(const FeatureAssignment& z, double p);

}  // namespace featnet
