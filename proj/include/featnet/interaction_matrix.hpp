#pragma once

#include <absl/container/flat_hash_map.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "featnet/common.hpp"

namespace featnet {

// The latent m x m feature-feature matrix W.
//
// Storage is dense when m*m doubles fit the dense budget and an open-addressed
// hash map keyed by (h, k) otherwise; both behave identically. A symmetric
// matrix mirrors every write, so W[h][k] == W[k][h] holds at all times.
//
// Reads may run concurrently; writes need exclusive access.
class InteractionMatrix {
 public:
  static constexpr std::size_t kDefaultDenseBudgetBytes = std::size_t{1} << 30;

  InteractionMatrix() : InteractionMatrix(0) {}
  explicit InteractionMatrix(std::size_t m, bool symmetric = false,
                             std::size_t dense_budget_bytes = kDefaultDenseBudgetBytes);

  // Every entry starts at `fill` instead of 0. Sparse storage keeps only the
  // entries that differ from it.
  static InteractionMatrix filled(std::size_t m, double fill, bool symmetric = false,
                                  std::size_t dense_budget_bytes = kDefaultDenseBudgetBytes);

  std::size_t size() const { return m_; }
  bool symmetric() const { return symmetric_; }
  bool is_dense() const { return dense_; }
  double fill() const { return fill_; }

  // Bounds-checked read; throws std::domain_error.
  double at(FeatureId h, FeatureId k) const;

  double get(FeatureId h, FeatureId k) const {
    if (dense_) return values_[index(h, k)];
    auto it = sparse_.find(key(h, k));
    return it == sparse_.end() ? fill_ : it->second;
  }

  // Throws std::domain_error on out-of-range ids or a non-finite value.
  void set(FeatureId h, FeatureId k, double value);
  void add(FeatureId h, FeatureId k, double delta);

  // Sum of W[h][k] over fi x fj. Ids are not checked.
  double block_sum(std::span<const FeatureId> fi, std::span<const FeatureId> fj) const;

  // W[h][k] += delta for every (h, k) in fi x fj (mirrored when symmetric).
  void add_block(std::span<const FeatureId> fi, std::span<const FeatureId> fj, double delta);

  // Visits entries with a nonzero value in (h, k) order. A sparse matrix with
  // a nonzero fill is walked entry by entry, O(m^2).
  template <class Fn>
  void for_each_nonzero(Fn&& fn) const {
    if (dense_ || fill_ != 0.0) {
      for (std::size_t h = 0; h < m_; ++h) {
        for (std::size_t k = 0; k < m_; ++k) {
          const double v = get(static_cast<FeatureId>(h), static_cast<FeatureId>(k));
          if (v != 0.0) fn(static_cast<FeatureId>(h), static_cast<FeatureId>(k), v);
        }
      }
      return;
    }
    for (const auto& [key_hk, v] : sorted_sparse()) {
      if (v != 0.0) {
        fn(static_cast<FeatureId>(key_hk / m_), static_cast<FeatureId>(key_hk % m_), v);
      }
    }
  }

  std::size_t nonzeros() const;
  double frobenius_sq() const;

  // max |W[h][k] - W[k][h]|
  double asymmetry() const;

  // Entry-wise equality regardless of storage backend.
  friend bool operator==(const InteractionMatrix& a, const InteractionMatrix& b);

 private:
  std::size_t index(FeatureId h, FeatureId k) const { return std::size_t{h} * m_ + k; }
  std::uint64_t key(FeatureId h, FeatureId k) const { return std::uint64_t{h} * m_ + k; }
  void add_one(FeatureId h, FeatureId k, double delta);
  std::vector<std::pair<std::uint64_t, double>> sorted_sparse() const;
  void check(FeatureId h, FeatureId k) const;

  std::size_t m_ = 0;
  bool symmetric_ = false;
  bool dense_ = true;
  double fill_ = 0.0;
  std::vector<double> values_;
  absl::flat_hash_map<std::uint64_t, double> sparse_;
};

}  // namespace featnet
