#include "featnet/interaction_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace featnet {

InteractionMatrix::InteractionMatrix(std::size_t m, bool symmetric, std::size_t dense_budget_bytes)
    : m_(m), symmetric_(symmetric) {
  // Guard the multiplication: m*m*8 must not overflow before the comparison.
  dense_ = m == 0 || (m <= dense_budget_bytes / sizeof(double) / m);
  if (dense_) values_.assign(m * m, 0.0);
}

void InteractionMatrix::check(FeatureId h, FeatureId k) const {
  if (h >= m_ || k >= m_) {
    throw std::domain_error("feature pair (" + std::to_string(h) + ", " + std::to_string(k) +
                            ") outside matrix of size " + std::to_string(m_));
  }
}

InteractionMatrix InteractionMatrix::filled(std::size_t m, double fill, bool symmetric,
                                            std::size_t dense_budget_bytes) {
  if (!std::isfinite(fill)) throw std::domain_error("interaction weights must be finite");
  InteractionMatrix w(m, symmetric, dense_budget_bytes);
  w.fill_ = fill;
  if (w.dense_) std::fill(w.values_.begin(), w.values_.end(), fill);
  return w;
}

double InteractionMatrix::at(FeatureId h, FeatureId k) const {
  check(h, k);
  return get(h, k);
}

void InteractionMatrix::set(FeatureId h, FeatureId k, double value) {
  check(h, k);
  if (!std::isfinite(value)) throw std::domain_error("interaction weights must be finite");
  auto put = [&](FeatureId a, FeatureId b) {
    if (dense_) {
      values_[index(a, b)] = value;
    } else if (value == fill_) {
      sparse_.erase(key(a, b));
    } else {
      sparse_[key(a, b)] = value;
    }
  };
  put(h, k);
  if (symmetric_ && h != k) put(k, h);
}

void InteractionMatrix::add_one(FeatureId h, FeatureId k, double delta) {
  if (dense_) {
    values_[index(h, k)] += delta;
  } else {
    sparse_.try_emplace(key(h, k), fill_).first->second += delta;
  }
}

void InteractionMatrix::add(FeatureId h, FeatureId k, double delta) {
  check(h, k);
  add_one(h, k, delta);
  if (symmetric_ && h != k) add_one(k, h, delta);
}

double InteractionMatrix::block_sum(std::span<const FeatureId> fi,
                                    std::span<const FeatureId> fj) const {
  double sum = 0.0;
  if (dense_) {
    for (FeatureId h : fi) {
      const double* row = values_.data() + std::size_t{h} * m_;
      for (FeatureId k : fj) sum += row[k];
    }
    return sum;
  }
  for (FeatureId h : fi) {
    for (FeatureId k : fj) {
      auto it = sparse_.find(key(h, k));
      sum += it == sparse_.end() ? fill_ : it->second;
    }
  }
  return sum;
}

void InteractionMatrix::add_block(std::span<const FeatureId> fi, std::span<const FeatureId> fj,
                                  double delta) {
  if (dense_ && !symmetric_) {
    for (FeatureId h : fi) {
      double* row = values_.data() + std::size_t{h} * m_;
      for (FeatureId k : fj) row[k] += delta;
    }
    return;
  }
  for (FeatureId h : fi) {
    for (FeatureId k : fj) {
      add_one(h, k, delta);
      if (symmetric_ && h != k) add_one(k, h, delta);
    }
  }
}

std::vector<std::pair<std::uint64_t, double>> InteractionMatrix::sorted_sparse() const {
  std::vector<std::pair<std::uint64_t, double>> entries(sparse_.begin(), sparse_.end());
  std::sort(entries.begin(), entries.end());
  return entries;
}

std::size_t InteractionMatrix::nonzeros() const {
  std::size_t count = 0;
  for_each_nonzero([&](FeatureId, FeatureId, double) { ++count; });
  return count;
}

double InteractionMatrix::frobenius_sq() const {
  double sum = 0.0;
  if (dense_) {
    for (double v : values_) sum += v * v;
  } else {
    for (const auto& [k, v] : sparse_) sum += v * v;
    sum += fill_ * fill_ * static_cast<double>(m_ * m_ - sparse_.size());
  }
  return sum;
}

double InteractionMatrix::asymmetry() const {
  double worst = 0.0;
  for_each_nonzero([&](FeatureId h, FeatureId k, double v) {
    worst = std::max(worst, std::abs(v - get(k, h)));
  });
  return worst;
}

bool operator==(const InteractionMatrix& a, const InteractionMatrix& b) {
  if (a.m_ != b.m_ || a.symmetric_ != b.symmetric_) return false;
  if (a.dense_ && b.dense_) return a.values_ == b.values_;
  if (!a.dense_ && !b.dense_ && a.fill_ == b.fill_ && a.sparse_.size() == b.sparse_.size()) {
    for (const auto& [k, v] : a.sparse_) {
      auto it = b.sparse_.find(k);
      if (it == b.sparse_.end() || it->second != v) return false;
    }
    return true;
  }
  bool equal = true;
  a.for_each_nonzero([&](FeatureId h, FeatureId k, double v) {
    if (b.get(h, k) != v) equal = false;
  });
  b.for_each_nonzero([&](FeatureId h, FeatureId k, double v) {
    if (a.get(h, k) != v) equal = false;
  });
  return equal;
}

}  // namespace featnet
