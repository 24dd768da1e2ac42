#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "featnet/features.hpp"
#include "featnet/graph.hpp"
#include "featnet/interaction_matrix.hpp"

namespace featnet {

struct LabeledExample {
  NodeId src = 0;
  NodeId dst = 0;
  int label = 1;  // +1 arc, -1 non-arc

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

// Order in which source nodes are enumerated when building the example sequence.
struct NodeOrdering {
  enum class Kind { Random, Given };
  Kind kind = Kind::Random;
  // Used only for Kind::Given; empty means natural id order 0..n-1.
  std::vector<NodeId> order;

  static NodeOrdering random() { return {}; }
  static NodeOrdering given(std::vector<NodeId> order = {}) {
    return {Kind::Given, std::move(order)};
  }
};

enum class Normalization { None, RowL2 };

struct LlamaConfig {
  double kappa = 1.5;
  Normalization normalization = Normalization::None;
  NodeOrdering ordering;
  std::uint64_t seed = 0;
  // Apply every update to (h, k) and (k, h); for undirected graphs.
  bool symmetric = false;
};

struct PerceptronConfig {
  double lambda = 1.0;
  NodeOrdering ordering;
  std::uint64_t seed = 0;
};

struct FloorSmoothing {
  double value = -50.0;
};
struct AddOneSmoothing {};
using NaiveSmoothing = std::variant<FloorSmoothing, AddOneSmoothing>;

struct FitDiagnostics {
  std::size_t mistakes = 0;       // sign mistakes under the step rule, before each update
  std::size_t radius_sq = 0;      // max |F_i| * |F_j| over trained examples
  std::size_t examples_seen = 0;  // examples actually trained on
  std::size_t skipped = 0;        // examples with an empty feature set on either side

  friend bool operator==(const FitDiagnostics&, const FitDiagnostics&) = default;
};

struct FitResult {
  InteractionMatrix w;
  FitDiagnostics diagnostics;
};

// Balanced single-pass training sequence: every arc once as a positive and
// |A| distinct uniformly drawn non-arcs as negatives. Nodes are enumerated
// in the given order; for each node its positives precede its negatives.
// Throws std::domain_error on an empty graph and InfeasibleSampling when
// fewer than |A| non-arc pairs exist.
std::vector<LabeledExample> build_example_sequence(const FeatureGraph& g,
                                                   const NodeOrdering& ordering,
                                                   std::uint64_t seed);

// Closed-form estimator: W[h][k] = log(|(N_h x N_k) ∩ A| / (|N_h| |N_k|)).
// Floor smoothing replaces log 0 with the floor value; add-one uses log(1 + p).
InteractionMatrix naive_estimate(const FeatureGraph& g, const FeatureAssignment& z,
                                 const NaiveSmoothing& smoothing);

// Same estimator over an arbitrary arc stream (duplicates are counted as given).
InteractionMatrix naive_estimate(std::span<const Arc> arcs, const FeatureAssignment& z,
                                 const NaiveSmoothing& smoothing);

struct StepOutcome {
  double delta = 0.0;
  bool updated = false;
  bool skipped = false;  // fi or fj empty; nothing was touched
};

// One passive-aggressive update on the example (fi, fj, label).
StepOutcome llama_step(InteractionMatrix& w, std::span<const FeatureId> fi,
                       std::span<const FeatureId> fj, int label, const LlamaConfig& cfg);

// W <- 0, then one pass of llama_step over build_example_sequence(g, cfg.ordering, cfg.seed).
FitResult llama_fit(const FeatureGraph& g, const FeatureAssignment& z, const LlamaConfig& cfg);

// Mistake-driven perceptron over the same sequence: W += y * lambda on fi x fj.
FitResult perceptron_fit(const FeatureGraph& g, const FeatureAssignment& z,
                         const PerceptronConfig& cfg);

// Sum of max(0, 1 - y * score) over the examples.
double hinge_loss(const InteractionMatrix& w, std::span<const LabeledExample> examples,
                  const FeatureAssignment& z);

// max |F_i| * |F_j| over the examples.
std::size_t radius_sq(std::span<const LabeledExample> examples, const FeatureAssignment& z);

// min y * score over the examples (+inf when empty).
double min_margin(const InteractionMatrix& w, std::span<const LabeledExample> examples,
                  const FeatureAssignment& z);

// max(R^2, 1/kappa) * (2 kappa H(w_ref) + ||w_ref||_F^2)
double pa_mistake_bound(const InteractionMatrix& w_ref, std::span<const LabeledExample> examples,
                        const FeatureAssignment& z, double kappa);

}  // namespace featnet
