#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "featnet/estimators.hpp"
#include "featnet/features.hpp"
#include "featnet/graph.hpp"
#include "featnet/interaction_matrix.hpp"

namespace featnet {

struct FoldAssignment {
  std::size_t k = 0;
  std::vector<std::uint32_t> fold_of;  // per node

  std::vector<NodeId> members(std::size_t fold) const;
};

// Uniformly random balanced partition: fold sizes are floor(n/k) or ceil(n/k).
// Throws std::domain_error unless 2 <= k <= n.
FoldAssignment split_folds(std::size_t n, std::size_t k, std::uint64_t seed);

struct InducedTraining {
  FeatureGraph graph;
  FeatureAssignment features;         // same feature ids as the source assignment
  std::vector<NodeId> original_id;    // training id -> source id, ascending
};

// Subgraph on the nodes outside `test_fold`, re-indexed densely in id order.
InducedTraining induce_training(const FeatureGraph& g, const FeatureAssignment& z,
                                const FoldAssignment& folds, std::size_t test_fold);

enum class NegativeDomain { TestInduced, Global };

std::string_view to_string(NegativeDomain domain);

// Positives: arcs with both endpoints in the test fold. Negatives: as many
// distinct uniformly drawn non-arcs, from fold x fold or from N x N.
// Throws std::domain_error without test positives, InfeasibleSampling without enough non-arcs.
std::vector<LabeledExample> build_test_pairs(const FeatureGraph& g, const FoldAssignment& folds,
                                             std::size_t test_fold, NegativeDomain domain,
                                             std::uint64_t seed);

struct ScoredPair {
  NodeId src = 0;
  NodeId dst = 0;
  double score = 0.0;
  int label = 1;
};

std::vector<ScoredPair> score_pairs(std::span<const LabeledExample> examples,
                                    const FeatureAssignment& z, const InteractionMatrix& w);

// As above, but features with no owner in `training` contribute nothing.
std::vector<ScoredPair> score_pairs(std::span<const LabeledExample> examples,
                                    const FeatureAssignment& z, const InteractionMatrix& w,
                                    const FeatureAssignment& training);

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

// Cumulative true/false positive counts at the end of a tie block.
struct CountPoint {
  std::size_t tp = 0;
  std::size_t fp = 0;
};

struct PrCurve {
  // Plot points: recall 0, every tie-block boundary, and interpolated points
  // on an even 1/100 recall grid, in non-decreasing recall order.
  std::vector<PrPoint> points;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  // Exact block boundaries, starting at (0, 0).
  std::vector<CountPoint> boundaries;
};

// Pairs ranked by decreasing score; equal scores form one tie block inside
// which positives and negatives accrue linearly. Throws std::domain_error
// when there are no positives.
PrCurve pr_curve(std::span<const ScoredPair> scored);

// Area under the curve with TP/FP-space interpolation between boundaries,
// integrated exactly over recall in [0, 1].
double aupr(const PrCurve& curve);

struct NaiveConfig {
  NaiveSmoothing smoothing = FloorSmoothing{};
};

using EstimatorConfig = std::variant<NaiveConfig, LlamaConfig, PerceptronConfig>;

std::string_view estimator_name(const EstimatorConfig& cfg);

InteractionMatrix fit_estimator(const FeatureGraph& g, const FeatureAssignment& z,
                                const EstimatorConfig& cfg, std::uint64_t seed);

struct EvalReport {
  std::vector<std::size_t> folds;       // evaluated folds, ascending
  std::vector<double> per_fold_aupr;    // aligned with folds
  std::vector<PrCurve> curves;          // aligned with folds
  std::vector<std::size_t> skipped_folds;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
  NegativeDomain negative_domain = NegativeDomain::TestInduced;
};

// k-fold cross-validation of an estimator. Folds without internal test arcs,
// without enough non-arcs, or whose training graph is too dense (or empty) for
// a balanced example sequence are skipped and listed in the report.
// The estimator's own seed and ordering seed are replaced by per-fold derived seeds.
EvalReport cross_validate(const FeatureGraph& g, const FeatureAssignment& z,
                          const EstimatorConfig& cfg, std::size_t k, std::uint64_t seed,
                          NegativeDomain domain = NegativeDomain::TestInduced);

// Cross-validated AUPR of the passive-aggressive fit; the mean is the headline number.
EvalReport explainability(const FeatureGraph& g, const FeatureAssignment& z,
                          const LlamaConfig& cfg, std::size_t k, std::uint64_t seed,
                          NegativeDomain domain = NegativeDomain::TestInduced);

}  // namespace featnet
