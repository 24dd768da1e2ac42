#include "featnet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "featnet/model.hpp"
#include "featnet/parallel.hpp"
#include "featnet/sampling.hpp"

namespace featnet {

namespace {

constexpr std::uint64_t kFoldStream = 21;
constexpr std::uint64_t kTestPairStream = 22;
constexpr std::uint64_t kFitStream = 23;
constexpr int kGridSteps = 100;

std::size_t arcs_inside(const FeatureGraph& g, const FoldAssignment& folds, std::size_t fold) {
  std::size_t count = 0;
  g.for_each_arc([&](NodeId i, NodeId j) {
    if (folds.fold_of[i] == fold && folds.fold_of[j] == fold) ++count;
  });
  return count;
}

}  // namespace

std::vector<NodeId> FoldAssignment::members(std::size_t fold) const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) out.push_back(static_cast<NodeId>(i));
  }
  return out;
}

FoldAssignment split_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw std::domain_error("cross-validation needs at least 2 folds");
  if (k > n) {
    throw std::domain_error("cannot split " + std::to_string(n) + " nodes into " +
                            std::to_string(k) + " folds");
  }
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), NodeId{0});
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  FoldAssignment folds{k, std::vector<std::uint32_t>(n, 0)};
  for (std::size_t pos = 0; pos < n; ++pos) {
    folds.fold_of[perm[pos]] = static_cast<std::uint32_t>(pos % k);
  }
  return folds;
}

InducedTraining induce_training(const FeatureGraph& g, const FeatureAssignment& z,
                                const FoldAssignment& folds, std::size_t test_fold) {
  if (test_fold >= folds.k) throw std::domain_error("test fold out of range");
  const std::size_t n = g.num_nodes();
  if (z.num_nodes() != n || folds.fold_of.size() != n) {
    throw std::domain_error("graph, assignment and folds disagree on the node count");
  }
  InducedTraining out;
  std::vector<NodeId> new_id(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (folds.fold_of[i] != test_fold) {
      new_id[i] = static_cast<NodeId>(out.original_id.size());
      out.original_id.push_back(static_cast<NodeId>(i));
    }
  }
  std::vector<Arc> arcs;
  g.for_each_arc([&](NodeId i, NodeId j) {
    if (folds.fold_of[i] != test_fold && folds.fold_of[j] != test_fold) {
      arcs.push_back({new_id[i], new_id[j]});
    }
  });
  std::vector<std::pair<NodeId, FeatureId>> inc;
  for (std::size_t t = 0; t < out.original_id.size(); ++t) {
    for (FeatureId h : z.features_of(out.original_id[t])) inc.emplace_back(static_cast<NodeId>(t), h);
  }
  const std::size_t kept = out.original_id.size();
  out.graph = FeatureGraph(kept, std::move(arcs));
  out.features = FeatureAssignment(kept, z.num_features(), std::move(inc));
  return out;
}

std::string_view to_string(NegativeDomain domain) {
  return domain == NegativeDomain::Global ? "global" : "test-induced";
}

std::vector<LabeledExample> build_test_pairs(const FeatureGraph& g, const FoldAssignment& folds,
                                             std::size_t test_fold, NegativeDomain domain,
                                             std::uint64_t seed) {
  if (test_fold >= folds.k) throw std::domain_error("test fold out of range");
  const auto members = folds.members(test_fold);
  std::vector<LabeledExample> out;
  for (NodeId i : members) {
    for (NodeId j : g.successors(i)) {
      if (folds.fold_of[j] == test_fold) out.push_back({i, j, 1});
    }
  }
  if (out.empty()) throw std::domain_error("test fold has no internal arcs");
  std::vector<NodeId> all;
  std::span<const NodeId> pool = members;
  if (domain == NegativeDomain::Global) {
    all.resize(g.num_nodes());
    std::iota(all.begin(), all.end(), NodeId{0});
    pool = all;
  }
  for (const Arc& a : sample_non_arcs(g, pool, out.size(), seed)) out.push_back({a.src, a.dst, -1});
  return out;
}

std::vector<ScoredPair> score_pairs(std::span<const LabeledExample> examples,
                                    const FeatureAssignment& z, const InteractionMatrix& w) {
  std::vector<ScoredPair> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) {
    out.push_back({ex.src, ex.dst, score(z.features_of(ex.src), z.features_of(ex.dst), w), ex.label});
  }
  return out;
}

std::vector<ScoredPair> score_pairs(std::span<const LabeledExample> examples,
                                    const FeatureAssignment& z, const InteractionMatrix& w,
                                    const FeatureAssignment& training) {
  std::vector<ScoredPair> out;
  out.reserve(examples.size());
  std::vector<FeatureId> fi;
  std::vector<FeatureId> fj;
  auto known = [&](std::span<const FeatureId> f, std::vector<FeatureId>& dst) {
    dst.clear();
    for (FeatureId h : f) {
      if (h < training.num_features() && training.owner_count(h) > 0) dst.push_back(h);
    }
  };
  for (const auto& ex : examples) {
    known(z.features_of(ex.src), fi);
    known(z.features_of(ex.dst), fj);
    out.push_back({ex.src, ex.dst, score(fi, fj, w), ex.label});
  }
  return out;
}

PrCurve pr_curve(std::span<const ScoredPair> scored) {
  PrCurve curve;
  for (const auto& sp : scored) {
    if (!std::isfinite(sp.score)) throw std::domain_error("scores must be finite");
    (sp.label > 0 ? curve.positives : curve.negatives) += 1;
  }
  if (curve.positives == 0) throw std::domain_error("precision-recall curve needs a positive");

  std::vector<std::size_t> idx(scored.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scored[a].score > scored[b].score; });

  curve.boundaries.push_back({0, 0});
  for (std::size_t pos = 0; pos < idx.size();) {
    CountPoint next = curve.boundaries.back();
    const double s = scored[idx[pos]].score;
    for (; pos < idx.size() && scored[idx[pos]].score == s; ++pos) {
      (scored[idx[pos]].label > 0 ? next.tp : next.fp) += 1;
    }
    curve.boundaries.push_back(next);
  }

  const double total_pos = static_cast<double>(curve.positives);
  bool started = false;
  for (std::size_t b = 1; b < curve.boundaries.size(); ++b) {
    const CountPoint from = curve.boundaries[b - 1];
    const CountPoint to = curve.boundaries[b];
    const double a = static_cast<double>(from.tp);
    const double base = static_cast<double>(from.tp + from.fp);
    const double dt = static_cast<double>(to.tp - from.tp);
    const double df = static_cast<double>(to.fp - from.fp);
    const double end_precision = static_cast<double>(to.tp) / static_cast<double>(to.tp + to.fp);
    if (dt == 0.0) {
      // A drop at fixed recall; trailing negatives after recall 1 add nothing.
      if (started && from.tp < curve.positives) curve.points.push_back({a / total_pos, end_precision});
      continue;
    }
    const double slope = 1.0 + df / dt;
    auto precision_at = [&](double x) { return base == 0.0 ? 1.0 / slope : (a + x) / (base + slope * x); };
    if (!started) {
      curve.points.push_back({0.0, precision_at(0.0)});
      started = true;
    }
    const double r0 = a / total_pos;
    const double r1 = static_cast<double>(to.tp) / total_pos;
    for (int g = static_cast<int>(std::floor(r0 * kGridSteps)) + 1; g < kGridSteps + 1; ++g) {
      const double r = static_cast<double>(g) / kGridSteps;
      if (r <= r0) continue;
      if (r >= r1) break;
      curve.points.push_back({r, precision_at(r * total_pos - a)});
    }
    curve.points.push_back({r1, end_precision});
  }
  return curve;
}

double aupr(const PrCurve& curve) {
  if (curve.positives == 0) return 0.0;
  const double total_pos = static_cast<double>(curve.positives);
  double area = 0.0;
  for (std::size_t b = 1; b < curve.boundaries.size(); ++b) {
    const CountPoint from = curve.boundaries[b - 1];
    const CountPoint to = curve.boundaries[b];
    const double dt = static_cast<double>(to.tp - from.tp);
    if (dt == 0.0) continue;
    const double a = static_cast<double>(from.tp);
    const double f = static_cast<double>(from.fp);
    const double base = a + f;
    const double slope = 1.0 + static_cast<double>(to.fp - from.fp) / dt;
    // Integral over x in [0, dt] of (a + x) / (base + slope x), divided by P.
    double seg = dt / slope;
    if (base > 0.0) {
      seg += (a * (slope - 1.0) - f) / (slope * slope) * std::log1p(slope * dt / base);
    }
    area += seg / total_pos;
  }
  return std::clamp(area, 0.0, 1.0);
}

std::string_view estimator_name(const EstimatorConfig& cfg) {
  if (std::holds_alternative<NaiveConfig>(cfg)) return "naive";
  if (std::holds_alternative<LlamaConfig>(cfg)) return "llama";
  return "perceptron";
}

InteractionMatrix fit_estimator(const FeatureGraph& g, const FeatureAssignment& z,
                                const EstimatorConfig& cfg, std::uint64_t seed) {
  if (const auto* naive = std::get_if<NaiveConfig>(&cfg)) {
    return naive_estimate(g, z, naive->smoothing);
  }
  if (const auto* llama = std::get_if<LlamaConfig>(&cfg)) {
    LlamaConfig c = *llama;
    c.seed = seed;
    return llama_fit(g, z, c).w;
  }
  PerceptronConfig c = std::get<PerceptronConfig>(cfg);
  c.seed = seed;
  return perceptron_fit(g, z, c).w;
}

namespace {

// Restricts an explicit node order to the training nodes, in training ids.
NodeOrdering training_order(const NodeOrdering& ordering, const InducedTraining& train,
                            std::size_t n) {
  if (ordering.kind != NodeOrdering::Kind::Given || ordering.order.empty()) return ordering;
  if (ordering.order.size() != n) throw std::domain_error("node order must list every node once");
  std::vector<std::int64_t> to_train(n, -1);
  for (std::size_t t = 0; t < train.original_id.size(); ++t) to_train[train.original_id[t]] = t;
  std::vector<NodeId> mapped;
  mapped.reserve(train.original_id.size());
  for (NodeId v : ordering.order) {
    if (v >= n) throw std::domain_error("node order must list every node once");
    if (to_train[v] >= 0) mapped.push_back(static_cast<NodeId>(to_train[v]));
  }
  return NodeOrdering::given(std::move(mapped));
}

EstimatorConfig for_training(const EstimatorConfig& cfg, const InducedTraining& train,
                             std::size_t n) {
  EstimatorConfig out = cfg;
  if (auto* llama = std::get_if<LlamaConfig>(&out)) {
    llama->ordering = training_order(llama->ordering, train, n);
  } else if (auto* perc = std::get_if<PerceptronConfig>(&out)) {
    perc->ordering = training_order(perc->ordering, train, n);
  }
  return out;
}

std::uint64_t config_seed(const EstimatorConfig& cfg) {
  if (const auto* llama = std::get_if<LlamaConfig>(&cfg)) return llama->seed;
  if (const auto* perc = std::get_if<PerceptronConfig>(&cfg)) return perc->seed;
  return 0;
}

struct FoldOutcome {
  bool skipped = true;
  double aupr = 0.0;
  PrCurve curve;
};

}  // namespace

EvalReport cross_validate(const FeatureGraph& g, const FeatureAssignment& z,
                          const EstimatorConfig& cfg, std::size_t k, std::uint64_t seed,
                          NegativeDomain domain) {
  const std::size_t n = g.num_nodes();
  if (z.num_nodes() != n) throw std::domain_error("graph and assignment disagree on the node count");
  const FoldAssignment folds = split_folds(n, k, derive_seed(seed, kFoldStream));
  std::vector<FoldOutcome> outcomes(k);

  parallel_for(k, [&](std::size_t f) {
    if (arcs_inside(g, folds, f) == 0) return;
    std::vector<LabeledExample> test;
    try {
      test = build_test_pairs(g, folds, f, domain, derive_seed(derive_seed(seed, kTestPairStream), f));
    } catch (const InfeasibleSampling&) {
      return;
    }
    const InducedTraining train = induce_training(g, z, folds, f);
    const std::uint64_t fit_seed =
        derive_seed(derive_seed(derive_seed(seed, kFitStream), f), config_seed(cfg));
    InteractionMatrix w;
    try {
      w = fit_estimator(train.graph, train.features, for_training(cfg, train, n), fit_seed);
    } catch (const InfeasibleSampling&) {
      return;  // training graph denser than half: no balanced sequence
    } catch (const std::domain_error&) {
      if (train.graph.num_arcs() == 0) return;  // nothing to train on
      throw;
    }
    const auto scored = score_pairs(test, z, w, train.features);
    FoldOutcome& out = outcomes[f];
    out.curve = pr_curve(scored);
    out.aupr = aupr(out.curve);
    out.skipped = false;
  });

  EvalReport report;
  report.negative_domain = domain;
  for (std::size_t f = 0; f < k; ++f) {
    if (outcomes[f].skipped) {
      report.skipped_folds.push_back(f);
      continue;
    }
    report.folds.push_back(f);
    report.per_fold_aupr.push_back(outcomes[f].aupr);
    report.curves.push_back(std::move(outcomes[f].curve));
  }
  if (!report.per_fold_aupr.empty()) {
    const double count = static_cast<double>(report.per_fold_aupr.size());
    report.mean = std::accumulate(report.per_fold_aupr.begin(), report.per_fold_aupr.end(), 0.0) / count;
    double var = 0.0;
    for (double v : report.per_fold_aupr) var += (v - report.mean) * (v - report.mean);
    report.std = std::sqrt(var / count);
  }
  return report;
}

EvalReport explainability(const FeatureGraph& g, const FeatureAssignment& z,
                          const LlamaConfig& cfg, std::size_t k, std::uint64_t seed,
                          NegativeDomain domain) {
  return cross_validate(g, z, EstimatorConfig{cfg}, k, seed, domain);
}

}  // namespace featnet
