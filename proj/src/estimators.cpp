#include "featnet/estimators.hpp"

#include <absl/container/flat_hash_map.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "featnet/model.hpp"
#include "featnet/parallel.hpp"
#include "featnet/sampling.hpp"

namespace featnet {

namespace {

constexpr std::uint64_t kOrderStream = 1;
constexpr std::uint64_t kNegativeStream = 2;

std::vector<NodeId> resolve_order(std::size_t n, const NodeOrdering& ordering,
                                  std::uint64_t seed) {
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  if (ordering.kind == NodeOrdering::Kind::Random) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
  }
  if (ordering.order.empty()) return order;
  if (ordering.order.size() != n) throw std::domain_error("node order must list every node once");
  std::vector<bool> seen(n, false);
  for (NodeId v : ordering.order) {
    if (v >= n || seen[v]) throw std::domain_error("node order must list every node once");
    seen[v] = true;
  }
  return ordering.order;
}

// Negatives grouped by source, draw order kept within each source.
struct ExamplePlan {
  std::vector<NodeId> order;
  std::vector<std::size_t> neg_offsets;
  std::vector<NodeId> neg_targets;
};

ExamplePlan plan_examples(const FeatureGraph& g, const NodeOrdering& ordering,
                          std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  if (g.num_arcs() == 0) throw std::domain_error("example sequence needs at least one arc");
  ExamplePlan plan;
  plan.order = resolve_order(n, ordering, derive_seed(seed, kOrderStream));

  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), NodeId{0});
  const auto negatives = sample_non_arcs(g, all, g.num_arcs(), derive_seed(seed, kNegativeStream));

  plan.neg_offsets.assign(n + 1, 0);
  for (const Arc& a : negatives) ++plan.neg_offsets[a.src + 1];
  for (std::size_t i = 0; i < n; ++i) plan.neg_offsets[i + 1] += plan.neg_offsets[i];
  plan.neg_targets.resize(negatives.size());
  std::vector<std::size_t> cursor(plan.neg_offsets.begin(), plan.neg_offsets.end() - 1);
  for (const Arc& a : negatives) plan.neg_targets[cursor[a.src]++] = a.dst;
  return plan;
}

template <class Fn>
void for_each_example(const FeatureGraph& g, const ExamplePlan& plan, Fn&& fn) {
  for (NodeId i : plan.order) {
    for (NodeId j : g.successors(i)) fn(i, j, 1);
    for (std::size_t e = plan.neg_offsets[i]; e < plan.neg_offsets[i + 1]; ++e) {
      fn(i, plan.neg_targets[e], -1);
    }
  }
}

double pa_delta(double mu, double rho, int label, const LlamaConfig& cfg) {
  const double kappa = cfg.kappa;
  if (cfg.normalization == Normalization::RowL2) {
    const double s = std::sqrt(rho);
    if (label > 0) return s * std::min(kappa, std::max(0.0, 1.0 - s * mu));
    return -s * std::min(kappa, std::max(0.0, 1.0 + s * mu));
  }
  if (label > 0) return std::min(kappa, std::max(0.0, rho * (1.0 - mu)));
  return -std::min(kappa, std::max(0.0, rho * (1.0 + mu)));
}

void check_kappa(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::domain_error("kappa must be > 0");
}

void check_same_nodes(const FeatureGraph& g, const FeatureAssignment& z) {
  if (g.num_nodes() != z.num_nodes()) {
    throw std::domain_error("graph has " + std::to_string(g.num_nodes()) +
                            " nodes but the assignment has " + std::to_string(z.num_nodes()));
  }
}

bool is_mistake(double mu, int label) { return (mu > 0.0) != (label > 0); }

}  // namespace

std::vector<LabeledExample> build_example_sequence(const FeatureGraph& g,
                                                   const NodeOrdering& ordering,
                                                   std::uint64_t seed) {
  const ExamplePlan plan = plan_examples(g, ordering, seed);
  std::vector<LabeledExample> seq;
  seq.reserve(2 * g.num_arcs());
  for_each_example(g, plan, [&](NodeId i, NodeId j, int y) { seq.push_back({i, j, y}); });
  return seq;
}

InteractionMatrix naive_estimate(const FeatureGraph& g, const FeatureAssignment& z,
                                 const NaiveSmoothing& smoothing) {
  check_same_nodes(g, z);
  const auto arcs = g.arcs();
  return naive_estimate(arcs, z, smoothing);
}

InteractionMatrix naive_estimate(std::span<const Arc> arcs, const FeatureAssignment& z,
                                 const NaiveSmoothing& smoothing) {
  const std::size_t m = z.num_features();
  const bool floor = std::holds_alternative<FloorSmoothing>(smoothing);
  const double floor_value = floor ? std::get<FloorSmoothing>(smoothing).value : 0.0;
  if (floor && !(floor_value < 0.0 && std::isfinite(floor_value))) {
    throw std::domain_error("floor smoothing value must be finite and negative");
  }

  InteractionMatrix w = InteractionMatrix::filled(m, floor ? floor_value : 0.0);
  auto weight = [&](FeatureId h, FeatureId k, std::uint64_t count) {
    const double p = static_cast<double>(count) /
                     (static_cast<double>(z.owner_count(h)) * static_cast<double>(z.owner_count(k)));
    return floor ? std::log(p) : std::log1p(p);
  };

  if (w.is_dense()) {
    std::vector<std::uint64_t> counts(m * m, 0);
    for (const Arc& a : arcs) {
      if (a.src >= z.num_nodes() || a.dst >= z.num_nodes()) {
        throw std::domain_error("arc endpoint outside the assignment");
      }
      for (FeatureId h : z.features_of(a.src)) {
        std::uint64_t* row = counts.data() + std::size_t{h} * m;
        for (FeatureId k : z.features_of(a.dst)) ++row[k];
      }
    }
    for (FeatureId h = 0; h < m; ++h) {
      for (FeatureId k = 0; k < m; ++k) {
        const std::uint64_t c = counts[std::size_t{h} * m + k];
        if (c > 0) w.set(h, k, weight(h, k, c));
      }
    }
    return w;
  }

  absl::flat_hash_map<std::uint64_t, std::uint64_t> counts;
  for (const Arc& a : arcs) {
    if (a.src >= z.num_nodes() || a.dst >= z.num_nodes()) {
      throw std::domain_error("arc endpoint outside the assignment");
    }
    for (FeatureId h : z.features_of(a.src)) {
      for (FeatureId k : z.features_of(a.dst)) ++counts[std::uint64_t{h} * m + k];
    }
  }
  for (const auto& [key, c] : counts) {
    const auto h = static_cast<FeatureId>(key / m);
    const auto k = static_cast<FeatureId>(key % m);
    w.set(h, k, weight(h, k, c));
  }
  return w;
}

StepOutcome llama_step(InteractionMatrix& w, std::span<const FeatureId> fi,
                       std::span<const FeatureId> fj, int label, const LlamaConfig& cfg) {
  check_kappa(cfg.kappa);
  if (fi.empty() || fj.empty()) return {0.0, false, true};
  const double rho = 1.0 / (static_cast<double>(fi.size()) * static_cast<double>(fj.size()));
  const double mu = score(fi, fj, w);
  const double delta = pa_delta(mu, rho, label, cfg);
  if (delta == 0.0) return {0.0, false, false};
  w.add_block(fi, fj, delta);
  return {delta, true, false};
}

FitResult llama_fit(const FeatureGraph& g, const FeatureAssignment& z, const LlamaConfig& cfg) {
  check_kappa(cfg.kappa);
  check_same_nodes(g, z);
  const ExamplePlan plan = plan_examples(g, cfg.ordering, cfg.seed);
  FitResult fit{InteractionMatrix(z.num_features(), cfg.symmetric), {}};
  auto& diag = fit.diagnostics;
  for_each_example(g, plan, [&](NodeId i, NodeId j, int y) {
    const auto fi = z.features_of(i);
    const auto fj = z.features_of(j);
    if (fi.empty() || fj.empty()) {
      ++diag.skipped;
      return;
    }
    const std::size_t pairs = fi.size() * fj.size();
    const double mu = fit.w.block_sum(fi, fj);
    ++diag.examples_seen;
    diag.radius_sq = std::max(diag.radius_sq, pairs);
    if (is_mistake(mu, y)) ++diag.mistakes;
    const double delta = pa_delta(mu, 1.0 / static_cast<double>(pairs), y, cfg);
    if (delta != 0.0) fit.w.add_block(fi, fj, delta);
  });
  return fit;
}

FitResult perceptron_fit(const FeatureGraph& g, const FeatureAssignment& z,
                         const PerceptronConfig& cfg) {
  if (!(cfg.lambda > 0.0 && cfg.lambda <= 1.0)) {
    throw std::domain_error("perceptron learning rate must lie in (0, 1]");
  }
  check_same_nodes(g, z);
  const ExamplePlan plan = plan_examples(g, cfg.ordering, cfg.seed);
  FitResult fit{InteractionMatrix(z.num_features()), {}};
  auto& diag = fit.diagnostics;
  for_each_example(g, plan, [&](NodeId i, NodeId j, int y) {
    const auto fi = z.features_of(i);
    const auto fj = z.features_of(j);
    if (fi.empty() || fj.empty()) {
      ++diag.skipped;
      return;
    }
    const double mu = fit.w.block_sum(fi, fj);
    ++diag.examples_seen;
    diag.radius_sq = std::max(diag.radius_sq, fi.size() * fj.size());
    if (is_mistake(mu, y)) {
      ++diag.mistakes;
      fit.w.add_block(fi, fj, y * cfg.lambda);
    }
  });
  return fit;
}

double hinge_loss(const InteractionMatrix& w, std::span<const LabeledExample> examples,
                  const FeatureAssignment& z) {
  double loss = 0.0;
  for (const auto& ex : examples) {
    const double s = score(z.features_of(ex.src), z.features_of(ex.dst), w);
    loss += std::max(0.0, 1.0 - ex.label * s);
  }
  return loss;
}

std::size_t radius_sq(std::span<const LabeledExample> examples, const FeatureAssignment& z) {
  std::size_t r2 = 0;
  for (const auto& ex : examples) {
    r2 = std::max(r2, z.features_of(ex.src).size() * z.features_of(ex.dst).size());
  }
  return r2;
}

double min_margin(const InteractionMatrix& w, std::span<const LabeledExample> examples,
                  const FeatureAssignment& z) {
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& ex : examples) {
    margin = std::min(margin, ex.label * score(z.features_of(ex.src), z.features_of(ex.dst), w));
  }
  return margin;
}

double pa_mistake_bound(const InteractionMatrix& w_ref, std::span<const LabeledExample> examples,
                        const FeatureAssignment& z, double kappa) {
  check_kappa(kappa);
  const double r2 = static_cast<double>(radius_sq(examples, z));
  return std::max(r2, 1.0 / kappa) *
         (2.0 * kappa * hinge_loss(w_ref, examples, z) + w_ref.frobenius_sq());
}

}  // namespace featnet
