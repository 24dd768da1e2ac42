#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "featnet/common.hpp"
#include "featnet/estimators.hpp"
#include "featnet/model.hpp"
#include "support.hpp"

using namespace featnet;

namespace {

std::size_t count_label(const std::vector<LabeledExample>& seq, int label) {
  return static_cast<std::size_t>(
      std::count_if(seq.begin(), seq.end(), [&](const auto& e) { return e.label == label; }));
}

// W[h][k] = log(count / (|N_h| |N_k|)) by enumerating every node pair.
double naive_oracle(const FeatureGraph& g, const FeatureAssignment& z, FeatureId h, FeatureId k) {
  double hits = 0, total = 0;
  for (NodeId i : z.owners_of(h)) {
    for (NodeId j : z.owners_of(k)) {
      total += 1;
      hits += g.has_arc(i, j);
    }
  }
  return std::log(hits / total);
}

}  // namespace

TEST_CASE("example sequence: size, balance and determinism") {
  FeatureGraph g(4, {{0, 1}, {1, 2}, {3, 3}});
  auto seq = build_example_sequence(g, NodeOrdering::random(), 7);
  CHECK(seq.size() == 6);
  CHECK(count_label(seq, 1) == 3);
  CHECK(count_label(seq, -1) == 3);
  CHECK(seq == build_example_sequence(g, NodeOrdering::random(), 7));
  CHECK_THROWS_AS(build_example_sequence(FeatureGraph(3, {}), NodeOrdering::random(), 0),
                  std::domain_error);
}

TEST_CASE("example sequence: exhaustive complement") {
  // n=2 with two arcs leaves exactly two non-arcs; both must be drawn.
  FeatureGraph g(2, {{0, 0}, {1, 1}});
  auto seq = build_example_sequence(g, NodeOrdering::given(), 3);
  std::set<std::pair<NodeId, NodeId>> neg;
  for (const auto& e : seq)
    if (e.label < 0) neg.insert({e.src, e.dst});
  CHECK(neg == std::set<std::pair<NodeId, NodeId>>{{0, 1}, {1, 0}});

  // n=3 with 5 arcs leaves only 4 non-arcs: too dense.
  FeatureGraph dense3(3, {{0, 0}, {0, 1}, {1, 1}, {2, 2}, {2, 0}});
  CHECK_THROWS_AS(build_example_sequence(dense3, NodeOrdering::random(), 1), InfeasibleSampling);
}

TEST_CASE("example sequence: node order, positives first, negatives are non-arcs") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + t % 17;
    auto g = testsupport::random_graph(n, 0.25, rng);
    if (g.num_arcs() == 0) continue;
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::shuffle(order.begin(), order.end(), rng);
    auto seq = build_example_sequence(g, NodeOrdering::given(order), t);

    REQUIRE(seq.size() == 2 * g.num_arcs());
    CHECK(count_label(seq, 1) == g.num_arcs());
    std::set<std::pair<NodeId, NodeId>> pos, neg;
    for (const auto& e : seq) {
      CHECK((e.label > 0) == g.has_arc(e.src, e.dst));
      (e.label > 0 ? pos : neg).insert({e.src, e.dst});
    }
    CHECK(pos.size() == g.num_arcs());
    CHECK(neg.size() == g.num_arcs());

    // Sources appear in the given order, and within a source positives come first.
    std::vector<std::size_t> rank(n);
    for (std::size_t r = 0; r < n; ++r) rank[order[r]] = r;
    for (std::size_t s = 1; s < seq.size(); ++s) {
      const auto& a = seq[s - 1];
      const auto& b = seq[s];
      CHECK(rank[a.src] <= rank[b.src]);
      if (a.src == b.src) CHECK(a.label >= b.label);
    }
  }
}

TEST_CASE("example sequence: rejects an order that is not a permutation") {
  FeatureGraph g(3, {{0, 1}});
  CHECK_THROWS_AS(build_example_sequence(g, NodeOrdering::given({0, 0, 1}), 0), std::domain_error);
  CHECK_THROWS_AS(build_example_sequence(g, NodeOrdering::given({0, 1}), 0), std::domain_error);
}

TEST_CASE("naive estimator examples") {
  // feature 0 owned by nodes 1, 2; feature 1 owned by 3, 4
  auto z = FeatureAssignment::from_lists(3, {{2}, {0}, {0}, {1}, {1}});
  FeatureGraph g(5, {{1, 3}, {2, 4}});
  auto w = naive_estimate(g, z, FloorSmoothing{});
  CHECK(w.get(0, 1) == doctest::Approx(-0.6931471805599453).epsilon(1e-15));
  CHECK(w.get(1, 0) == -50.0);
  CHECK(w.get(2, 2) == -50.0);

  auto add = naive_estimate(g, z, AddOneSmoothing{});
  CHECK(add.get(1, 0) == 0.0);
  CHECK(add.get(0, 1) == doctest::Approx(std::log(1.5)));

  FeatureGraph full(5, {{1, 3}, {2, 4}, {1, 4}, {2, 3}});
  CHECK(naive_estimate(full, z, FloorSmoothing{}).get(0, 1) == 0.0);
  CHECK(naive_estimate(full, z, FloorSmoothing{-7.5}).get(1, 1) == -7.5);
  CHECK_THROWS_AS(naive_estimate(g, z, FloorSmoothing{0.0}), std::domain_error);
}

TEST_CASE("naive estimator matches pairwise enumeration") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 10; ++t) {
    auto g = testsupport::random_graph(15, 0.2, rng);
    auto z = testsupport::random_assignment(15, 8, 0, 3, rng);
    auto w = naive_estimate(g, z, FloorSmoothing{});
    for (FeatureId h = 0; h < 8; ++h) {
      for (FeatureId k = 0; k < 8; ++k) {
        const double expect = naive_oracle(g, z, h, k);
        if (std::isfinite(expect)) {
          CHECK(w.get(h, k) == doctest::Approx(expect).epsilon(1e-12));
        } else {
          CHECK(w.get(h, k) == -50.0);  // no arcs or no owners
        }
      }
    }
  }
}

TEST_CASE("naive estimator ignores arc order and storage backend") {
  std::mt19937_64 rng(33);
  auto g = testsupport::random_graph(30, 0.15, rng);
  auto z = testsupport::random_assignment(30, 12, 1, 4, rng);
  auto arcs = g.arcs();
  const auto base = naive_estimate(arcs, z, FloorSmoothing{});
  for (int t = 0; t < 5; ++t) {
    std::shuffle(arcs.begin(), arcs.end(), rng);
    CHECK(naive_estimate(arcs, z, FloorSmoothing{}) == base);
    CHECK(naive_estimate(arcs, z, AddOneSmoothing{}) == naive_estimate(g, z, AddOneSmoothing{}));
  }
}

TEST_CASE("llama step traces") {
  LlamaConfig cfg;  // kappa 1.5, no normalization
  std::vector<FeatureId> a{0}, b{1}, ab{0, 1}, c{2};
  {
    InteractionMatrix w(3);
    auto out = llama_step(w, a, b, 1, cfg);
    CHECK(out.delta == 1.0);
    CHECK(out.updated);
    CHECK(w.get(0, 1) == 1.0);
    // now mu = 1: passive
    auto again = llama_step(w, a, b, 1, cfg);
    CHECK(again.delta == 0.0);
    CHECK_FALSE(again.updated);
    CHECK(w.get(0, 1) == 1.0);
  }
  {
    InteractionMatrix w(3);
    CHECK(llama_step(w, ab, c, 1, cfg).delta == 0.5);
    CHECK(w.get(0, 2) == 0.5);
    CHECK(w.get(1, 2) == 0.5);
  }
  {
    InteractionMatrix w(3);
    CHECK(llama_step(w, a, b, -1, cfg).delta == -1.0);
    CHECK(w.get(0, 1) == -1.0);
  }
  {
    // kappa caps the step: mu = -4 on a positive wants 5
    InteractionMatrix w(3);
    w.set(0, 1, -4.0);
    CHECK(llama_step(w, a, b, 1, cfg).delta == 1.5);
  }
  {
    InteractionMatrix w(3);
    std::vector<FeatureId> none;
    auto out = llama_step(w, none, b, 1, cfg);
    CHECK(out.skipped);
    CHECK(w.nonzeros() == 0);
  }
  {
    // row-l2: rho = 1/2, so delta = sqrt(1/2) * min(1.5, 1)
    InteractionMatrix w(3);
    LlamaConfig l2 = cfg;
    l2.normalization = Normalization::RowL2;
    CHECK(llama_step(w, ab, c, 1, l2).delta == doctest::Approx(std::sqrt(0.5)));
  }
  LlamaConfig bad;
  bad.kappa = 0.0;
  InteractionMatrix w(3);
  CHECK_THROWS_AS(llama_step(w, a, b, 1, bad), std::domain_error);
}

TEST_CASE("llama step: passivity and aggressiveness cap") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> val(0.0, 2.0);
  std::uniform_real_distribution<double> kap(0.05, 3.0);
  for (int t = 0; t < 500; ++t) {
    auto z = testsupport::random_assignment(2, 6, 1, 4, rng);
    InteractionMatrix w(6);
    for (FeatureId h = 0; h < 6; ++h)
      for (FeatureId k = 0; k < 6; ++k) w.set(h, k, val(rng));
    LlamaConfig cfg;
    cfg.kappa = kap(rng);
    cfg.normalization = t % 2 ? Normalization::RowL2 : Normalization::None;
    const int y = t % 3 ? 1 : -1;
    auto fi = z.features_of(0), fj = z.features_of(1);
    const double rho = 1.0 / static_cast<double>(fi.size() * fj.size());
    const double mu = score(fi, fj, w);
    const auto out = llama_step(w, fi, fj, y, cfg);
    if (cfg.normalization == Normalization::None) {
      if (y * mu >= 1) CHECK(out.delta == 0.0);
      CHECK(std::abs(out.delta) <= cfg.kappa);
    } else {
      if (y * std::sqrt(rho) * mu >= 1) CHECK(out.delta == 0.0);
      CHECK(std::abs(out.delta) <= std::sqrt(rho) * cfg.kappa + 1e-15);
    }
    CHECK(out.delta * y >= 0.0);
  }
}

TEST_CASE("llama fit: two-step trace") {
  auto z = FeatureAssignment::from_lists(2, {{0}, {1}});
  FeatureGraph g(2, {{0, 1}});
  LlamaConfig cfg;
  cfg.seed = 5;
  auto fit = llama_fit(g, z, cfg);
  auto seq = build_example_sequence(g, cfg.ordering, cfg.seed);
  REQUIRE(seq.size() == 2);
  const auto neg = seq[0].label < 0 ? seq[0] : seq[1];
  CHECK(fit.w.get(0, 1) == 1.0);
  CHECK(fit.w.get(neg.src, neg.dst) == -1.0);  // identity features: ids coincide
  CHECK(fit.w.nonzeros() == 2);
  CHECK(fit.diagnostics.examples_seen == 2);
  CHECK(fit.diagnostics.mistakes == 1);  // the positive at mu = 0
  CHECK(fit.diagnostics.radius_sq == 1);
}

TEST_CASE("llama fit: identity construction classifies its training pairs") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 10; ++t) {
    auto g = testsupport::random_graph(20, 0.2, rng);
    auto z = FeatureAssignment::identity(20);
    LlamaConfig cfg;
    cfg.seed = t;
    auto fit = llama_fit(g, z, cfg);
    auto seq = build_example_sequence(g, cfg.ordering, cfg.seed);
    CHECK(min_margin(fit.w, seq, z) > 0.0);
    CHECK(fit.diagnostics.mistakes <= fit.diagnostics.examples_seen);
  }
}

TEST_CASE("llama fit: support locality, skips and determinism") {
  std::mt19937_64 rng(47);
  auto g = testsupport::random_graph(25, 0.2, rng);
  auto z = testsupport::random_assignment(25, 10, 0, 3, rng);
  LlamaConfig cfg;
  cfg.seed = 99;
  auto fit = llama_fit(g, z, cfg);
  auto seq = build_example_sequence(g, cfg.ordering, cfg.seed);
  std::set<std::pair<FeatureId, FeatureId>> touched;
  std::size_t skipped = 0;
  for (const auto& e : seq) {
    if (z.features_of(e.src).empty() || z.features_of(e.dst).empty()) ++skipped;
    for (FeatureId h : z.features_of(e.src))
      for (FeatureId k : z.features_of(e.dst)) touched.insert({h, k});
  }
  fit.w.for_each_nonzero([&](FeatureId h, FeatureId k, double) { CHECK(touched.count({h, k})); });
  CHECK(fit.diagnostics.skipped == skipped);
  CHECK(fit.diagnostics.examples_seen + skipped == seq.size());
  CHECK(fit.diagnostics.radius_sq == radius_sq(seq, z));

  auto again = llama_fit(g, z, cfg);
  CHECK(again.w == fit.w);
  CHECK(again.diagnostics == fit.diagnostics);
}

TEST_CASE("llama fit: symmetric closure") {
  std::mt19937_64 rng(53);
  std::vector<Arc> arcs;
  std::bernoulli_distribution coin(0.2);
  for (NodeId i = 0; i < 30; ++i)
    for (NodeId j = i; j < 30; ++j)
      if (coin(rng)) {
        arcs.push_back({i, j});
        arcs.push_back({j, i});
      }
  FeatureGraph g(30, arcs);
  auto z = testsupport::random_assignment(30, 9, 1, 3, rng);
  LlamaConfig cfg;
  cfg.symmetric = true;
  auto fit = llama_fit(g, z, cfg);
  CHECK(fit.w.symmetric());
  CHECK(fit.w.asymmetry() == 0.0);

  // Trained pair by pair in both directions through llama_step.
  InteractionMatrix w(9, true);
  LlamaConfig step_cfg;
  step_cfg.symmetric = true;
  for (NodeId i = 0; i < 30; ++i) {
    for (NodeId j : g.successors(i)) {
      if (j < i) continue;
      llama_step(w, z.features_of(i), z.features_of(j), 1, step_cfg);
      llama_step(w, z.features_of(j), z.features_of(i), 1, step_cfg);
    }
  }
  CHECK(w.asymmetry() == 0.0);
}

TEST_CASE("perceptron traces") {
  auto z = FeatureAssignment::from_lists(2, {{0}, {1}});
  FeatureGraph g(2, {{0, 1}});
  auto fit = perceptron_fit(g, z, {0.5, NodeOrdering::given(), 0});
  CHECK(fit.w.get(0, 1) == 0.5);
  CHECK(fit.diagnostics.mistakes == 1);  // only the positive, scored 0

  std::mt19937_64 rng(59);
  auto rg = testsupport::random_graph(20, 0.2, rng);
  auto rz = testsupport::random_assignment(20, 20, 1, 1, rng);
  auto unit = perceptron_fit(rg, rz, {1.0, NodeOrdering::random(), 3});
  unit.w.for_each_nonzero([](FeatureId, FeatureId, double v) { CHECK(v == std::round(v)); });
  CHECK(unit.diagnostics.mistakes <= unit.diagnostics.examples_seen);

  CHECK_THROWS_AS(perceptron_fit(g, z, {0.0, NodeOrdering::random(), 0}), std::domain_error);
  CHECK_THROWS_AS(perceptron_fit(g, z, {1.5, NodeOrdering::random(), 0}), std::domain_error);
}

TEST_CASE("perceptron matches a replay that only moves on mistakes") {
  std::mt19937_64 rng(67);
  auto g = testsupport::random_graph(18, 0.2, rng);
  auto z = testsupport::random_assignment(18, 7, 1, 3, rng);
  const PerceptronConfig cfg{0.25, NodeOrdering::random(), 8};
  auto fit = perceptron_fit(g, z, cfg);
  auto seq = build_example_sequence(g, cfg.ordering, cfg.seed);
  std::vector<std::vector<double>> w(7, std::vector<double>(7, 0.0));
  std::size_t mistakes = 0;
  for (const auto& e : seq) {
    double s = 0;
    for (FeatureId h : z.features_of(e.src))
      for (FeatureId k : z.features_of(e.dst)) s += w[h][k];
    if ((s > 0) == (e.label > 0)) continue;
    ++mistakes;
    for (FeatureId h : z.features_of(e.src))
      for (FeatureId k : z.features_of(e.dst)) w[h][k] += e.label * cfg.lambda;
  }
  CHECK(fit.diagnostics.mistakes == mistakes);
  CHECK(testsupport::dense(fit.w) == w);
}

TEST_CASE("hinge loss and bound examples") {
  auto z = FeatureAssignment::from_lists(2, {{0}, {1}});
  std::vector<LabeledExample> ex{{0, 1, 1}, {1, 0, -1}};
  InteractionMatrix w(2);
  CHECK(hinge_loss(w, ex, z) == 2.0);
  w.set(0, 1, 0.5);
  std::vector<LabeledExample> one{{0, 1, 1}};
  CHECK(hinge_loss(w, one, z) == 0.5);
  w.set(0, 1, 2.0);
  w.set(1, 0, -1.0);
  CHECK(hinge_loss(w, ex, z) == 0.0);
  CHECK(radius_sq(one, z) == 1);

  // Separable with margin, kappa = 1/R^2: bound = R^2 ||W||^2.
  CHECK(pa_mistake_bound(w, ex, z, 1.0) == 5.0);
  // Zero reference: max(R^2, 1/kappa) * 2 kappa |examples|.
  CHECK(pa_mistake_bound(InteractionMatrix(2), ex, z, 0.25) == 4.0 * 2 * 0.25 * 2);
  CHECK_THROWS_AS(pa_mistake_bound(w, ex, z, -1.0), std::domain_error);
}

TEST_CASE("mistake bound on small identity instances") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 5 + t;
    auto g = testsupport::random_graph(n, 0.2, rng);
    if (g.num_arcs() == 0) continue;
    auto z = FeatureAssignment::identity(n);
    InteractionMatrix u(n);
    for (FeatureId h = 0; h < n; ++h)
      for (FeatureId k = 0; k < n; ++k) u.set(h, k, g.has_arc(h, k) ? 1.0 : -1.0);
    LlamaConfig cfg;
    cfg.kappa = 1.0;
    cfg.seed = t;
    auto fit = llama_fit(g, z, cfg);
    auto seq = build_example_sequence(g, cfg.ordering, cfg.seed);
    CHECK(hinge_loss(u, seq, z) == 0.0);
    CHECK(static_cast<double>(fit.diagnostics.mistakes) <= pa_mistake_bound(u, seq, z, 1.0));
  }
}
