#include "featnet/synthgen.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "featnet/parallel.hpp"

namespace featnet {

namespace {

constexpr std::uint64_t kIbpStream = 11;
constexpr std::uint64_t kWeightStream = 12;
constexpr std::uint64_t kRealizeStream = 13;

}  // namespace

FeatureAssignment ibp_sample(std::size_t n, const IbpParams& params) {
  const double alpha = params.alpha;
  const double beta = params.beta;
  const double c = params.c;
  if (n == 0) throw std::domain_error("IBP needs at least one customer");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::domain_error("IBP alpha must be > 0");
  if (!(beta >= 0.0 && beta < 1.0)) throw std::domain_error("IBP beta must lie in [0, 1)");
  if (!(c > -beta) || !std::isfinite(c)) throw std::domain_error("IBP c must exceed -beta");

  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::size_t> takers;  // m_k per dish
  std::vector<std::vector<FeatureId>> dishes(n);
  const double log_norm = std::lgamma(1.0 + c) - std::lgamma(c + beta);

  for (std::size_t idx = 0; idx < n; ++idx) {
    const double i = static_cast<double>(idx + 1);
    auto& mine = dishes[idx];
    const std::size_t existing = takers.size();
    for (std::size_t k = 0; k < existing; ++k) {
      const double p = (static_cast<double>(takers[k]) - beta) / (i - 1.0 + c);
      if (unit(rng) < p) {
        mine.push_back(static_cast<FeatureId>(k));
        ++takers[k];
      }
    }
    const double rate =
        alpha * std::exp(log_norm + std::lgamma(i - 1.0 + c + beta) - std::lgamma(i + c));
    const std::size_t fresh = std::poisson_distribution<std::size_t>(rate)(rng);
    for (std::size_t t = 0; t < fresh; ++t) {
      mine.push_back(static_cast<FeatureId>(takers.size()));
      takers.push_back(1);
    }
  }
  return FeatureAssignment::from_lists(takers.size(), dishes);
}

Moments w_moments(WDistribution dist, std::size_t m) {
  const double md = static_cast<double>(m);
  const bool ten = dist == WDistribution::BernoulliTen || dist == WDistribution::NormalMatched;
  const double hi = ten ? 10.0 : 1.0;
  const double p = ten ? 10.0 / md : 1.0 / md;
  const double mean = hi * p - (1.0 - p);
  const double second = hi * hi * p + (1.0 - p);
  return {mean, second - mean * mean};
}

InteractionMatrix sample_w(std::size_t m, WDistribution dist, std::uint64_t seed) {
  const bool ten = dist == WDistribution::BernoulliTen || dist == WDistribution::NormalMatched;
  const std::size_t minimum = ten ? 10 : 1;
  if (m < minimum) {
    throw std::domain_error("weight distribution needs at least " + std::to_string(minimum) +
                            " features, got " + std::to_string(m));
  }
  InteractionMatrix w(m);
  std::mt19937_64 rng(seed);
  const double md = static_cast<double>(m);
  switch (dist) {
    case WDistribution::BernoulliTen:
    case WDistribution::BernoulliOne: {
      const double hi = ten ? 10.0 : 1.0;
      std::bernoulli_distribution draw(ten ? 10.0 / md : 1.0 / md);
      for (FeatureId h = 0; h < m; ++h) {
        for (FeatureId k = 0; k < m; ++k) w.set(h, k, draw(rng) ? hi : -1.0);
      }
      break;
    }
    case WDistribution::NormalMatched:
    case WDistribution::NormalMatchedOne: {
      const Moments mo = w_moments(dist, m);
      std::normal_distribution<double> draw(mo.mean, std::sqrt(mo.variance));
      for (FeatureId h = 0; h < m; ++h) {
        for (FeatureId k = 0; k < m; ++k) w.set(h, k, draw(rng));
      }
      break;
    }
  }
  return w;
}

FeatureGraph realize_graph(const FeatureAssignment& z, const InteractionMatrix& w,
                           const ActivationSpec& spec, std::uint64_t seed) {
  if (z.num_features() != w.size()) {
    throw std::domain_error("assignment and matrix disagree on the feature count");
  }
  const std::size_t n = z.num_nodes();
  const std::size_t m = w.size();
  const bool deterministic = std::holds_alternative<Step>(spec);
  std::vector<std::vector<Arc>> rows(n);

  // Row i at a time: row_weights[k] = sum over h in F_i of W[h][k].
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> row_weights(m, 0.0);
    for (FeatureId h : z.features_of(static_cast<NodeId>(i))) {
      for (FeatureId k = 0; k < m; ++k) row_weights[k] += w.get(h, k);
    }
    std::mt19937_64 rng(derive_seed(seed, i));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto& out = rows[i];
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (FeatureId k : z.features_of(static_cast<NodeId>(j))) s += row_weights[k];
      const double p = activate(spec, s);
      const bool arc = deterministic ? p > 0.5 : unit(rng) < p;
      if (arc) out.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
    }
  });

  std::vector<Arc> arcs;
  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  arcs.reserve(total);
  for (auto& r : rows) {
    arcs.insert(arcs.end(), r.begin(), r.end());
    std::vector<Arc>().swap(r);
  }
  return FeatureGraph(n, std::move(arcs));
}

GraphFamilySpec family_preset(std::string_view name, std::size_t n, std::uint64_t seed) {
  const auto dash = name.find('-');
  if (dash == std::string_view::npos) {
    throw std::domain_error("family must look like <activation>-<distribution>, got '" +
                            std::string(name) + "'");
  }
  const std::string_view act = name.substr(0, dash);
  const std::string_view dist = name.substr(dash + 1);
  GraphFamilySpec spec;
  spec.n = n;
  spec.seed = seed;
  bool exp_case = false;
  if (act == "sigmoid" || act == "s") {
    spec.activation = Sigmoid{0.0, 5.0};
  } else if (act == "step" || act == "chi") {
    spec.activation = Step{0.0};
  } else if (act == "exp") {
    spec.activation = ExpClipped{};
    exp_case = true;
  } else {
    throw std::domain_error("unknown activation '" + std::string(act) + "'");
  }
  if (dist == "bernoulli" || dist == "b") {
    spec.wdist = exp_case ? WDistribution::BernoulliOne : WDistribution::BernoulliTen;
  } else if (dist == "normal" || dist == "n") {
    spec.wdist = exp_case ? WDistribution::NormalMatchedOne : WDistribution::NormalMatched;
  } else {
    throw std::domain_error("unknown weight distribution '" + std::string(dist) + "'");
  }
  return spec;
}

GeneratedGraph generate_replicate(const GraphFamilySpec& spec, std::size_t index) {
  const std::uint64_t base = derive_seed(spec.seed, index);
  IbpParams ibp = spec.ibp;
  ibp.seed = derive_seed(base, kIbpStream);
  FeatureAssignment z = ibp_sample(spec.n, ibp);
  InteractionMatrix w = sample_w(z.num_features(), spec.wdist, derive_seed(base, kWeightStream));
  FeatureGraph g = realize_graph(z, w, spec.activation, derive_seed(base, kRealizeStream));
  return {std::move(z), std::move(w), std::move(g)};
}

std::vector<GeneratedGraph> generate_family(const GraphFamilySpec& spec, std::size_t count) {
  if (count == 0) throw std::domain_error("generate_family needs count >= 1");
  std::vector<GeneratedGraph> out;
  out.reserve(count);
  for (std::size_t r = 0; r < count; ++r) out.push_back(generate_replicate(spec, r));
  return out;
}

}  // namespace featnet
