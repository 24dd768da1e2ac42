#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "featnet/activation.hpp"
#include "featnet/features.hpp"
#include "featnet/graph.hpp"
#include "featnet/interaction_matrix.hpp"

namespace featnet {

// Three-parameter (stable) Indian Buffet Process.
//
// Customer i (1-based) takes each existing dish k independently with
// probability (m_k - beta) / (i - 1 + c), where m_k counts earlier takers,
// then tries Poisson(alpha * G(1+c) G(i-1+c+beta) / (G(i+c) G(c+beta))) new
// dishes (G = Gamma). Every customer ends up with Poisson(alpha) dishes in
// distribution; beta = 0, c = 1 recovers the one-parameter IBP.
struct IbpParams {
  double alpha = 3.0;
  double beta = 0.5;  // stability, in [0, 1)
  double c = 0.0;     // concentration, > -beta
  std::uint64_t seed = 0;
};

// Feature ids follow dish creation order. Throws std::domain_error on bad parameters.
FeatureAssignment ibp_sample(std::size_t n, const IbpParams& params);

enum class WDistribution {
  BernoulliTen,      // 10 w.p. 10/m, else -1
  NormalMatched,     // normal with the moments of BernoulliTen
  BernoulliOne,      // 1 w.p. 1/m, else -1
  NormalMatchedOne,  // normal with the moments of BernoulliOne
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Analytic entry moments for the given feature count.
Moments w_moments(WDistribution dist, std::size_t m);

// i.i.d. entries. Throws std::domain_error when m is below the distribution's minimum
// (10 for the "ten" laws, 1 for the "one" laws).
InteractionMatrix sample_w(std::size_t m, WDistribution dist, std::uint64_t seed);

// Each ordered pair (self-loops included) becomes an arc independently with
// probability activate(spec, score). Step activations use no randomness.
FeatureGraph realize_graph(const FeatureAssignment& z, const InteractionMatrix& w,
                           const ActivationSpec& spec, std::uint64_t seed);

struct GraphFamilySpec {
  std::size_t n = 10000;
  ActivationSpec activation = Sigmoid{};
  WDistribution wdist = WDistribution::BernoulliTen;
  IbpParams ibp;
  std::uint64_t seed = 0;  // master seed; ibp.seed is ignored in favor of derived streams
};

struct GeneratedGraph {
  FeatureAssignment z;
  InteractionMatrix w;
  FeatureGraph graph;
};

// Presets: {sigmoid|s, step|chi, exp} x {bernoulli|b, normal|n}, e.g. "chi-bernoulli".
// The exp families switch to the "one" distributions. Throws std::domain_error on unknown names.
GraphFamilySpec family_preset(std::string_view name, std::size_t n, std::uint64_t seed);

// `count` independent replicates from derived seeds. Throws std::domain_error if count == 0.
std::vector<GeneratedGraph> generate_family(const GraphFamilySpec& spec, std::size_t count);

// Replicate `index` alone, identical to generate_family(spec, index + 1)[index].
GeneratedGraph generate_replicate(const GraphFamilySpec& spec, std::size_t index);

}  // namespace featnet
