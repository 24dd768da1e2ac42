// Helpers shared by the unit tests and the acceptance binary.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "featnet/eval.hpp"
#include "featnet/features.hpp"
#include "featnet/graph.hpp"
#include "featnet/interaction_matrix.hpp"

namespace testsupport {

using featnet::Arc;
using featnet::FeatureAssignment;
using featnet::FeatureGraph;
using featnet::FeatureId;
using featnet::InteractionMatrix;
using featnet::NodeId;
using featnet::ScoredPair;

inline FeatureGraph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Arc> arcs;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (coin(rng)) arcs.push_back({i, j});
    }
  }
  return FeatureGraph(n, std::move(arcs));
}

// Each node gets between lo and hi distinct features out of m.
inline FeatureAssignment random_assignment(std::size_t n, std::size_t m, std::size_t lo,
                                           std::size_t hi, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> count(lo, hi);
  std::vector<std::vector<FeatureId>> lists(n);
  std::vector<FeatureId> all(m);
  for (std::size_t h = 0; h < m; ++h) all[h] = static_cast<FeatureId>(h);
  for (auto& l : lists) {
    std::shuffle(all.begin(), all.end(), rng);
    l.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(std::min(count(rng), m)));
  }
  return FeatureAssignment::from_lists(m, lists);
}

// Dense copy of W, the obvious way.
inline std::vector<std::vector<double>> dense(const InteractionMatrix& w) {
  std::vector<std::vector<double>> out(w.size(), std::vector<double>(w.size()));
  for (FeatureId h = 0; h < w.size(); ++h)
    for (FeatureId k = 0; k < w.size(); ++k) out[h][k] = w.get(h, k);
  return out;
}

// Area under the tie-aware PR curve, computed independently of the library.
//
// The ranking is walked one true positive at a time. Within a tie block with
// p positives and q negatives the false-positive count grows by q/p per true
// positive, so over each unit step precision is (t)/(t + fp(t)) with fp affine
// in t. Each unit step is integrated with its exact antiderivative
// x/A - (B/A^2) ln(Ax + B) of x / (Ax + B).
inline double brute_force_aupr(std::vector<ScoredPair> pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const ScoredPair& a, const ScoredPair& b) { return a.score > b.score; });
  double total_pos = 0;
  for (const auto& p : pairs) total_pos += p.label > 0;
  double tp = 0, fp = 0, area = 0;
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    double p = 0, q = 0;
    while (j < pairs.size() && pairs[j].score == pairs[i].score) {
      (pairs[j].label > 0 ? p : q) += 1;
      ++j;
    }
    if (p > 0) {
      const double s = q / p;
      for (int step = 0; step < static_cast<int>(p); ++step) {
        // fp(t) = fp0 + s (t - tp0); precision = t / ((1+s) t + fp0 - s tp0)
        const double t0 = tp + step, t1 = t0 + 1;
        const double A = 1 + s, B = fp - s * tp;
        double piece;
        if (B == 0) {
          piece = (t1 - t0) / A;
        } else {
          auto F = [&](double x) { return x / A - B / (A * A) * std::log(A * x + B); };
          piece = F(t1) - F(t0);
        }
        area += piece;
      }
    }
    tp += p;
    fp += q;
    i = j;
  }
  return area / total_pos;
}

// Adaptive Simpson quadrature, for cross-checking closed forms.
template <class F>
double simpson(F f, double a, double b, double eps, int depth = 40) {
  auto rec = [&](auto&& self, double lo, double hi, double flo, double fmid, double fhi,
                 double whole, double tol, int d) -> double {
    const double mid = (lo + hi) / 2;
    const double lm = (lo + mid) / 2, rm = (mid + hi) / 2;
    const double flm = f(lm), frm = f(rm);
    const double left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
    const double right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
    if (d <= 0 || std::abs(left + right - whole) <= 15 * tol) {
      return left + right + (left + right - whole) / 15;
    }
    return self(self, lo, mid, flo, flm, fmid, left, tol / 2, d - 1) +
           self(self, mid, hi, fmid, frm, fhi, right, tol / 2, d - 1);
  };
  const double fa = f(a), fb = f(b), fm = f((a + b) / 2);
  return rec(rec, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), eps, depth);
}

inline std::vector<ScoredPair> random_scored(std::mt19937_64& rng, std::size_t max_pairs = 30) {
  std::uniform_int_distribution<std::size_t> size(1, max_pairs);
  std::uniform_int_distribution<int> level(0, 5);  // few levels, so ties are common
  std::bernoulli_distribution positive(0.5);
  std::vector<ScoredPair> out(size(rng));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {static_cast<NodeId>(i), 0, static_cast<double>(level(rng)), positive(rng) ? 1 : -1};
  }
  out[std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng)].label = 1;
  return out;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("featnet-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace testsupport
