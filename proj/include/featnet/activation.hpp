#pragma once

#include <variant>

namespace featnet {

// (e^{k (theta - x)} + 1)^{-1}; k controls smoothness.
struct Sigmoid {
  double theta = 0.0;
  double k = 5.0;
};

// 1 if x > threshold, 0 otherwise.
struct Step {
  double threshold = 0.0;
};

// min(1, e^x)
struct ExpClipped {};

using ActivationSpec = std::variant<Sigmoid, Step, ExpClipped>;

// Throws std::domain_error unless k > 0 and both parameters are finite.
Sigmoid make_sigmoid(double theta, double k);

// Maps x into [0, 1]; monotone non-decreasing for a fixed spec.
double activate(const ActivationSpec& spec, double x);

}  // namespace featnet
