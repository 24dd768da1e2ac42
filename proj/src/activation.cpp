#include "featnet/activation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace featnet {

Sigmoid make_sigmoid(double theta, double k) {
  if (!std::isfinite(theta) || !std::isfinite(k) || !(k > 0.0)) {
    throw std::domain_error("sigmoid needs a finite center and a finite k > 0");
  }
  return Sigmoid{theta, k};
}

double activate(const ActivationSpec& spec, double x) {
  struct Visitor {
    double x;
    double operator()(const Sigmoid& s) const {
      // exp overflow to +inf yields exactly 0, which is the correct limit.
      return 1.0 / (std::exp(s.k * (s.theta - x)) + 1.0);
    }
    double operator()(const Step& s) const { return x > s.threshold ? 1.0 : 0.0; }
    double operator()(const ExpClipped&) const { return std::min(1.0, std::exp(x)); }
  };
  return std::visit(Visitor{x}, spec);
}

}  // namespace featnet
