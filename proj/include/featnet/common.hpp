#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace featnet {

using NodeId = std::uint32_t;
using FeatureId = std::uint32_t;

/// Malformed or inconsistent input data (files, dictionaries, I/O failures).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Not enough non-arc pairs exist to draw the requested negatives.
class InfeasibleSampling : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace featnet
