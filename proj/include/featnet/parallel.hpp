#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace featnet {

// Worker cap from FEATNET_THREADS (unset or 0 = hardware concurrency).
std::size_t worker_count();

// Runs body(i) for i in [0, count) on up to worker_count() threads.
// The first exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// Deterministic child seed for an independent random stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace featnet
