#include "featnet/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace featnet {

std::size_t worker_count() {
  std::size_t cap = 0;
  if (const char* env = std::getenv("FEATNET_THREADS"); env != nullptr && *env != '\0') {
    try {
      cap = std::stoul(env);
    } catch (const std::exception&) {
      cap = 0;
    }
  }
  if (cap == 0) cap = std::max(1u, std::thread::hardware_concurrency());
  return cap;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 finalizer over a mix of both inputs
  std::uint64_t x = master ^ (stream + 0x9e3779b97f4a7c15ULL + (master << 6) + (master >> 2));
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace featnet
