#pragma once

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

#include "dynsamp/core.hpp"

namespace dynsamp {

unsigned default_workers();

/// Calls body(i) for i = 0..count-1 on up to `workers` threads (0: default).
/// Index i goes to worker i % workers. The first exception is rethrown
/// after all workers finish.
template <typename F>
void parallel_for(Index count, unsigned workers, F&& body) {
  if (count <= 0) return;
  const unsigned n = std::max(1u, std::min<unsigned>(workers ? workers : default_workers(),
                                                     static_cast<unsigned>(count)));
  std::vector<std::exception_ptr> failures(n);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (Index i = w; i < count; i += n) body(i);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : failures)
    if (e) std::rethrow_exception(e);
}

}  // namespace dynsamp
