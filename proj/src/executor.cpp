// SPDX-License-Identifier: Apache-2.0
#include "corgi/executor.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace corgi {

void run_bounded(std::size_t n, std::size_t max_in_flight, const std::function<void(std::size_t)>& task) {
  std::size_t workers = std::min(n, std::max<std::size_t>(1, max_in_flight));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) task(i);
    });
  }
}

}  // namespace corgi
