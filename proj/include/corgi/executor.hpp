// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <optional>
#include <type_traits>
#include <vector>

namespace corgi {

/// Runs task(i) for every i in [0, n) with at most `max_in_flight` tasks
/// running at once. Tasks must not throw; wrap them (see bounded_map).
void run_bounded(std::size_t n, std::size_t max_in_flight, const std::function<void(std::size_t)>& task);

template <typename R>
struct Outcome {
  std::optional<R> value;
  std::exception_ptr error;

  bool ok() const { return value.has_value(); }
};

/// Results come back in submission order regardless of completion order.
template <typename F>
auto bounded_map(std::size_t n, std::size_t max_in_flight, F&& fn)
    -> std::vector<Outcome<std::invoke_result_t<F&, std::size_t>>> {
  using R = std::invoke_result_t<F&, std::size_t>;
  std::vector<Outcome<R>> out(n);
  run_bounded(n, max_in_flight, [&](std::size_t i) {
    try {
      out[i].value.emplace(fn(i));
    } catch (...) {
      out[i].error = std::current_exception();
    }
  });
  return out;
}

}  // namespace corgi
