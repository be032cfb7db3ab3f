#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace bitext {

// Order-preserving parallel map: out[i] = fn(i) for i in [0, n). Each worker
// takes a contiguous slice. If several items throw, the exception from the
// lowest index is rethrown, so failures are reported the same way for any
// worker count.
template <typename Out, typename Fn>
std::vector<Out> parallel_map(std::size_t n, std::size_t workers, Fn&& fn) {
  std::vector<Out> out(n);
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::size_t> error_at(workers, n);
  const auto run = [&](std::size_t w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    for (std::size_t i = begin; i < end; ++i) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        error_at[w] = i;
        return;
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
  }
  const auto first = std::min_element(error_at.begin(), error_at.end());
  if (*first < n) std::rethrow_exception(errors[first - error_at.begin()]);
  return out;
}

}  // namespace bitext
