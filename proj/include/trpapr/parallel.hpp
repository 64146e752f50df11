#ifndef TRPAPR_PARALLEL_HPP
#define TRPAPR_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace trpapr {

/**
 * Runs body(i) for i in [0, count) on up to `workers` threads.
 *
 * Tasks must write only to their own output slot; callers reduce the slots in
 * index order afterwards, so results do not depend on the worker count. If
 * any task throws, the exception of the lowest failing index is rethrown
 * after all workers finish.
 */
template <class Body>
void parallel_for(std::size_t count, std::size_t workers, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) run(i);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace trpapr

#endif  // TRPAPR_PARALLEL_HPP
