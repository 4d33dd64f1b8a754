#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>

namespace cylcs {

// Every data-parallel kernel takes an Exec tag. `serial` is the reference
// path kept for testing; `parallel` runs the same per-item body under
// OpenMP. Items are independent and written to fixed slots, so both paths
// produce bit-identical results.
enum class Exec { serial, parallel };

// Runs body(i) for i in [0, count). An exception thrown by any item is
// rethrown on the calling thread after the loop; remaining items are skipped.
template <typename Body>
void for_each_index(Exec exec, std::ptrdiff_t count, Body&& body) {
  if (exec == Exec::serial) {
    for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::atomic<bool> failed{false};
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cylcs
