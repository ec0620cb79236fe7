#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace fwiforge {

/// Runs body(i) for i in [0, n) on the OpenMP pool. Exceptions cannot cross
/// an OpenMP region, so the first one thrown is captured and rethrown here.
/// Inside an enclosing parallel region this runs serially (no nesting).
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr first;
  std::mutex guard;
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(guard);
      if (!first) first = std::current_exception();
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace fwiforge
