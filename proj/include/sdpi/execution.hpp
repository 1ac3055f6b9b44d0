#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace sdpi {

/// Selects between the OpenMP kernels and the plain serial loops they are
/// checked against. Both paths produce bitwise-identical results.
enum class Execution { serial, parallel };

/// Runs body(i) for i in [0, n). Each index must write only to its own slot;
/// the caller merges afterwards in index order so the result never depends on
/// scheduling. The first exception (by index) is rethrown after the loop.
template <typename Body>
void for_each_index(Execution exec, std::size_t n, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace sdpi
