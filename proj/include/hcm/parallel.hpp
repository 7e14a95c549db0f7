#pragma once

#include <exception>
#include <vector>

namespace hcm {

enum class Exec { Serial, Parallel };

/// out[i] = fn(i) for i in [0, n). Results are indexed, so the output does not
/// depend on scheduling. The first exception (by index) is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(long n, Fn&& fn, Exec exec = Exec::Parallel) {
  std::vector<T> out(static_cast<size_t>(n));
  if (exec == Exec::Serial) {
    for (long i = 0; i < n; ++i) out[static_cast<size_t>(i)] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(static_cast<size_t>(n));
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      out[static_cast<size_t>(i)] = fn(i);
    } catch (...) {
      errors[static_cast<size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace hcm
