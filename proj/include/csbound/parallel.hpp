#pragma once

// Slice-parallel loops over an index range. Each worker gets one contiguous
// slice; results that need combining are max-reductions, which do not depend
// on the slice boundaries, so any worker count gives bitwise-identical output.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

namespace csbound::parallel {

// 0 means "all hardware threads".
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct Slice {
  std::uint64_t begin;
  std::uint64_t end;
};

inline Slice slice_of(std::uint64_t count, unsigned workers, unsigned k) {
  const std::uint64_t base = count / workers;
  const std::uint64_t extra = count % workers;
  const std::uint64_t begin = k * base + std::min<std::uint64_t>(k, extra);
  return {begin, begin + base + (k < extra ? 1 : 0)};
}

// Calls fn(worker, begin, end) once per non-empty slice of [0, count).
template <class Fn>
void for_slices(std::uint64_t count, unsigned threads, Fn&& fn) {
  unsigned workers = resolve_threads(threads);
  if (count < workers) workers = static_cast<unsigned>(std::max<std::uint64_t>(count, 1));
  if (workers <= 1) {
    if (count > 0) fn(0u, std::uint64_t{0}, count);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned k = 0; k < workers; ++k) {
      pool.emplace_back([&, k] {
        try {
          const Slice s = slice_of(count, workers, k);
          fn(k, s.begin, s.end);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Max-reduction of fn(begin, end) over the slices of [0, count).
template <class Fn>
double max_over_slices(std::uint64_t count, unsigned threads, Fn&& fn) {
  const unsigned workers = resolve_threads(threads);
  std::vector<double> partial(workers, -std::numeric_limits<double>::infinity());
  for_slices(count, threads, [&](unsigned k, std::uint64_t begin, std::uint64_t end) {
    partial[k] = fn(begin, end);
  });
  double best = -std::numeric_limits<double>::infinity();
  for (double p : partial) best = std::max(best, p);
  return best;
}

}  // namespace csbound::parallel
