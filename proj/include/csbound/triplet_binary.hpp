#pragma once

// The sigma = 2, d = 2 engine on interleaved pair indices.
//
// Only the lower half [0, 2^(2l-1)) of every vector is stored: complementing
// both strings does not change any value, so logical index j >= half reads
// stored index full - 1 - j. Within the stored half the heads are (0,0) for
// x < quarter and (0,1) above it; those ranges are the L00 and mismatch
// loops. The mismatch value is the larger of advancing b (L01) and advancing
// a (L10).
//
// Kernels take any callable lookup(logical index) -> double so the same
// arithmetic runs on whole vectors in RAM and on windows loaded from disk.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csbound/errors.hpp"
#include "csbound/parallel.hpp"
#include "csbound/params.hpp"
#include "csbound/triplet.hpp"
#include "csbound/tuple_codec.hpp"

namespace csbound {

struct PairSpace {
  unsigned ell;
  std::uint64_t full;     // 2^(2l)
  std::uint64_t half;     // stored elements
  std::uint64_t quarter;  // first index with heads (0,1)

  explicit PairSpace(unsigned l) : ell(l), full(0), half(0), quarter(0) {
    check_binary_ell(l);
    full = bits::pair_space(l);
    half = full / 2;
    quarter = full / 4;
  }

  std::uint64_t fold(std::uint64_t j) const { return j < half ? j : full - 1 - j; }
};

inline std::uint64_t half_size(unsigned ell) { return PairSpace(ell).half; }

// Whole stored half in memory, plus a constant added to every lookup.
struct HalfView {
  std::span<const double> values;
  std::uint64_t full = 0;
  double shift = 0.0;

  HalfView(std::span<const double> v, unsigned ell, double s = 0.0)
      : values(v), full(bits::pair_space(ell)), shift(s) {
    if (v.size() != full / 2) {
      throw InvalidInput("half vector for ell " + std::to_string(ell) + " needs " +
                         std::to_string(full / 2) + " elements, got " + std::to_string(v.size()));
    }
  }

  double operator()(std::uint64_t j) const {
    return values[j < values.size() ? j : full - 1 - j] + shift;
  }
};

namespace binary_kernel {

// Both strings advanced: the four appended pairs sit at 4x..4x+3.
template <class V>
double advance_both(std::uint64_t x, const V& v, std::uint64_t full) {
  const std::uint64_t i = (x << 2) & (full - 1);
  return 0.25 * (v(i) + v(i + 1) + v(i + 2) + v(i + 3));
}

// a advanced: a's bits move up one pair, the new character lands in bit 1.
template <class V>
double advance_a(std::uint64_t x, const V& v, std::uint64_t full) {
  const std::uint64_t i = (((x & bits::kOdd) << 2) & (full - 1)) | (x & bits::kEven);
  return 0.5 * (v(i) + v(i | 2));
}

// b advanced: b's head is dropped, the new character lands in bit 0.
template <class V>
double advance_b(std::uint64_t x, const V& v, std::uint64_t full) {
  const std::uint64_t i = (((x & bits::kEven) << 2) & (full - 1)) | (x & bits::kOdd);
  return 0.5 * (v(i) + v(i | 1));
}

}  // namespace binary_kernel

namespace detail {

inline unsigned head_a(std::uint64_t x, unsigned ell) { return (x >> (2 * ell - 1)) & 1u; }
inline unsigned head_b(std::uint64_t x, unsigned ell) { return (x >> (2 * ell - 2)) & 1u; }

inline void check_pair(std::uint64_t x, const PairSpace& ps) {
  if (x >= ps.full) {
    throw InvalidInput("pair index " + std::to_string(x) + " out of range for ell " +
                       std::to_string(ps.ell));
  }
}

}  // namespace detail

// F_1 at any pair x. v1 serves the one-advanced branches, v2 the
// both-advanced branch.
inline double f1_eval(const HalfView& v1, const HalfView& v2, PairIndex x, unsigned ell) {
  const PairSpace ps(ell);
  detail::check_pair(x.value, ps);
  const unsigned ha = detail::head_a(x.value, ell);
  const unsigned hb = detail::head_b(x.value, ell);
  if (ha == 1 && hb == 1) return 0.0;
  if (ha == 0 && hb == 1) return binary_kernel::advance_a(x.value, v1, ps.full);
  if (ha == 1 && hb == 0) return binary_kernel::advance_b(x.value, v1, ps.full);
  return binary_kernel::advance_both(x.value, v2, ps.full);
}

// F_0: as F_1 with the head values exchanged.
inline double f0_eval(const HalfView& v1, const HalfView& v2, PairIndex x, unsigned ell) {
  const PairSpace ps(ell);
  detail::check_pair(x.value, ps);
  const unsigned ha = detail::head_a(x.value, ell);
  const unsigned hb = detail::head_b(x.value, ell);
  if (ha == 0 && hb == 0) return 0.0;
  if (ha == 1 && hb == 0) return binary_kernel::advance_a(x.value, v1, ps.full);
  if (ha == 0 && hb == 1) return binary_kernel::advance_b(x.value, v1, ps.full);
  return binary_kernel::advance_both(x.value, v2, ps.full);
}

inline double same_first_bit(PairIndex x, const HalfView& src) {
  const std::uint64_t quarter = src.full / 4;
  if (x.value >= quarter) {
    throw InvalidInput("same_first_bit needs x < " + std::to_string(quarter));
  }
  return 1.0 + binary_kernel::advance_both(x.value, src, src.full);
}

inline void check_mismatch(PairIndex x, const HalfView& src) {
  if (x.value < src.full / 4 || x.value >= src.full / 2) {
    throw InvalidInput("pair index " + std::to_string(x.value) + " outside the (0,1) head range [" +
                       std::to_string(src.full / 4) + ", " + std::to_string(src.full / 2) + ")");
  }
}

inline double different_first_bit(PairIndex x, const HalfView& src) {
  check_mismatch(x, src);
  return binary_kernel::advance_b(x.value, src, src.full);
}

inline double l10_value(PairIndex x, const HalfView& src) {
  check_mismatch(x, src);
  return binary_kernel::advance_a(x.value, src, src.full);
}

// out = F(v1, v0) on the stored half.
inline void apply_F_binary_into(const HalfView& v1, const HalfView& v0, std::span<double> out,
                                unsigned threads = 1) {
  const std::uint64_t full = v1.full;
  const std::uint64_t quarter = full / 4;
  parallel::for_slices(out.size(), threads, [&](unsigned, std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t x = begin; x < end; ++x) {
      out[x] = x < quarter ? 1.0 + binary_kernel::advance_both(x, v0, full)
                           : std::max(binary_kernel::advance_b(x, v1, full),
                                      binary_kernel::advance_a(x, v1, full));
    }
  });
}

inline std::vector<double> apply_F_binary(std::span<const double> v1, std::span<const double> v0,
                                          unsigned ell, unsigned threads = 1) {
  const HalfView a(v1, ell);
  const HalfView b(v0, ell);
  std::vector<double> out(a.values.size());
  apply_F_binary_into(a, b, out, threads);
  return out;
}

inline double max_difference(std::span<const double> a, std::span<const double> b,
                             unsigned threads) {
  return parallel::max_over_slices(a.size(), threads, [&](std::uint64_t s, std::uint64_t e) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::uint64_t i = s; i < e; ++i) m = std::max(m, a[i] - b[i]);
    return m;
  });
}

// max over x of v2[x] + 2R - F(v2 + R, v2)[x], without storing the F term.
inline double w_max_binary(std::span<const double> v2, double R, unsigned ell, unsigned threads) {
  const HalfView shifted(v2, ell, R);
  const HalfView plain(v2, ell);
  const std::uint64_t full = plain.full;
  const std::uint64_t quarter = full / 4;
  const double twoR = 2.0 * R;
  return parallel::max_over_slices(v2.size(), threads, [&](std::uint64_t s, std::uint64_t e) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::uint64_t x = s; x < e; ++x) {
      const double f = x < quarter ? 1.0 + binary_kernel::advance_both(x, plain, full)
                                   : std::max(binary_kernel::advance_b(x, shifted, full),
                                              binary_kernel::advance_a(x, shifted, full));
      m = std::max(m, (v2[x] + twoR) - f);
    }
    return m;
  });
}

inline std::uint64_t binary_ram_bytes(unsigned ell) {
  return 3 * half_size(ell) * sizeof(double);
}

// RAM-resident binary iteration. v0, v1, v2 rotate by swapping buffers.
// `on_generation` sees every new generation before its E is computed.
inline TripletResult binary_feasible_triplet_ram(
    unsigned ell, const IterationControl& control, std::uint64_t memory_budget,
    const std::function<void(std::uint64_t, std::span<double>)>& on_generation = {}) {
  const std::uint64_t half = half_size(ell);
  if (binary_ram_bytes(ell) > memory_budget) {
    throw CapacityError("binary engine needs " + std::to_string(binary_ram_bytes(ell)) +
                        " bytes of RAM for ell " + std::to_string(ell) + ", budget is " +
                        std::to_string(memory_budget) + "; use disk mode");
  }
  BestTracker tracker(2, control);
  const unsigned threads = control.threads;
  std::vector<double> v0(half, 0.0), v1(half, 0.0), v2(half, 0.0);
  std::optional<std::vector<double>> u;
  if (control.keep_u) u = v0;

  while (!tracker.done()) {
    apply_F_binary_into(HalfView(v1, ell), HalfView(v0, ell), v2, threads);
    if (on_generation) on_generation(tracker.state().iteration + 1, v2);
    const double R = max_difference(v2, v1, threads);
    const double E = std::max(0.0, w_max_binary(v2, R, ell, threads));
    if (tracker.record(R, E) && u) *u = v2;
    if (control.on_iteration) control.on_iteration(tracker.report());
    std::swap(v0, v1);
    std::swap(v1, v2);
  }
  TripletResult result = tracker.result();
  result.u = std::move(u);
  return result;
}

}  // namespace csbound
