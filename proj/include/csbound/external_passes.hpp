#pragma once

// Chunked passes that evaluate the binary F map between VectorStores with
// every transfer a single contiguous block.
//
// L00 streams the stored half twice: forward for the outputs whose four
// inputs lie below the fold, then backward (folded) for the rest. L01 and L10
// split the mismatch range recursively into four children; a leaf's inputs
// always form one contiguous window of twice its output size, and the
// windows of all leaves partition the stored half.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "csbound/parallel.hpp"
#include "csbound/triplet_binary.hpp"
#include "csbound/vector_store.hpp"

namespace csbound {

// A loaded stretch [lo, lo + size) of stored elements seen through the fold.
struct Window {
  const double* data;
  std::uint64_t lo;
  std::uint64_t full;
  double shift;

  double operator()(std::uint64_t j) const {
    const std::uint64_t s = j < full / 2 ? j : full - 1 - j;
    return data[s - lo] + shift;
  }
};

struct PassContext {
  unsigned ell;
  ChunkPlan plan;
  unsigned threads = 1;
};

namespace detail {

inline std::vector<double>& scratch(unsigned slot) {
  thread_local std::vector<double> buffers[3];
  return buffers[slot];
}

inline std::span<double> buffer(unsigned slot, std::uint64_t n) {
  auto& b = scratch(slot);
  if (b.size() < n) b.resize(n);
  return std::span<double>(b.data(), n);
}

// Output elements per streaming block: matches a recursion leaf so all
// passes respect the same budget.
inline std::uint64_t stream_block(const PassContext& ctx) {
  return std::max<std::uint64_t>(ctx.plan.chunk_elements, 1);
}

}  // namespace detail

// out[x] = 1 + mean of the four both-advanced successors of x in src,
// for x in [0, quarter).
inline void sequential_l00_pass(VectorStore& src, VectorStore& out, const PassContext& ctx,
                                double shift = 0.0) {
  const PairSpace ps(ctx.ell);
  auto eval = [&](std::uint64_t xs, std::uint64_t xe, const Window& w) {
    auto o = detail::buffer(2, xe - xs);
    parallel::for_slices(xe - xs, ctx.threads, [&](unsigned, std::uint64_t b, std::uint64_t e) {
      for (std::uint64_t k = b; k < e; ++k) {
        o[k] = 1.0 + binary_kernel::advance_both(xs + k, w, ps.full);
      }
    });
    out.write_block(xs, o);
  };

  if (ctx.ell == 1) {
    // One output whose inputs cover the whole stored half.
    auto in = detail::buffer(0, ps.half);
    src.read_block(0, in);
    eval(0, 1, Window{in.data(), 0, ps.full, shift});
    return;
  }
  const std::uint64_t eighth = ps.full / 8;
  const std::uint64_t block = std::max<std::uint64_t>(detail::stream_block(ctx) / 2, 1);
  // Forward: inputs [4xs, 4xe) are stored as is.
  for (std::uint64_t xs = 0; xs < eighth; xs += block) {
    const std::uint64_t xe = std::min(eighth, xs + block);
    auto in = detail::buffer(0, 4 * (xe - xs));
    src.read_block(4 * xs, in);
    eval(xs, xe, Window{in.data(), 4 * xs, ps.full, shift});
  }
  // Folded: logical [4xs, 4xe) is stored reversed at [full - 4xe, full - 4xs).
  for (std::uint64_t xs = eighth; xs < ps.quarter; xs += block) {
    const std::uint64_t xe = std::min(ps.quarter, xs + block);
    auto in = detail::buffer(0, 4 * (xe - xs));
    const std::uint64_t lo = ps.full - 4 * xe;
    src.read_block(lo, in);
    eval(xs, xe, Window{in.data(), lo, ps.full, shift});
  }
}

// L01: outputs [quarter + offset, + num_strs) from src window
// [idx_offset, idx_offset + 2 num_strs), num_strs = 2^(2(l - depth) - 2).
// The root call is (0, 0, 0).
inline void recurse_l01(std::uint64_t offset, std::uint64_t idx_offset, unsigned depth,
                        const PassContext& ctx, VectorStore& src, VectorStore& out,
                        double shift = 0.0) {
  const PairSpace ps(ctx.ell);
  const std::uint64_t n = leaf_outputs(ctx.ell, depth);
  if (depth < ctx.plan.stop_depth) {
    const std::uint64_t q = n / 4;
    recurse_l01(offset, idx_offset, depth + 1, ctx, src, out, shift);
    recurse_l01(offset + q, idx_offset + 4 * q, depth + 1, ctx, src, out, shift);
    recurse_l01(offset + 2 * q, idx_offset + 2 * q, depth + 1, ctx, src, out, shift);
    recurse_l01(offset + 3 * q, idx_offset + 6 * q, depth + 1, ctx, src, out, shift);
    return;
  }
  auto in = detail::buffer(0, 2 * n);
  src.read_block(idx_offset, in);
  const Window w{in.data(), idx_offset, ps.full, shift};
  auto o = detail::buffer(2, n);
  const std::uint64_t x0 = ps.quarter + offset;
  parallel::for_slices(n, ctx.threads, [&](unsigned, std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t k = b; k < e; ++k) o[k] = binary_kernel::advance_b(x0 + k, w, ps.full);
  });
  out.write_block(x0, o);
}

// Deepest L10 level whose leaf fits the same budget as an L01 leaf.
inline unsigned l10_leaf_level(const PassContext& ctx) {
  if (ctx.plan.stop_depth == 0) return 0;
  return std::min(ctx.plan.stop_depth + 1, ctx.ell - 1);
}

// L10 at `level` m >= 1 fixes a's characters 2..m+1 and b's characters 2..m:
// outputs [quarter + offset, + 2^(2l-1-2m)) read the logical window
// [window, window + 2^(2l-2m)), which sits entirely on one side of the fold.
// Level 0 is the whole range against the whole stored half. Results are
// merged into `out` by max, so L01 must have run first.
inline void recurse_l10(std::uint64_t offset, std::uint64_t window, unsigned level,
                        unsigned leaf_level, const PassContext& ctx, VectorStore& src,
                        VectorStore& out, double shift = 0.0) {
  const PairSpace ps(ctx.ell);
  if (level < leaf_level) {
    if (level == 0) {
      // Second character of a: 0 keeps the window below the fold, 1 puts it
      // in the top quarter.
      const std::uint64_t eighth = ps.full / 8;
      recurse_l10(0, ps.quarter, 1, leaf_level, ctx, src, out, shift);
      recurse_l10(eighth, 3 * ps.quarter, 1, leaf_level, ctx, src, out, shift);
      return;
    }
    const std::uint64_t s = std::uint64_t{1} << (2 * ctx.ell - 1 - 2 * level);
    const std::uint64_t w = 2 * s;
    // x children are ordered (b, a) while the window orders (a, b).
    recurse_l10(offset, window, level + 1, leaf_level, ctx, src, out, shift);
    recurse_l10(offset + s / 4, window + w / 2, level + 1, leaf_level, ctx, src, out, shift);
    recurse_l10(offset + s / 2, window + w / 4, level + 1, leaf_level, ctx, src, out, shift);
    recurse_l10(offset + 3 * s / 4, window + 3 * w / 4, level + 1, leaf_level, ctx, src, out,
                shift);
    return;
  }
  std::uint64_t count;
  std::uint64_t lo;
  std::uint64_t span;
  if (level == 0) {
    count = ps.quarter;
    lo = 0;
    span = ps.half;
  } else {
    count = std::uint64_t{1} << (2 * ctx.ell - 1 - 2 * level);
    span = 2 * count;
    lo = window < ps.half ? window : ps.full - window - span;
  }
  auto in = detail::buffer(0, span);
  src.read_block(lo, in);
  const Window w{in.data(), lo, ps.full, shift};
  const std::uint64_t x0 = ps.quarter + offset;
  auto o = detail::buffer(2, count);
  out.read_block(x0, o);
  parallel::for_slices(count, ctx.threads, [&](unsigned, std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t k = b; k < e; ++k) {
      o[k] = std::max(o[k], binary_kernel::advance_a(x0 + k, w, ps.full));
    }
  });
  out.write_block(x0, o);
}

// out = F(v1 + shift1, v0 + shift0) on the stored half.
inline void external_apply_F(VectorStore& v1, VectorStore& v0, VectorStore& out,
                             const PassContext& ctx, double shift1 = 0.0, double shift0 = 0.0) {
  sequential_l00_pass(v0, out, ctx, shift0);
  recurse_l01(0, 0, 0, ctx, v1, out, shift1);
  recurse_l10(0, 0, 0, l10_leaf_level(ctx), ctx, v1, out, shift1);
  out.flush();
}

// max over i of f(a[i], b[i]), streamed in blocks.
template <class Fn>
double stream_max(VectorStore& a, VectorStore& b, const PassContext& ctx, Fn&& f) {
  const std::uint64_t n = a.size();
  const std::uint64_t block = detail::stream_block(ctx);
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < n; s += block) {
    const std::uint64_t e = std::min(n, s + block);
    auto x = detail::buffer(0, e - s);
    auto y = detail::buffer(1, e - s);
    a.read_block(s, x);
    b.read_block(s, y);
    best = std::max(best, parallel::max_over_slices(e - s, ctx.threads,
                                                    [&](std::uint64_t i0, std::uint64_t i1) {
                                                      double m =
                                                          -std::numeric_limits<double>::infinity();
                                                      for (std::uint64_t i = i0; i < i1; ++i) {
                                                        m = std::max(m, f(x[i], y[i]));
                                                      }
                                                      return m;
                                                    }));
  }
  return best;
}

}  // namespace csbound
