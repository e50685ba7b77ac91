#pragma once

// Feasible-triplet iteration for arbitrary (sigma, d, ell).
//
// For a tuple A and a character z, let N be the positions whose head is not
// z. F_z averages v_{|N|} over all sigma^|N| tuples obtained by dropping the
// head of every string in N and appending a character. The combined map is
//
//   F(v_1..v_d)[A] = b[A] + max_z F_z(v_1..v_d, A)
//
// where b[A] is 1 iff all heads agree. v_1 is the most recent generation.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "csbound/errors.hpp"
#include "csbound/parallel.hpp"
#include "csbound/params.hpp"
#include "csbound/triplet.hpp"
#include "csbound/tuple_codec.hpp"

namespace csbound {

// A generation as seen by F: every lookup returns values[i] + shift. The
// shift realizes F(v + c*1, ...) without materializing the shifted vector.
struct Source {
  std::span<const double> values;
  double shift = 0.0;

  double operator()(std::uint64_t i) const { return values[i] + shift; }
};

class GeneralKernel {
 public:
  static constexpr unsigned kMaxD = 64;

  explicit GeneralKernel(const Params& params)
      : params_(params),
        head_div_(ipow(params.sigma(), params.ell() - 1)) {
    if (params.sigma() > 256) {
      throw ConfigError("general engine supports sigma <= 256, got " +
                        std::to_string(params.sigma()));
    }
    const unsigned d = params.d();
    std::uint64_t w = 1;
    for (unsigned j = d; j-- > 0;) {
      weight_[j] = w;
      w *= params.string_count();
    }
  }

  const Params& params() const { return params_; }

  struct Digits {
    std::array<std::uint64_t, kMaxD> string{};
    std::array<unsigned, kMaxD> head{};
    std::array<std::uint64_t, kMaxD> tail{};
  };

  void decode(std::uint64_t index, Digits& out) const {
    const unsigned d = params_.d();
    for (unsigned j = 0; j < d; ++j) {
      const std::uint64_t s = (index / weight_[j]) % params_.string_count();
      out.string[j] = s;
      out.head[j] = static_cast<unsigned>(s / head_div_);
      out.tail[j] = s % head_div_;
    }
  }

  // Moves dg from index i to i + 1 without divisions.
  void step(Digits& dg) const {
    for (unsigned j = params_.d(); j-- > 0;) {
      if (++dg.tail[j] == head_div_) {
        dg.tail[j] = 0;
        ++dg.head[j];
      }
      if (++dg.string[j] < params_.string_count()) return;
      dg.string[j] = 0;
      dg.head[j] = 0;
    }
  }

  bool same_head(std::uint64_t index) const {
    Digits dg;
    decode(index, dg);
    return all_heads_equal(dg);
  }

  // Mean of src over the tuples where every position in `positions` is
  // advanced (head dropped, one character appended). Appended characters are
  // enumerated with the last listed position varying fastest.
  double mean_advanced(const Source& src, std::uint64_t index, const Digits& dg,
                       std::span<const unsigned> positions) const {
    const unsigned sigma = params_.sigma();
    std::uint64_t base = index;
    for (unsigned j : positions) base -= dg.string[j] * weight_[j];
    for (unsigned j : positions) base += dg.tail[j] * sigma * weight_[j];
    return mean_from_base(src, base, positions);
  }

  // F_z at one index. vs[k] is read when |N| = k + 1.
  double f_z(std::span<const Source> vs, std::uint64_t index, unsigned z) const {
    Digits dg;
    decode(index, dg);
    std::array<unsigned, kMaxD> n{};
    const unsigned count = advanced_positions(dg, z, n);
    if (count == 0) return 0.0;
    return mean_advanced(vs[count - 1], index, dg, std::span<const unsigned>(n.data(), count));
  }

  // Averages shared between states. For a subset N of positions, F_z only
  // depends on the strings outside N and the tails of the strings inside N,
  // so the average can be tabulated once per key. With sigma >= 3 several
  // states share each key; with sigma = 2 only the all-advanced subset (used
  // for characters no string starts with) is worth tabulating. Table entries
  // are summed in the same order as mean_advanced, so both paths agree
  // bitwise.
  struct Prepared {
    bool per_subset = false;
    std::vector<std::uint64_t> offset;  // per subset mask, into storage
    std::vector<double> storage;
  };

  bool uses_subset_tables() const { return params_.sigma() >= 3 && params_.d() <= 20; }

  std::uint64_t table_elements(std::uint64_t mask) const {
    std::uint64_t n = 1;
    for (unsigned j = 0; j < params_.d(); ++j) {
      n *= (mask >> j) & 1u ? head_div_ : params_.string_count();
    }
    return n;
  }

  Prepared prepare(std::span<const Source> vs, unsigned threads) const {
    const std::uint64_t all = (std::uint64_t{1} << params_.d()) - 1;
    Prepared p;
    p.per_subset = uses_subset_tables();
    if (!p.per_subset) {
      p.storage.resize(table_elements(all));
      fill_table(vs, all, p.storage, threads);
      return p;
    }
    p.offset.assign(all + 1, 0);
    std::uint64_t total = 0;
    for (std::uint64_t mask = 1; mask <= all; ++mask) {
      p.offset[mask] = total;
      total += table_elements(mask);
    }
    p.storage.resize(total);
    for (std::uint64_t mask = 1; mask <= all; ++mask) {
      fill_table(vs, mask, std::span<double>(p.storage).subspan(p.offset[mask], table_elements(mask)),
                 threads);
    }
    return p;
  }

  // F at one index given the precomputed b-vector and shared averages.
  double evaluate(std::span<const Source> vs, std::uint64_t index, std::uint8_t b,
                  const Prepared& prepared) const {
    Digits dg;
    decode(index, dg);
    return evaluate(vs, index, dg, b, prepared);
  }

  // Same, with the digits of `index` already decoded.
  double evaluate(std::span<const Source> vs, std::uint64_t index, const Digits& dg,
                  std::uint8_t b, const Prepared& prepared) const {
    const unsigned d = params_.d();
    const std::uint64_t all = (std::uint64_t{1} << d) - 1;

    // F_z depends on z only through N, so it suffices to try the heads that
    // occur plus one absent character (if any). same[z] collects the
    // positions whose head is z; N is its complement.
    std::array<std::uint64_t, 256> same;
    for (unsigned j = 0; j < d; ++j) same[dg.head[j]] = 0;
    for (unsigned j = 0; j < d; ++j) same[dg.head[j]] |= std::uint64_t{1} << j;
    double best = -std::numeric_limits<double>::infinity();
    unsigned distinct = 0;
    std::array<unsigned, kMaxD> n;
    for (unsigned j = 0; j < d; ++j) {
      const unsigned z = dg.head[j];
      if (same[z] == 0) continue;  // already tried
      const std::uint64_t mask = all & ~same[z];
      same[z] = 0;
      ++distinct;
      // An empty N gives the trivial inequality w >= w; it never enters the max.
      if (mask == 0) continue;
      double value;
      if (prepared.per_subset) {
        value = prepared.storage[prepared.offset[mask] + table_key(dg, mask)];
      } else {
        unsigned count = 0;
        for (unsigned i = 0; i < d; ++i) {
          if ((mask >> i) & 1u) n[count++] = i;
        }
        value = mean_advanced(vs[count - 1], index, dg, std::span<const unsigned>(n.data(), count));
      }
      best = std::max(best, value);
    }
    if (distinct < params_.sigma()) {
      const std::uint64_t at = prepared.per_subset ? prepared.offset[all] : 0;
      best = std::max(best, prepared.storage[at + table_key(dg, all)]);
    }
    return static_cast<double>(b) + best;
  }

 private:
  static bool all_heads_equal(const Digits& dg, unsigned d) {
    for (unsigned j = 1; j < d; ++j) {
      if (dg.head[j] != dg.head[0]) return false;
    }
    return true;
  }
  bool all_heads_equal(const Digits& dg) const { return all_heads_equal(dg, params_.d()); }

  unsigned advanced_positions(const Digits& dg, unsigned z,
                              std::array<unsigned, kMaxD>& out) const {
    unsigned count = 0;
    for (unsigned j = 0; j < params_.d(); ++j) {
      if (dg.head[j] != z) out[count++] = j;
    }
    return count;
  }

  // Dense key of a state within the table of subset `mask`: tails for the
  // advanced positions, whole strings elsewhere, position 0 most significant.
  std::uint64_t table_key(const Digits& dg, std::uint64_t mask) const {
    std::uint64_t key = 0;
    std::uint64_t w = 1;
    for (unsigned j = params_.d(); j-- > 0;) {
      if ((mask >> j) & 1u) {
        key += dg.tail[j] * w;
        w *= head_div_;
      } else {
        key += dg.string[j] * w;
        w *= params_.string_count();
      }
    }
    return key;
  }

  void fill_table(std::span<const Source> vs, std::uint64_t mask, std::span<double> table,
                  unsigned threads) const {
    const unsigned d = params_.d();
    std::array<unsigned, kMaxD> pos{};
    unsigned count = 0;
    for (unsigned j = 0; j < d; ++j) {
      if ((mask >> j) & 1u) pos[count++] = j;
    }
    const Source& src = vs[count - 1];
    const std::span<const unsigned> positions(pos.data(), count);
    // Keys are walked with a mixed-radix odometer; unit[j] is the step of
    // base per unit of digit j.
    std::array<std::uint64_t, kMaxD> radix{};
    std::array<std::uint64_t, kMaxD> unit{};
    for (unsigned j = 0; j < d; ++j) {
      const bool advanced = (mask >> j) & 1u;
      radix[j] = advanced ? head_div_ : params_.string_count();
      unit[j] = advanced ? params_.sigma() * weight_[j] : weight_[j];
    }
    parallel::for_slices(table.size(), threads, [&](unsigned, std::uint64_t b, std::uint64_t e) {
      std::array<std::uint64_t, kMaxD> digit{};
      std::uint64_t base = 0;
      std::uint64_t rest = b;
      for (unsigned j = d; j-- > 0;) {
        digit[j] = rest % radix[j];
        rest /= radix[j];
        base += digit[j] * unit[j];
      }
      for (std::uint64_t key = b; key < e; ++key) {
        table[key] = mean_from_base(src, base, positions);
        for (unsigned j = d; j-- > 0;) {
          if (++digit[j] < radix[j]) {
            base += unit[j];
            break;
          }
          digit[j] = 0;
          base -= (radix[j] - 1) * unit[j];
        }
      }
    });
  }

  // Offsets are expanded one position at a time, so the list ends up in
  // odometer order with the last position varying fastest; the sum is then
  // a plain left-to-right accumulation.
  double mean_from_base(const Source& src, std::uint64_t base,
                        std::span<const unsigned> positions) const {
    const unsigned sigma = params_.sigma();
    thread_local std::vector<std::uint64_t> offsets;
    offsets.assign(1, base);
    for (unsigned j : positions) {
      const std::uint64_t w = weight_[j];
      const std::size_t n = offsets.size();
      offsets.resize(n * sigma);
      for (std::size_t t = n; t-- > 0;) {
        const std::uint64_t o = offsets[t];
        for (unsigned c = 0; c < sigma; ++c) offsets[t * sigma + c] = o + c * w;
      }
    }
    double sum = 0.0;
    for (std::uint64_t o : offsets) sum += src(o);
    return sum / static_cast<double>(offsets.size());
  }

  Params params_;
  std::uint64_t head_div_;
  std::array<std::uint64_t, kMaxD> weight_{};
};

inline int same_head_indicator(TupleIndex index, const Params& params) {
  if (index.value >= params.state_count()) {
    throw InvalidInput("tuple index " + std::to_string(index.value) + " out of range");
  }
  return GeneralKernel(params).same_head(index.value) ? 1 : 0;
}

// The b-vector, computed once per run.
inline std::vector<std::uint8_t> same_head_vector(const Params& params, unsigned threads = 1) {
  const GeneralKernel kernel(params);
  std::vector<std::uint8_t> b(params.state_count());
  parallel::for_slices(params.state_count(), threads,
                       [&](unsigned, std::uint64_t begin, std::uint64_t end) {
                         for (std::uint64_t i = begin; i < end; ++i) b[i] = kernel.same_head(i);
                       });
  return b;
}

namespace detail {

inline std::vector<Source> as_sources(std::span<const std::span<const double>> vs,
                                      const Params& params) {
  if (vs.size() != params.d()) {
    throw InvalidInput("expected " + std::to_string(params.d()) + " vectors, got " +
                       std::to_string(vs.size()));
  }
  std::vector<Source> out;
  for (auto v : vs) {
    if (v.size() != params.state_count()) {
      throw InvalidInput("vector length " + std::to_string(v.size()) + " != state count " +
                         std::to_string(params.state_count()));
    }
    out.push_back(Source{v, 0.0});
  }
  return out;
}

}  // namespace detail

// vs is ordered most-recent-first; vs[k] is read when |N| = k + 1.
inline double f_z(std::span<const std::span<const double>> vs, TupleIndex index, unsigned z,
                  const Params& params) {
  if (z >= params.sigma()) throw InvalidInput("character z outside alphabet");
  if (index.value >= params.state_count()) throw InvalidInput("tuple index out of range");
  const auto sources = detail::as_sources(vs, params);
  return GeneralKernel(params).f_z(sources, index.value, z);
}

// Evaluates F into `out` with precomputed b-vector.
inline void apply_F_into(const GeneralKernel& kernel, std::span<const Source> vs,
                         std::span<const std::uint8_t> b, std::span<double> out,
                         unsigned threads) {
  const auto prepared = kernel.prepare(vs, threads);
  parallel::for_slices(out.size(), threads, [&](unsigned, std::uint64_t begin, std::uint64_t end) {
    GeneralKernel::Digits dg;
    kernel.decode(begin, dg);
    for (std::uint64_t i = begin; i < end; ++i) {
      out[i] = kernel.evaluate(vs, i, dg, b[i], prepared);
      kernel.step(dg);
    }
  });
}

inline std::vector<double> apply_F(std::span<const std::span<const double>> vs,
                                   const Params& params, unsigned threads = 1) {
  const auto sources = detail::as_sources(vs, params);
  const GeneralKernel kernel(params);
  const auto b = same_head_vector(params, threads);
  std::vector<double> out(params.state_count());
  apply_F_into(kernel, sources, b, out, threads);
  return out;
}

inline std::uint64_t general_memory_bytes(const Params& params) {
  const std::uint64_t n = params.state_count();
  const std::uint64_t per = sizeof(double);
  const GeneralKernel kernel(params);
  const std::uint64_t all = (std::uint64_t{1} << params.d()) - 1;
  std::uint64_t tables = kernel.table_elements(all);
  if (kernel.uses_subset_tables()) {
    tables = 0;
    for (std::uint64_t mask = 1; mask <= all; ++mask) tables += kernel.table_elements(mask);
  }
  // d+1 generations, the b-vector and the shared averages
  return (params.d() + 1) * n * per + n + tables * per;
}

inline TripletResult feasible_triplet(const Params& params, const IterationControl& control) {
  const unsigned d = params.d();
  BestTracker tracker(d, control);
  const std::uint64_t count_limit = control.memory_budget / ((d + 2) * sizeof(double));
  const std::uint64_t need = params.state_count() > count_limit
                                 ? std::numeric_limits<std::uint64_t>::max()
                                 : general_memory_bytes(params);
  if (need > control.memory_budget) {
    throw CapacityError("general engine needs " + std::to_string(need) +
                        " bytes of RAM, budget is " + std::to_string(control.memory_budget));
  }
  const std::uint64_t count = params.state_count();
  const unsigned threads = control.threads;
  const GeneralKernel kernel(params);
  const auto b = same_head_vector(params, threads);

  // gen[0] is the oldest generation, gen[d] receives the new one.
  std::vector<std::vector<double>> gen(d + 1, std::vector<double>(count, 0.0));
  std::optional<std::vector<double>> u;
  if (control.keep_u) u = gen[0];

  std::vector<Source> sources(d);
  while (!tracker.done()) {
    for (unsigned k = 0; k < d; ++k) sources[k] = Source{gen[d - 1 - k], 0.0};
    auto& next = gen[d];
    const auto& prev = gen[d - 1];
    apply_F_into(kernel, sources, b, next, threads);

    const double R = parallel::max_over_slices(count, threads, [&](std::uint64_t s, std::uint64_t e) {
      double m = -std::numeric_limits<double>::infinity();
      for (std::uint64_t i = s; i < e; ++i) m = std::max(m, next[i] - prev[i]);
      return m;
    });

    // W = v_d + dR - F(v_d + (d-1)R, ..., v_d + R, v_d), reduced without storing W.
    for (unsigned k = 0; k < d; ++k) {
      sources[k] = Source{next, static_cast<double>(d - 1 - k) * R};
    }
    const auto prepared = kernel.prepare(sources, threads);
    const double dR = static_cast<double>(d) * R;
    const double W = parallel::max_over_slices(count, threads, [&](std::uint64_t s, std::uint64_t e) {
      double m = -std::numeric_limits<double>::infinity();
      GeneralKernel::Digits dg;
      kernel.decode(s, dg);
      for (std::uint64_t i = s; i < e; ++i) {
        m = std::max(m, (next[i] + dR) - kernel.evaluate(sources, i, dg, b[i], prepared));
        kernel.step(dg);
      }
      return m;
    });
    const double E = std::max(0.0, W);

    if (tracker.record(R, E) && u) *u = next;
    if (control.on_iteration) control.on_iteration(tracker.report());
    std::rotate(gen.begin(), gen.begin() + 1, gen.end());
  }

  TripletResult result = tracker.result();
  result.u = std::move(u);
  return result;
}

}  // namespace csbound
