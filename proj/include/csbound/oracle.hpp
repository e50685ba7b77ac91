#pragma once

// Ground truth for the bounds: exact LCS lengths, exact expectations over all
// tuples for tiny n, and Monte-Carlo estimates of E[LCS]/n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "csbound/errors.hpp"
#include "csbound/parallel.hpp"
#include "csbound/params.hpp"
#include "csbound/tuple_codec.hpp"

namespace csbound {

// Largest dynamic-programming table lcs_length will fill for d >= 3.
inline constexpr std::uint64_t kMaxLcsCells = std::uint64_t{1} << 33;
// Largest slab (all dimensions but the first) kept in memory at once.
inline constexpr std::uint64_t kMaxLcsSlab = std::uint64_t{1} << 26;
inline constexpr std::uint64_t kMaxEnumeration = 10'000'000;

namespace detail {

// Bit-parallel LCS of two strings: one bit per position of a, updated once
// per character of b.
inline std::uint64_t lcs_pair(const Symbols& a, const Symbols& b) {
  if (a.empty() || b.empty()) return 0;
  const std::size_t words = (a.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> match(256);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto& m = match[a[i]];
    if (m.empty()) m.assign(words, 0);
    m[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  std::vector<std::uint64_t> v(words, ~std::uint64_t{0});
  for (auto c : b) {
    const auto& m = match[c];
    if (m.empty()) continue;
    std::uint64_t carry = 0;
    for (std::size_t w = 0; w < words; ++w) {
      const std::uint64_t u = v[w] & m[w];
      const std::uint64_t sum = v[w] + u + carry;
      carry = (sum < v[w] || (carry && sum == v[w])) ? 1 : 0;
      v[w] = sum | (v[w] & ~m[w]);
    }
  }
  std::uint64_t zeros = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (((v[i / 64] >> (i % 64)) & 1u) == 0) ++zeros;
  }
  return zeros;
}

// d-dimensional table, kept one slab (fixed first index) at a time.
inline std::uint64_t lcs_table(std::span<const Symbols> s) {
  const std::size_t d = s.size();
  std::vector<std::uint64_t> extent(d), stride(d, 1);
  std::uint64_t cells = 1;
  for (std::size_t j = 0; j < d; ++j) {
    extent[j] = s[j].size() + 1;
    if (cells > kMaxLcsCells / extent[j]) {
      throw CapacityError("LCS table for " + std::to_string(d) +
                          " strings exceeds the limit of " + std::to_string(kMaxLcsCells) +
                          " cells");
    }
    cells *= extent[j];
  }
  for (std::size_t j = d - 1; j-- > 1;) stride[j] = stride[j + 1] * extent[j + 1];
  const std::uint64_t slab = cells / extent[0];
  if (slab > kMaxLcsSlab) {
    throw CapacityError("LCS table slab of " + std::to_string(slab) + " cells exceeds " +
                        std::to_string(kMaxLcsSlab));
  }
  std::vector<std::uint32_t> prev(slab, 0), cur(slab, 0);
  std::vector<std::uint64_t> idx(d, 0);
  for (std::uint64_t i0 = 1; i0 < extent[0]; ++i0) {
    const std::uint8_t c0 = s[0][i0 - 1];
    std::fill(idx.begin(), idx.end(), 0);
    for (std::uint64_t k = 0; k < slab; ++k) {
      bool interior = true;
      bool equal = true;
      for (std::size_t j = 1; j < d; ++j) {
        if (idx[j] == 0) {
          interior = false;
          break;
        }
        if (s[j][idx[j] - 1] != c0) equal = false;
      }
      std::uint32_t value = 0;
      if (interior) {
        if (equal) {
          std::uint64_t diag = k;
          for (std::size_t j = 1; j < d; ++j) diag -= stride[j];
          value = prev[diag] + 1;
        } else {
          value = prev[k];
          for (std::size_t j = 1; j < d; ++j) value = std::max(value, cur[k - stride[j]]);
        }
      }
      cur[k] = value;
      for (std::size_t j = d; j-- > 1;) {
        if (++idx[j] < extent[j]) break;
        idx[j] = 0;
      }
    }
    std::swap(prev, cur);
  }
  return prev[slab - 1];
}

}  // namespace detail

inline std::uint64_t lcs_length(std::span<const Symbols> strings) {
  if (strings.size() < 2) throw InvalidInput("lcs_length needs at least two strings");
  for (const auto& s : strings) {
    if (s.empty()) return 0;
  }
  if (strings.size() == 2) return detail::lcs_pair(strings[0], strings[1]);
  return detail::lcs_table(strings);
}

struct ExactExpectation {
  std::uint64_t numerator = 0;    // reduced
  std::uint64_t denominator = 1;  // reduced
  double value = 0.0;

  std::string to_string() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", value);
    return std::to_string(numerator) + "/" + std::to_string(denominator) + " = " + buf;
  }
};

// E[LCS] over all sigma^(d n) tuples of length-n strings.
inline ExactExpectation exact_expected_lcs(unsigned sigma, unsigned d, unsigned n) {
  if (sigma < 2 || d < 2 || n < 1) {
    throw InvalidInput("exact_expected_lcs needs sigma >= 2, d >= 2, n >= 1");
  }
  std::uint64_t count = 1;
  for (unsigned k = 0; k < d * n; ++k) {
    if (count > kMaxEnumeration / sigma) {
      throw CapacityError("enumerating " + std::to_string(sigma) + "^" + std::to_string(d * n) +
                          " tuples exceeds the limit of " + std::to_string(kMaxEnumeration));
    }
    count *= sigma;
  }
  const Params params(sigma, d, n);
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto tuple = decode_tuple(TupleIndex{i}, params);
    total += lcs_length(tuple);
  }
  const std::uint64_t g = std::gcd(total, count);
  ExactExpectation e;
  e.numerator = total / g;
  e.denominator = count / g;
  e.value = static_cast<double>(total) / static_cast<double>(count);
  return e;
}

struct EstimateResult {
  double mean = 0.0;            // E[LCS] / n
  double standard_error = 0.0;  // of the mean
  std::uint64_t samples = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

inline constexpr const char* kEstimateGenerator = 
    "mt19937_64, sample k seeded with splitmix64(seed + splitmix64(k))";

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform draw in [0, bound) by rejection, identical on every platform.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r < limit) return r % bound;
  }
}

// LCS length of one random sample; sample k always draws from the same stream.
inline std::uint64_t sample_lcs(unsigned sigma, unsigned d, std::uint64_t n, std::uint64_t seed,
                                std::uint64_t sample) {
  std::mt19937_64 rng(splitmix64(seed + splitmix64(sample)));
  std::vector<Symbols> strings(d, Symbols(n));
  for (auto& s : strings) {
    for (auto& c : s) c = static_cast<std::uint8_t>(uniform_below(rng, sigma));
  }
  return lcs_length(strings);
}

inline EstimateResult estimate_gamma(unsigned sigma, unsigned d, std::uint64_t n,
                                     std::uint64_t samples, std::uint64_t seed,
                                     unsigned threads = 1) {
  if (sigma < 2 || sigma > 256) throw InvalidInput("sigma must be in [2, 256]");
  if (d < 2) throw InvalidInput("d must be at least 2");
  if (n < 1) throw InvalidInput("n must be at least 1");
  if (samples < 1) throw InvalidInput("samples must be at least 1");
  std::vector<double> ratio(samples);
  parallel::for_slices(samples, threads, [&](unsigned, std::uint64_t b, std::uint64_t e) {
    for (std::uint64_t k = b; k < e; ++k) {
      ratio[k] = static_cast<double>(sample_lcs(sigma, d, n, seed, k)) / static_cast<double>(n);
    }
  });
  // Reduced in sample order so the worker count cannot change the result.
  double sum = 0.0;
  for (double r : ratio) sum += r;
  const double mean = sum / static_cast<double>(samples);
  double sq = 0.0;
  for (double r : ratio) sq += (r - mean) * (r - mean);
  EstimateResult out;
  out.mean = mean;
  out.standard_error = samples > 1 ? std::sqrt(sq / static_cast<double>(samples - 1) /
                                       static_cast<double>(samples))
                           : 0.0;
  out.samples = samples;
  out.n = n;
  out.seed = seed;
  return out;
}

}  // namespace csbound
