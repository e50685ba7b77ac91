#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "csbound/tuple_codec.hpp"
#include "csbound/vector_store.hpp"

namespace csbound::testing {

inline std::vector<double> random_vector(std::uint64_t n, std::mt19937_64& rng, double lo = 0.0,
                                         double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

// Full 2^(2l) vector seen through the complement fold of a stored half.
inline std::vector<double> unfold(const std::vector<double>& half, unsigned ell) {
  const std::uint64_t full = bits::pair_space(ell);
  std::vector<double> out(full);
  for (std::uint64_t j = 0; j < full; ++j) out[j] = j < full / 2 ? half[j] : half[full - 1 - j];
  return out;
}

// General-engine index of the pair behind an interleaved index.
inline std::uint64_t tuple_of_pair(std::uint64_t x, unsigned ell) {
  const auto [a, b] = deinterleave_pair(PairIndex{x}, ell);
  return (binary_value(a) << ell) | binary_value(b);
}

// Interleaved layout of a general-engine vector for sigma = 2, d = 2.
inline std::vector<double> to_pair_order(const std::vector<double>& general, unsigned ell) {
  std::vector<double> out(general.size());
  for (std::uint64_t x = 0; x < out.size(); ++x) out[x] = general[tuple_of_pair(x, ell)];
  return out;
}

inline std::vector<double> to_tuple_order(const std::vector<double>& paired, unsigned ell) {
  std::vector<double> out(paired.size());
  for (std::uint64_t x = 0; x < out.size(); ++x) out[tuple_of_pair(x, ell)] = paired[x];
  return out;
}

using Access = RecordingStore::Access;
using Op = RecordingStore::Op;

inline std::vector<Access> only(const std::vector<Access>& log, Op op) {
  std::vector<Access> out;
  for (const auto& a : log) {
    if (a.op == op) out.push_back(a);
  }
  return out;
}

// True when the accesses are pairwise disjoint and exactly cover [lo, hi).
inline bool partitions(std::vector<Access> acc, std::uint64_t lo, std::uint64_t hi) {
  std::sort(acc.begin(), acc.end(), [](const Access& a, const Access& b) { return a.offset < b.offset; });
  std::uint64_t at = lo;
  for (const auto& a : acc) {
    if (a.offset != at || a.count == 0) return false;
    at += a.count;
  }
  return at == hi;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("csbound-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace csbound::testing
