#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "csbound/errors.hpp"

namespace csbound {

// Integer power with overflow detection. Returns false on overflow.
inline bool checked_pow(std::uint64_t base, unsigned exponent, std::uint64_t& result) {
  std::uint64_t acc = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    if (base != 0 && acc > std::numeric_limits<std::uint64_t>::max() / base) return false;
    acc *= base;
  }
  result = acc;
  return true;
}

inline std::uint64_t ipow(std::uint64_t base, unsigned exponent) {
  std::uint64_t r = 0;
  if (!checked_pow(base, exponent, r)) throw ConfigError("integer power overflows 64 bits");
  return r;
}

// One problem instance: d strings of length ell over {0..sigma-1}.
class Params {
 public:
  static constexpr std::uint64_t kMaxStates = std::uint64_t{1} << 63;

  Params(unsigned sigma, unsigned d, unsigned ell) : sigma_(sigma), d_(d), ell_(ell) {
    if (sigma < 2) throw ConfigError("sigma must be at least 2, got " + std::to_string(sigma));
    if (d < 2) throw ConfigError("d must be at least 2, got " + std::to_string(d));
    if (ell < 1) throw ConfigError("ell must be at least 1, got " + std::to_string(ell));
    std::uint64_t strings = 0;
    std::uint64_t states = 0;
    if (!checked_pow(sigma, ell, strings) || !checked_pow(strings, d, states) ||
        states > kMaxStates) {
      throw ConfigError("sigma^(d*ell) exceeds 2^63 states for sigma=" + std::to_string(sigma) +
                        " d=" + std::to_string(d) + " ell=" + std::to_string(ell));
    }
    string_count_ = strings;
    state_count_ = states;
  }

  unsigned sigma() const { return sigma_; }
  unsigned d() const { return d_; }
  unsigned ell() const { return ell_; }
  // sigma^ell: number of distinct strings of length ell.
  std::uint64_t string_count() const { return string_count_; }
  // sigma^(d*ell): length of a full value vector.
  std::uint64_t state_count() const { return state_count_; }

  bool is_binary_pair() const { return sigma_ == 2 && d_ == 2; }

  friend bool operator==(const Params&, const Params&) = default;

 private:
  unsigned sigma_;
  unsigned d_;
  unsigned ell_;
  std::uint64_t string_count_ = 0;
  std::uint64_t state_count_ = 0;
};

// The binary engine stores 2^(2*ell - 1) values and packs a pair into 2*ell
// bits of a 64-bit word.
inline constexpr unsigned kMaxBinaryEll = 31;

inline void check_binary_ell(unsigned ell) {
  if (ell < 1 || ell > kMaxBinaryEll) {
    throw ConfigError("binary engine requires 1 <= ell <= 31, got " + std::to_string(ell));
  }
}

}  // namespace csbound
