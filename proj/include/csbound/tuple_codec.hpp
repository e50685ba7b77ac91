#pragma once

// Encodings between tuples of strings and vector indices.
//
// General case: a d-tuple (a_0, ..., a_{d-1}) of length-ell strings over
// {0..sigma-1} maps to a mixed-radix integer. String 0 is the most
// significant block of ell digits and, inside a string, the head character
// is the most significant digit, so integer order equals lexicographic tuple
// order.
//
// Binary pairs: two binary strings a, b of length ell are interleaved into
// 2*ell bits, a's bit first in every bit pair. Bit 2k+1 holds character
// ell-1-k of a and bit 2k holds character ell-1-k of b, so the two heads sit
// in the top two used bits.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csbound/errors.hpp"
#include "csbound/params.hpp"

namespace csbound {

using Symbols = std::vector<std::uint8_t>;

struct TupleIndex {
  std::uint64_t value = 0;
  auto operator<=>(const TupleIndex&) const = default;
};

struct PairIndex {
  std::uint64_t value = 0;
  auto operator<=>(const PairIndex&) const = default;
};

// Display alphabet used by the CLI and tests: 0-9 then a-z.
inline char symbol_char(std::uint8_t c) {
  return c < 10 ? static_cast<char>('0' + c) : static_cast<char>('a' + (c - 10));
}

inline Symbols parse_symbols(std::string_view text, unsigned sigma) {
  Symbols out;
  out.reserve(text.size());
  for (char ch : text) {
    unsigned v;
    if (ch >= '0' && ch <= '9') {
      v = static_cast<unsigned>(ch - '0');
    } else if (ch >= 'a' && ch <= 'z') {
      v = 10u + static_cast<unsigned>(ch - 'a');
    } else {
      throw InvalidInput(std::string("invalid symbol '") + ch + "'");
    }
    if (v >= sigma) {
      throw InvalidInput(std::string("symbol '") + ch + "' outside alphabet of size " +
                         std::to_string(sigma));
    }
    out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

inline std::string format_symbols(const Symbols& s) {
  std::string out;
  out.reserve(s.size());
  for (auto c : s) out.push_back(symbol_char(c));
  return out;
}

inline TupleIndex encode_tuple(std::span<const Symbols> tuple, const Params& params) {
  if (tuple.size() != params.d()) {
    throw InvalidInput("expected " + std::to_string(params.d()) + " strings, got " +
                       std::to_string(tuple.size()));
  }
  std::uint64_t value = 0;
  for (const auto& s : tuple) {
    if (s.size() != params.ell()) {
      throw InvalidInput("string length " + std::to_string(s.size()) + " != ell " +
                         std::to_string(params.ell()));
    }
    for (auto c : s) {
      if (c >= params.sigma()) {
        throw InvalidInput("character " + std::to_string(c) + " outside alphabet of size " +
                           std::to_string(params.sigma()));
      }
      value = value * params.sigma() + c;
    }
  }
  return TupleIndex{value};
}

inline std::vector<Symbols> decode_tuple(TupleIndex index, const Params& params) {
  if (index.value >= params.state_count()) {
    throw InvalidInput("tuple index " + std::to_string(index.value) + " out of range [0, " +
                       std::to_string(params.state_count()) + ")");
  }
  std::vector<Symbols> out(params.d(), Symbols(params.ell()));
  std::uint64_t rest = index.value;
  for (unsigned j = params.d(); j-- > 0;) {
    for (unsigned k = params.ell(); k-- > 0;) {
      out[j][k] = static_cast<std::uint8_t>(rest % params.sigma());
      rest /= params.sigma();
    }
  }
  return out;
}

namespace bits {

// Bits at odd positions (a's characters) and even positions (b's).
inline constexpr std::uint64_t kOdd = 0xAAAAAAAAAAAAAAAAull;
inline constexpr std::uint64_t kEven = 0x5555555555555555ull;

inline constexpr std::uint64_t pair_space(unsigned ell) { return std::uint64_t{1} << (2 * ell); }

// Spreads the low 32 bits of v onto the even bit positions.
inline constexpr std::uint64_t spread(std::uint64_t v) {
  v &= 0xFFFFFFFFull;
  v = (v | (v << 16)) & 0x0000FFFF0000FFFFull;
  v = (v | (v << 8)) & 0x00FF00FF00FF00FFull;
  v = (v | (v << 4)) & 0x0F0F0F0F0F0F0F0Full;
  v = (v | (v << 2)) & 0x3333333333333333ull;
  v = (v | (v << 1)) & 0x5555555555555555ull;
  return v;
}

inline constexpr std::uint64_t compact(std::uint64_t v) {
  v &= 0x5555555555555555ull;
  v = (v | (v >> 1)) & 0x3333333333333333ull;
  v = (v | (v >> 2)) & 0x0F0F0F0F0F0F0F0Full;
  v = (v | (v >> 4)) & 0x00FF00FF00FF00FFull;
  v = (v | (v >> 8)) & 0x0000FFFF0000FFFFull;
  v = (v | (v >> 16)) & 0x00000000FFFFFFFFull;
  return v;
}

}  // namespace bits

// Binary string as an integer with the head character most significant.
inline std::uint64_t binary_value(const Symbols& s) {
  std::uint64_t v = 0;
  for (auto c : s) {
    if (c > 1) throw InvalidInput("binary string contains character " + std::to_string(c));
    v = (v << 1) | c;
  }
  return v;
}

inline Symbols binary_symbols(std::uint64_t value, unsigned ell) {
  Symbols s(ell);
  for (unsigned k = 0; k < ell; ++k) s[ell - 1 - k] = static_cast<std::uint8_t>((value >> k) & 1u);
  return s;
}

inline PairIndex interleave_values(std::uint64_t a, std::uint64_t b) {
  return PairIndex{(bits::spread(a) << 1) | bits::spread(b)};
}

inline PairIndex interleave_pair(const Symbols& a, const Symbols& b) {
  if (a.size() != b.size()) {
    throw InvalidInput("interleave_pair: lengths differ (" + std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()) + ")");
  }
  if (a.empty() || a.size() > kMaxBinaryEll) {
    throw InvalidInput("interleave_pair: length must be in [1, 31], got " +
                       std::to_string(a.size()));
  }
  return interleave_values(binary_value(a), binary_value(b));
}

inline std::pair<Symbols, Symbols> deinterleave_pair(PairIndex x, unsigned ell) {
  check_binary_ell(ell);
  if (x.value >= bits::pair_space(ell)) {
    throw InvalidInput("pair index " + std::to_string(x.value) + " out of range for ell " +
                       std::to_string(ell));
  }
  return {binary_symbols(bits::compact(x.value >> 1), ell),
          binary_symbols(bits::compact(x.value), ell)};
}

// Index of the pair with both strings complemented.
inline PairIndex complement_index(PairIndex x, unsigned ell) {
  check_binary_ell(ell);
  const std::uint64_t space = bits::pair_space(ell);
  if (x.value >= space) {
    throw InvalidInput("pair index " + std::to_string(x.value) + " out of range for ell " +
                       std::to_string(ell));
  }
  return PairIndex{space - 1 - x.value};
}

}  // namespace csbound
