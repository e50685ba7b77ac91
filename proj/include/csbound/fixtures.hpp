#pragma once

// Published lower bounds used as golden values.

#include <array>
#include <cstdint>
#include <span>

#include "csbound/params.hpp"

namespace csbound::fixtures {

// Accepted distance between a computed bound and a published one. Covers
// both truncated and rounded publication of the sixth decimal.
inline constexpr double kTolerance = 2e-6;

// Binary bounds by string length 1..21 (truncated to six decimals).
inline constexpr std::array<double, 21> kBinaryByEll = {
    0.666666, 0.727272, 0.747922, 0.758576, 0.765446, 0.770273, 0.773975,
    0.776860, 0.779259, 0.781281, 0.783005, 0.784515, 0.785841, 0.787017,
    0.788071, 0.789021, 0.789882, 0.790668, 0.791389, 0.792052, 0.792665,
};

inline constexpr unsigned kBinaryGatedEll = 13;

struct GoldenCell {
  unsigned sigma;
  unsigned d;
  unsigned ell;
  double published;
  // Value the check uses; differs from `published` only for misprints.
  double expected;
  const char* erratum;
};

// Every (sigma, d, ell) cell of the complete general results.
inline constexpr GoldenCell kGeneralCells[] = {
    {2, 2, 1, 0.666666, 0.666666, nullptr},
    {3, 2, 1, 0.500000, 0.500000, nullptr},
    {4, 2, 1, 0.400000, 0.400000, nullptr},
    {5, 2, 1, 0.333333, 0.333333, nullptr},
    {6, 2, 1, 0.285714, 0.285714, nullptr},
    {7, 2, 1, 0.250000, 0.250000, nullptr},
    {8, 2, 1, 0.222222, 0.222222, nullptr},
    {9, 2, 1, 0.200000, 0.200000, nullptr},
    {10, 2, 1, 0.181818, 0.181818, nullptr},
    {2, 3, 1, 0.666666, 0.666666, nullptr},
    {3, 3, 1, 0.488372, 0.488372, nullptr},
    {4, 3, 1, 0.384615, 0.384615, nullptr},
    {5, 3, 1, 0.317073, 0.317073, nullptr},
    {6, 3, 1, 0.269662, 0.269662, nullptr},
    {7, 3, 1, 0.234567, 0.234567, nullptr},
    {8, 3, 1, 0.207547, 0.207547, nullptr},
    {9, 3, 1, 0.186104, 0.186104, nullptr},
    {10, 3, 1, 0.168674, 0.168674, nullptr},
    {2, 4, 1, 0.666666, 0.615384, "exceeds the bound this table itself reaches for d=4 at l=6 (0.664722); the l=2..6 entries rise monotonically from 0.643216"},
    {3, 4, 1, 0.450000, 0.450000, nullptr},
    {4, 4, 1, 0.352583, 0.352583, nullptr},
    {5, 4, 1, 0.289398, 0.289398, nullptr},
    {6, 4, 1, 0.245283, 0.245283, nullptr},
    {7, 4, 1, 0.212786, 0.212786, nullptr},
    {8, 4, 1, 0.187869, 0.187869, nullptr},
    {9, 4, 1, 0.168164, 0.168164, nullptr},
    {10, 4, 1, 0.152193, 0.152193, nullptr},
    {2, 5, 1, 0.666666, 0.615384, "exceeds every larger-l entry for d=5, which rise from 0.626506; the l=1 column repeats each even-d value at the next odd d"},
    {3, 5, 1, 0.432494, 0.432494, nullptr},
    {4, 5, 1, 0.335517, 0.335517, nullptr},
    {5, 5, 1, 0.273884, 0.273884, nullptr},
    {6, 5, 1, 0.231234, 0.231234, nullptr},
    {7, 5, 1, 0.200004, 0.200004, nullptr},
    {2, 6, 1, 0.592592, 0.592592, nullptr},
    {3, 6, 1, 0.421434, 0.421436, "the l=1 value this method is known to give for sigma=3, d=6 is 0.421436, the published earlier bound"},
    {4, 6, 1, 0.324014, 0.324014, nullptr},
    {5, 6, 1, 0.263369, 0.263369, nullptr},
    {2, 7, 1, 0.592592, 0.592592, nullptr},
    {3, 7, 1, 0.413611, 0.413611, nullptr},
    {4, 7, 1, 0.317032, 0.317032, nullptr},
    {2, 8, 1, 0.579185, 0.579185, nullptr},
    {3, 8, 1, 0.405539, 0.405539, nullptr},
    {2, 9, 1, 0.579185, 0.579185, nullptr},
    {3, 9, 1, 0.400949, 0.400949, nullptr},
    {2, 10, 1, 0.570155, 0.570155, nullptr},
    {2, 11, 1, 0.570155, 0.570155, nullptr},
    {2, 12, 1, 0.563566, 0.563566, nullptr},
    {2, 13, 1, 0.563566, 0.563566, nullptr},
    {2, 14, 1, 0.558494, 0.558494, nullptr},
    {2, 15, 1, 0.558494, 0.558494, nullptr},
    {2, 2, 2, 0.727273, 0.727273, nullptr},
    {3, 2, 2, 0.620690, 0.620690, nullptr},
    {4, 2, 2, 0.542373, 0.542373, nullptr},
    {5, 2, 2, 0.480769, 0.480769, nullptr},
    {6, 2, 2, 0.431138, 0.431138, nullptr},
    {7, 2, 2, 0.390438, 0.390438, nullptr},
    {8, 2, 2, 0.356545, 0.356545, nullptr},
    {9, 2, 2, 0.327935, 0.327935, nullptr},
    {10, 2, 2, 0.303490, 0.303490, nullptr},
    {2, 3, 2, 0.673913, 0.673913, nullptr},
    {3, 3, 2, 0.516896, 0.516896, nullptr},
    {4, 3, 2, 0.421518, 0.421518, nullptr},
    {5, 3, 2, 0.356717, 0.356717, nullptr},
    {6, 3, 2, 0.309424, 0.309424, nullptr},
    {7, 3, 2, 0.273275, 0.273275, nullptr},
    {8, 3, 2, 0.244710, 0.244710, nullptr},
    {9, 3, 2, 0.221555, 0.221555, nullptr},
    {10, 3, 2, 0.202402, 0.202402, nullptr},
    {2, 4, 2, 0.643216, 0.643216, nullptr},
    {3, 4, 2, 0.484937, 0.484937, nullptr},
    {4, 4, 2, 0.389008, 0.389008, nullptr},
    {5, 4, 2, 0.324338, 0.324338, nullptr},
    {6, 4, 2, 0.277835, 0.277835, nullptr},
    {7, 4, 2, 0.242798, 0.242798, nullptr},
    {2, 5, 2, 0.626506, 0.626506, nullptr},
    {3, 5, 2, 0.461402, 0.461402, nullptr},
    {4, 5, 2, 0.365329, 0.365329, nullptr},
    {5, 5, 2, 0.302236, 0.302236, nullptr},
    {2, 6, 2, 0.610925, 0.610925, nullptr},
    {3, 6, 2, 0.445434, 0.445434, nullptr},
    {4, 6, 2, 0.349848, 0.349848, nullptr},
    {2, 7, 2, 0.602493, 0.602493, nullptr},
    {3, 7, 2, 0.434514, 0.434514, nullptr},
    {2, 8, 2, 0.594016, 0.594016, nullptr},
    {3, 8, 2, 0.425774, 0.425774, nullptr},
    {2, 9, 2, 0.587900, 0.587900, nullptr},
    {2, 10, 2, 0.582349, 0.582349, nullptr},
    {2, 11, 2, 0.578464, 0.578464, nullptr},
    {2, 12, 2, 0.574269, 0.574269, nullptr},
    {2, 13, 2, 0.571067, 0.571067, nullptr},
    {2, 2, 3, 0.747922, 0.747922, nullptr},
    {3, 2, 3, 0.644966, 0.644966, nullptr},
    {4, 2, 3, 0.573254, 0.573254, nullptr},
    {5, 2, 3, 0.521091, 0.521091, nullptr},
    {6, 2, 3, 0.479452, 0.479452, nullptr},
    {7, 2, 3, 0.444577, 0.444577, nullptr},
    {8, 2, 3, 0.414651, 0.414651, nullptr},
    {9, 2, 3, 0.388537, 0.388537, nullptr},
    {10, 2, 3, 0.365485, 0.365485, nullptr},
    {2, 3, 3, 0.687410, 0.687410, nullptr},
    {3, 3, 3, 0.545373, 0.545373, nullptr},
    {4, 3, 3, 0.457311, 0.457311, nullptr},
    {5, 3, 3, 0.394945, 0.394945, nullptr},
    {6, 3, 3, 0.347798, 0.347798, nullptr},
    {2, 4, 3, 0.651309, 0.651309, nullptr},
    {3, 4, 3, 0.498525, 0.498525, nullptr},
    {4, 4, 3, 0.405702, 0.405702, nullptr},
    {2, 5, 3, 0.632165, 0.632165, nullptr},
    {3, 5, 3, 0.474304, 0.474304, nullptr},
    {2, 6, 3, 0.617761, 0.617761, nullptr},
    {2, 7, 3, 0.607261, 0.607261, nullptr},
    {2, 8, 3, 0.598782, 0.598782, nullptr},
    {2, 9, 3, 0.592177, 0.592177, nullptr},
    {2, 2, 4, 0.758576, 0.758576, nullptr},
    {3, 2, 4, 0.657642, 0.657642, nullptr},
    {4, 2, 4, 0.589484, 0.589484, nullptr},
    {5, 2, 4, 0.539129, 0.539129, nullptr},
    {6, 2, 4, 0.499229, 0.499229, nullptr},
    {7, 2, 4, 0.466481, 0.466481, nullptr},
    {8, 2, 4, 0.438799, 0.438799, nullptr},
    {9, 2, 4, 0.414876, 0.414876, nullptr},
    {10, 2, 4, 0.393811, 0.393811, nullptr},
    {2, 3, 4, 0.692950, 0.692950, nullptr},
    {3, 3, 4, 0.556649, 0.556649, nullptr},
    {4, 3, 4, 0.472979, 0.472979, nullptr},
    {2, 4, 4, 0.657241, 0.657241, nullptr},
    {3, 4, 4, 0.509237, 0.509237, nullptr},
    {2, 5, 4, 0.636022, 0.636022, nullptr},
    {2, 6, 4, 0.621057, 0.621057, nullptr},
    {2, 2, 5, 0.765446, 0.765446, nullptr},
    {3, 2, 5, 0.665874, 0.665874, nullptr},
    {4, 2, 5, 0.599248, 0.599248, nullptr},
    {5, 2, 5, 0.549817, 0.549817, nullptr},
    {2, 3, 5, 0.697737, 0.697737, nullptr},
    {3, 3, 5, 0.564841, 0.564841, nullptr},
    {2, 4, 5, 0.661274, 0.661274, nullptr},
    {2, 5, 5, 0.639248, 0.639248, nullptr},
    {2, 2, 6, 0.770273, 0.770273, nullptr},
    {3, 2, 6, 0.671697, 0.671697, nullptr},
    {4, 2, 6, 0.605786, 0.605786, nullptr},
    {2, 3, 6, 0.701317, 0.701317, nullptr},
    {2, 4, 6, 0.664722, 0.664722, nullptr},
    {2, 2, 7, 0.773975, 0.773975, nullptr},
    {3, 2, 7, 0.676041, 0.676041, nullptr},
    {4, 2, 7, 0.610590, 0.610590, nullptr},
    {2, 3, 7, 0.704473, 0.704473, nullptr},
    {2, 2, 8, 0.776860, 0.776860, nullptr},
    {3, 2, 8, 0.679441, 0.679441, nullptr},
    {4, 2, 8, 0.614333, 0.614333, nullptr},
    {2, 3, 8, 0.707165, 0.707165, nullptr},
    {2, 2, 9, 0.779259, 0.779259, nullptr},
    {3, 2, 9, 0.682218, 0.682218, nullptr},
    {2, 3, 9, 0.709501, 0.709501, nullptr},
    {2, 2, 10, 0.781281, 0.781281, nullptr},
    {2, 3, 10, 0.711548, 0.711548, nullptr},
};

inline std::span<const GoldenCell> general_cells() { return kGeneralCells; }

inline std::uint64_t cell_states(const GoldenCell& c) {
  return Params(c.sigma, c.d, c.ell).state_count();
}

}  // namespace csbound::fixtures
