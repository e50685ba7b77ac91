#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "csbound/errors.hpp"
#include "csbound/triplet_binary.hpp"
#include "csbound/triplet_general.hpp"
#include "support.hpp"

using namespace csbound;
using namespace csbound::testing;

namespace {

std::vector<double> random_half(unsigned ell, std::mt19937_64& rng) {
  return random_vector(half_size(ell), rng, 0.0, 4.0);
}

TEST(PairSpace, Sizes) {
  const PairSpace ps(3);
  EXPECT_EQ(ps.full, 64u);
  EXPECT_EQ(ps.half, 32u);
  EXPECT_EQ(ps.quarter, 16u);
  EXPECT_EQ(ps.fold(31), 31u);
  EXPECT_EQ(ps.fold(32), 31u);
  EXPECT_EQ(ps.fold(63), 0u);
  EXPECT_THROW(PairSpace(0), ConfigError);
  EXPECT_THROW(PairSpace(32), ConfigError);
}

TEST(HalfView, FoldsAndShifts) {
  const std::vector<double> v = {1.0, 2.0};
  const HalfView h(v, 1, 0.5);
  EXPECT_EQ(h(0), 1.5);
  EXPECT_EQ(h(1), 2.5);
  EXPECT_EQ(h(2), 2.5);
  EXPECT_EQ(h(3), 1.5);
  EXPECT_THROW(HalfView(v, 2), InvalidInput);
}

TEST(F1Eval, Examples) {
  // Stored half for ell = 1: index 0 is pair (0,0), index 1 is (0,1); the
  // pair (1,1) = 3 folds onto stored 0.
  const std::vector<double> v1 = {0.7, 0.5};
  const std::vector<double> v2 = {0.0, 0.0};
  const HalfView a(v1, 1), b(v2, 1);
  EXPECT_EQ(f1_eval(a, b, PairIndex{3}, 1), 0.0);
  EXPECT_DOUBLE_EQ(f1_eval(a, b, PairIndex{1}, 1), 0.6);
  EXPECT_EQ(f0_eval(a, b, PairIndex{0}, 1), 0.0);
  EXPECT_THROW(f1_eval(a, b, PairIndex{4}, 1), InvalidInput);
}

TEST(F0Eval, IsF1OnTheComplement) {
  std::mt19937_64 rng(1);
  for (unsigned ell = 1; ell <= 4; ++ell) {
    const auto v1 = random_half(ell, rng);
    const auto v2 = random_half(ell, rng);
    const HalfView a(v1, ell), b(v2, ell);
    for (std::uint64_t x = 0; x < bits::pair_space(ell); ++x) {
      const auto cx = complement_index(PairIndex{x}, ell);
      // Same terms summed in the opposite order.
      ASSERT_DOUBLE_EQ(f0_eval(a, b, PairIndex{x}, ell), f1_eval(a, b, cx, ell));
    }
  }
}

TEST(SameFirstBit, Examples) {
  const std::vector<double> v = {0.25, 1.5};
  const HalfView h(v, 1);
  EXPECT_DOUBLE_EQ(same_first_bit(PairIndex{0}, h), 1.0 + (0.25 + 1.5 + 1.5 + 0.25) / 4.0);
  EXPECT_THROW(same_first_bit(PairIndex{1}, h), InvalidInput);

  // ell = 2, x = 3 reads logical 12..15, stored 3, 2, 1, 0.
  const std::vector<double> w = {1, 2, 4, 8, 16, 32, 64, 128};
  const HalfView hw(w, 2);
  EXPECT_DOUBLE_EQ(same_first_bit(PairIndex{3}, hw), 1.0 + (8 + 4 + 2 + 1) / 4.0);
}

TEST(MismatchKernels, Examples) {
  const std::vector<double> v = {0.25, 1.5};
  const HalfView h(v, 1);
  EXPECT_DOUBLE_EQ(different_first_bit(PairIndex{1}, h), 0.5 * (0.25 + 1.5));
  EXPECT_DOUBLE_EQ(l10_value(PairIndex{1}, h), 0.5 * (1.5 + 0.25));
  EXPECT_THROW(different_first_bit(PairIndex{0}, h), InvalidInput);
  EXPECT_THROW(l10_value(PairIndex{2}, h), InvalidInput);

  const std::vector<double> c(half_size(3), 2.75);
  const HalfView hc(c, 3);
  for (std::uint64_t x = 16; x < 32; ++x) {
    EXPECT_EQ(l10_value(PairIndex{x}, hc), 2.75);
    EXPECT_EQ(different_first_bit(PairIndex{x}, hc), 2.75);
  }
}

TEST(Kernels, AgreeWithBranchFormulasExhaustively) {
  std::mt19937_64 rng(2);
  for (unsigned ell = 1; ell <= 4; ++ell) {
    const PairSpace ps(ell);
    const auto v1 = random_half(ell, rng);
    const auto v2 = random_half(ell, rng);
    const HalfView a(v1, ell), b(v2, ell);
    for (std::uint64_t x = 0; x < ps.quarter; ++x) {
      ASSERT_EQ(same_first_bit(PairIndex{x}, b), 1.0 + f1_eval(a, b, PairIndex{x}, ell));
    }
    for (std::uint64_t x = ps.quarter; x < ps.half; ++x) {
      ASSERT_EQ(different_first_bit(PairIndex{x}, a), f0_eval(a, b, PairIndex{x}, ell));
      ASSERT_EQ(l10_value(PairIndex{x}, a), f1_eval(a, b, PairIndex{x}, ell));
    }
  }
}

// Logical indices read by a kernel over the whole mismatch range.
template <class Kernel>
std::map<std::uint64_t, int> reads_over_mismatch(unsigned ell, Kernel kernel) {
  const PairSpace ps(ell);
  std::map<std::uint64_t, int> seen;
  auto record = [&](std::uint64_t j) {
    ++seen[j];
    return 0.0;
  };
  for (std::uint64_t x = ps.quarter; x < ps.half; ++x) kernel(x, record, ps.full);
  return seen;
}

TEST(Kernels, MismatchReadsTouchEachValueOnce) {
  for (unsigned ell = 1; ell <= 6; ++ell) {
    const auto b_reads = reads_over_mismatch(
        ell, [](std::uint64_t x, auto& v, std::uint64_t f) { binary_kernel::advance_b(x, v, f); });
    const auto a_reads = reads_over_mismatch(
        ell, [](std::uint64_t x, auto& v, std::uint64_t f) { binary_kernel::advance_a(x, v, f); });
    EXPECT_EQ(b_reads.size(), half_size(ell));
    EXPECT_EQ(a_reads.size(), half_size(ell));
    for (const auto& [j, n] : b_reads) EXPECT_EQ(n, 1) << "b read " << j;
    for (const auto& [j, n] : a_reads) EXPECT_EQ(n, 1) << "a read " << j;
  }
}

TEST(ApplyFBinary, ZeroInput) {
  const std::vector<double> z = {0.0, 0.0};
  EXPECT_EQ(apply_F_binary(z, z, 1), (std::vector<double>{1.0, 0.0}));
}

TEST(ApplyFBinary, MatchesGeneralEngineBitwise) {
  std::mt19937_64 rng(4);
  for (unsigned ell = 1; ell <= 4; ++ell) {
    const Params p(2, 2, ell);
    for (int trial = 0; trial < 5; ++trial) {
      const auto v1 = random_half(ell, rng);
      const auto v0 = random_half(ell, rng);
      const auto g1 = to_tuple_order(unfold(v1, ell), ell);
      const auto g0 = to_tuple_order(unfold(v0, ell), ell);
      const std::vector<std::span<const double>> vs = {g1, g0};
      const auto general = to_pair_order(apply_F(vs, p), ell);
      const auto binary = apply_F_binary(v1, v0, ell);
      for (std::uint64_t x = 0; x < binary.size(); ++x) {
        ASSERT_EQ(binary[x], general[x]) << "ell " << ell << " x " << x;
        // The general output is complement-symmetric up to summation order,
        // so the fold loses nothing.
        ASSERT_DOUBLE_EQ(general[x], general[bits::pair_space(ell) - 1 - x]);
      }
    }
  }
}

TEST(ApplyFBinary, TranslationInvariantAndMonotone) {
  std::mt19937_64 rng(6);
  for (unsigned ell = 1; ell <= 5; ++ell) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto v1 = random_half(ell, rng);
      const auto v0 = random_half(ell, rng);
      const double c = std::ldexp(static_cast<double>(rng() % 64), -3) - 3.0;
      auto s1 = v1, s0 = v0, u1 = v1;
      for (auto& x : s1) x += c;
      for (auto& x : s0) x += c;
      for (auto& x : u1) x += 0.125;
      const auto base = apply_F_binary(v1, v0, ell);
      const auto shifted = apply_F_binary(s1, s0, ell);
      const auto raised = apply_F_binary(u1, v0, ell);
      for (std::uint64_t x = 0; x < base.size(); ++x) {
        ASSERT_NEAR(shifted[x], base[x] + c, 1e-12);
        ASSERT_LE(base[x], raised[x]);
      }
    }
  }
}

TEST(ApplyFBinary, ThreadCountDoesNotChangeOutput) {
  std::mt19937_64 rng(8);
  const auto v1 = random_half(7, rng);
  const auto v0 = random_half(7, rng);
  const auto one = apply_F_binary(v1, v0, 7, 1);
  EXPECT_EQ(one, apply_F_binary(v1, v0, 7, 2));
  EXPECT_EQ(one, apply_F_binary(v1, v0, 7, 5));
}

TEST(BinaryTriplet, PublishedValues) {
  const std::pair<unsigned, double> cases[] = {{1, 0.666666}, {5, 0.765446}, {10, 0.781281}};
  for (const auto& [ell, value] : cases) {
    const auto r = binary_feasible_triplet_ram(ell, IterationControl{}, std::uint64_t{1} << 30);
    EXPECT_NEAR(r.lower_bound, value, 2e-6) << "ell " << ell;
  }
}

TEST(BinaryTriplet, AgreesWithGeneralEngine) {
  for (unsigned ell = 1; ell <= 4; ++ell) {
    IterationControl c;
    c.n = 120;
    const auto b = binary_feasible_triplet_ram(ell, c, std::uint64_t{1} << 30);
    const auto g = feasible_triplet(Params(2, 2, ell), c);
    EXPECT_EQ(b.r, g.r) << ell;
    EXPECT_EQ(b.epsilon, g.epsilon) << ell;
    EXPECT_EQ(b.best_iteration, g.best_iteration) << ell;
  }
}

TEST(BinaryTriplet, KeptVectorIsACertificate) {
  for (unsigned ell : {2u, 6u}) {
    IterationControl c;
    c.keep_u = true;
    const auto res = binary_feasible_triplet_ram(ell, c, std::uint64_t{1} << 30);
    ASSERT_TRUE(res.u.has_value());
    auto shifted = *res.u;
    for (auto& x : shifted) x += res.r;
    const auto f = apply_F_binary(shifted, *res.u, ell);
    double worst = -1e300;
    for (std::uint64_t x = 0; x < f.size(); ++x) {
      worst = std::max(worst, (*res.u)[x] + 2.0 * res.r - f[x]);
    }
    EXPECT_LE(worst, res.epsilon + 1e-12);
  }
}

TEST(BinaryTriplet, DeterministicAcrossThreads) {
  IterationControl one;
  one.n = 60;
  IterationControl many = one;
  many.threads = 4;
  const auto a = binary_feasible_triplet_ram(8, one, std::uint64_t{1} << 30);
  const auto b = binary_feasible_triplet_ram(8, many, std::uint64_t{1} << 30);
  EXPECT_EQ(a.r, b.r);
  EXPECT_EQ(a.epsilon, b.epsilon);
}

TEST(BinaryTriplet, RamBudget) {
  EXPECT_EQ(binary_ram_bytes(10), 3u * 8u * (1u << 19));
  EXPECT_THROW(binary_feasible_triplet_ram(10, IterationControl{}, 1 << 20), CapacityError);
}

}  // namespace
