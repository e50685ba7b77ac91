#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "csbound/errors.hpp"
#include "csbound/triplet_general.hpp"
#include "support.hpp"

using namespace csbound;
using csbound::testing::random_vector;

namespace {

using Spans = std::vector<std::span<const double>>;

Spans spans_of(const std::vector<std::vector<double>>& vs) { return Spans(vs.begin(), vs.end()); }

std::uint64_t tuple(std::initializer_list<const char*> texts, const Params& p) {
  std::vector<Symbols> s;
  for (const char* t : texts) s.push_back(parse_symbols(t, p.sigma()));
  return encode_tuple(s, p).value;
}

// Direct transcription of the definition: b + max over characters z with a
// nonempty advancing set N of the mean over all completions.
double reference_F(const std::vector<std::vector<double>>& vs, std::uint64_t index,
                   const Params& p) {
  const auto strs = decode_tuple(TupleIndex{index}, p);
  bool same = true;
  for (const auto& s : strs) same = same && s[0] == strs[0][0];
  double best = -std::numeric_limits<double>::infinity();
  for (unsigned z = 0; z < p.sigma(); ++z) {
    std::vector<unsigned> n;
    for (unsigned j = 0; j < p.d(); ++j) {
      if (strs[j][0] != z) n.push_back(j);
    }
    if (n.empty()) continue;
    const auto& src = vs[n.size() - 1];
    const std::uint64_t combos = ipow(p.sigma(), static_cast<unsigned>(n.size()));
    double sum = 0.0;
    for (std::uint64_t c = 0; c < combos; ++c) {
      auto next = strs;
      std::uint64_t rest = c;
      for (std::size_t k = n.size(); k-- > 0;) {
        auto& s = next[n[k]];
        s.erase(s.begin());
        s.push_back(static_cast<std::uint8_t>(rest % p.sigma()));
        rest /= p.sigma();
      }
      sum += src[encode_tuple(next, p).value];
    }
    best = std::max(best, sum / static_cast<double>(combos));
  }
  return (same ? 1.0 : 0.0) + best;
}

std::vector<std::vector<double>> random_generations(const Params& p, std::mt19937_64& rng) {
  std::vector<std::vector<double>> vs;
  for (unsigned k = 0; k < p.d(); ++k) vs.push_back(random_vector(p.state_count(), rng, 0.0, 5.0));
  return vs;
}

TEST(SameHead, Examples) {
  const Params p(2, 2, 1);
  EXPECT_EQ(same_head_indicator(TupleIndex{tuple({"0", "0"}, p)}, p), 1);
  EXPECT_EQ(same_head_indicator(TupleIndex{tuple({"0", "1"}, p)}, p), 0);
  const Params q(3, 3, 2);
  EXPECT_EQ(same_head_indicator(TupleIndex{tuple({"20", "21", "22"}, q)}, q), 1);
  EXPECT_THROW(same_head_indicator(TupleIndex{q.state_count()}, q), InvalidInput);
}

TEST(SameHead, CountIsSigmaPowerDEllMinusDPlusOne) {
  for (const Params p : {Params(2, 2, 1), Params(2, 2, 4), Params(3, 2, 3), Params(3, 3, 2),
                         Params(4, 3, 1), Params(2, 5, 2), Params(5, 2, 2)}) {
    const auto b = same_head_vector(p, 2);
    const auto count = static_cast<std::uint64_t>(std::count(b.begin(), b.end(), 1));
    EXPECT_EQ(count, ipow(p.sigma(), p.d() * p.ell() - p.d() + 1))
        << p.sigma() << " " << p.d() << " " << p.ell();
  }
}

TEST(Fz, HandExample) {
  const Params p(2, 2, 1);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  // |N| = 1 reads the most recent generation only; the older one is poisoned.
  std::vector<double> recent(4, nan);
  recent[tuple({"0", "1"}, p)] = 0.5;
  recent[tuple({"1", "1"}, p)] = 0.7;
  const std::vector<double> older(4, nan);
  const Spans vs = {recent, older};
  EXPECT_DOUBLE_EQ(f_z(vs, TupleIndex{tuple({"0", "1"}, p)}, 1, p), 0.6);
}

TEST(Fz, EmptyAdvancingSetIsZero) {
  std::mt19937_64 rng(3);
  const Params p(3, 3, 2);
  const auto vs = random_generations(p, rng);
  for (std::uint64_t i = 0; i < p.state_count(); ++i) {
    const auto strs = decode_tuple(TupleIndex{i}, p);
    if (strs[0][0] == strs[1][0] && strs[1][0] == strs[2][0]) {
      EXPECT_EQ(f_z(spans_of(vs), TupleIndex{i}, strs[0][0], p), 0.0);
    }
  }
}

TEST(Fz, ReadsOnlyTheGenerationMatchingTheAdvanceCount) {
  // Every generation holds NaN except the one f_z should read.
  std::mt19937_64 rng(5);
  const Params p(3, 3, 1);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::uint64_t i = 0; i < p.state_count(); ++i) {
    for (unsigned z = 0; z < p.sigma(); ++z) {
      const auto strs = decode_tuple(TupleIndex{i}, p);
      unsigned n = 0;
      for (const auto& s : strs) n += s[0] != z;
      if (n == 0) continue;
      std::vector<std::vector<double>> vs(p.d(), std::vector<double>(p.state_count(), nan));
      vs[n - 1] = random_vector(p.state_count(), rng);
      EXPECT_FALSE(std::isnan(f_z(spans_of(vs), TupleIndex{i}, z, p)));
    }
  }
}

TEST(Fz, Errors) {
  const Params p(2, 2, 1);
  const std::vector<double> v(4, 0.0), short_v(3, 0.0);
  EXPECT_THROW(f_z(Spans{v, v}, TupleIndex{0}, 2, p), InvalidInput);
  EXPECT_THROW(f_z(Spans{v, v}, TupleIndex{4}, 0, p), InvalidInput);
  EXPECT_THROW(f_z(Spans{v}, TupleIndex{0}, 0, p), InvalidInput);
  EXPECT_THROW(f_z(Spans{v, short_v}, TupleIndex{0}, 0, p), InvalidInput);
}

TEST(ApplyF, ZeroInputGivesTheSameHeadVector) {
  const Params p(2, 2, 1);
  const std::vector<double> zero(4, 0.0);
  EXPECT_EQ(apply_F(Spans{zero, zero}, p), (std::vector<double>{1, 0, 0, 1}));
}

TEST(ApplyF, MatchesDirectDefinitionBitwise) {
  std::mt19937_64 rng(7);
  // sigma = 2 takes the direct path, sigma >= 3 the tabulated one.
  for (const Params p : {Params(2, 2, 3), Params(2, 3, 2), Params(3, 2, 2), Params(3, 3, 1),
                         Params(4, 2, 2), Params(3, 4, 1), Params(5, 2, 1)}) {
    const auto vs = random_generations(p, rng);
    const auto out = apply_F(spans_of(vs), p);
    for (std::uint64_t i = 0; i < p.state_count(); ++i) {
      ASSERT_EQ(out[i], reference_F(vs, i, p)) << "index " << i;
    }
  }
}

// Monotonicity and translation invariance on random tuples of generations.
class ApplyFProperties : public ::testing::TestWithParam<Params> {};

TEST_P(ApplyFProperties, MonotoneAndTranslationInvariant) {
  const Params p = GetParam();
  std::mt19937_64 rng(p.sigma() * 1000 + p.d() * 10 + p.ell());
  std::uniform_real_distribution<double> bump(0.0, 0.5);
  for (int trial = 0; trial < 1000; ++trial) {
    auto vs = random_generations(p, rng);
    auto us = vs;
    for (auto& u : us) {
      for (auto& x : u) x += (rng() & 1u) ? bump(rng) : 0.0;
    }
    const double c = bump(rng) * 8.0 - 2.0;
    auto shifted = vs;
    for (auto& v : shifted) {
      for (auto& x : v) x += c;
    }
    const auto fv = apply_F(spans_of(vs), p);
    const auto fu = apply_F(spans_of(us), p);
    const auto fs = apply_F(spans_of(shifted), p);
    for (std::uint64_t i = 0; i < p.state_count(); ++i) {
      ASSERT_LE(fv[i], fu[i]);
      ASSERT_NEAR(fs[i], fv[i] + c, 1e-12);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(SmallInstances, ApplyFProperties,
                         ::testing::Values(Params(2, 2, 2), Params(3, 2, 1), Params(2, 3, 1),
                                           Params(3, 3, 1), Params(4, 2, 1)));

TEST(ApplyF, ThreadCountDoesNotChangeOutput) {
  std::mt19937_64 rng(9);
  for (const Params p : {Params(2, 3, 3), Params(3, 3, 2)}) {
    const auto vs = random_generations(p, rng);
    const auto one = apply_F(spans_of(vs), p, 1);
    EXPECT_EQ(one, apply_F(spans_of(vs), p, 2));
    EXPECT_EQ(one, apply_F(spans_of(vs), p, 7));
  }
}

TEST(LowerBoundFrom, Examples) {
  EXPECT_DOUBLE_EQ(lower_bound_from(0.5, 0.0, 2), 1.0);
  EXPECT_NEAR(lower_bound_from(0.4, 0.1, 3), 0.9, 1e-15);
  EXPECT_EQ(lower_bound_from(0.37, 0.37, 4), 0.0);
  EXPECT_THROW(lower_bound_from(0.4, -0.1, 2), InvalidInput);
}

struct Golden {
  unsigned sigma, d, ell;
  double value;
};

TEST(FeasibleTriplet, PublishedValues) {
  for (const Golden g : {Golden{2, 2, 1, 0.666666}, Golden{10, 2, 1, 0.181818},
                         Golden{3, 2, 3, 0.644966}, Golden{2, 3, 2, 0.673913},
                         Golden{2, 6, 1, 0.592592}}) {
    const auto r = feasible_triplet(Params(g.sigma, g.d, g.ell), IterationControl{});
    EXPECT_NEAR(r.lower_bound, g.value, 2e-6) << g.sigma << " " << g.d << " " << g.ell;
    EXPECT_TRUE(r.converged);
  }
}

TEST(FeasibleTriplet, ResultInvariants) {
  for (const Params p : {Params(2, 2, 2), Params(3, 3, 1), Params(2, 4, 1)}) {
    IterationControl c;
    c.n = 40;
    const auto r = feasible_triplet(p, c);
    EXPECT_EQ(r.iterations_run, 40u - p.d() + 1);
    EXPECT_FALSE(r.converged);
    EXPECT_GE(r.epsilon, 0.0);
    EXPECT_LE(r.epsilon, r.r);
    EXPECT_EQ(r.lower_bound, p.d() * (r.r - r.epsilon));
    EXPECT_LE(r.best_iteration, r.iterations_run);
  }
}

TEST(FeasibleTriplet, KeptVectorIsACertificate) {
  // F(u + (d-1)r, ..., u + r, u) >= u + d r - epsilon holds componentwise.
  for (const Params p : {Params(2, 2, 3), Params(3, 2, 2), Params(2, 3, 2), Params(3, 3, 1)}) {
    IterationControl c;
    c.keep_u = true;
    const auto res = feasible_triplet(p, c);
    ASSERT_TRUE(res.u.has_value());
    const auto& u = *res.u;
    std::vector<std::vector<double>> vs;
    for (unsigned k = 0; k < p.d(); ++k) {
      auto v = u;
      for (auto& x : v) x += static_cast<double>(p.d() - 1 - k) * res.r;
      vs.push_back(std::move(v));
    }
    const auto f = apply_F(spans_of(vs), p);
    double worst = -1e300;
    for (std::uint64_t i = 0; i < u.size(); ++i) {
      worst = std::max(worst, u[i] + p.d() * res.r - f[i]);
    }
    EXPECT_LE(worst, res.epsilon + 1e-12);
  }
}

TEST(FeasibleTriplet, ProgressCallbackAndDeterminism) {
  const Params p(3, 2, 2);
  std::vector<IterationReport> seen;
  IterationControl c;
  c.on_iteration = [&](const IterationReport& r) { seen.push_back(r); };
  const auto a = feasible_triplet(p, c);
  ASSERT_EQ(seen.size(), a.iterations_run);
  for (std::size_t k = 0; k < seen.size(); ++k) EXPECT_EQ(seen[k].iteration, k + 1);
  EXPECT_EQ(seen.back().best_bound, a.lower_bound);

  IterationControl c2;
  c2.threads = 3;
  const auto b = feasible_triplet(p, c2);
  EXPECT_EQ(a.r, b.r);
  EXPECT_EQ(a.epsilon, b.epsilon);
  EXPECT_EQ(a.iterations_run, b.iterations_run);
}

TEST(FeasibleTriplet, Limits) {
  IterationControl c;
  c.memory_budget = 1024;
  EXPECT_THROW(feasible_triplet(Params(2, 2, 4), c), CapacityError);
  IterationControl tiny;
  tiny.n = 1;
  EXPECT_THROW(feasible_triplet(Params(2, 2, 1), tiny), InvalidInput);
  EXPECT_THROW(GeneralKernel(Params(257, 2, 1)), ConfigError);
}

}  // namespace
