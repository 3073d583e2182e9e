#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "rmc/errors.hpp"
#include "rmc/sampling.hpp"
#include "rmc/seeding.hpp"

using namespace rmc;

TEST(Sampling, ParseModes) {
  EXPECT_EQ(parse_split_mode("none"), SplitMode::kNoSplit);
  EXPECT_EQ(parse_split_mode("paper"), SplitMode::kPaperLiteral);
  EXPECT_EQ(parse_split_mode("exact"), SplitMode::kExactCoupling);
  EXPECT_THROW(parse_split_mode("bogus"), ArgumentError);
  EXPECT_EQ(to_string(SplitMode::kExactCoupling), "exact");
}

TEST(Sampling, BernoulliRateAndDeterminism) {
  const IndexSet a = bernoulli_sample(200, 150, 0.3, 5);
  const IndexSet b = bernoulli_sample(200, 150, 0.3, 5);
  EXPECT_EQ(a, b);
  const double n = 200.0 * 150.0;
  const double se = std::sqrt(n * 0.3 * 0.7);
  EXPECT_NEAR(static_cast<double>(a.size()), 0.3 * n, 4 * se);
  EXPECT_EQ(bernoulli_sample(7, 9, 1.0, 0).size(), 63u);
  EXPECT_THROW(bernoulli_sample(5, 5, 0.0, 0), ArgumentError);
  EXPECT_THROW(bernoulli_sample(5, 5, 1.5, 0), ArgumentError);
}

TEST(Sampling, PerSetRateInvertsUnion) {
  for (std::size_t t : {1u, 3u, 10u, 57u}) {
    const double q = per_set_rate(0.2, t);
    EXPECT_NEAR(1 - std::pow(1 - q, static_cast<double>(t)), 0.2, 1e-14);
  }
  EXPECT_EQ(per_set_rate(0.4, 1), 0.4);
}

TEST(Sampling, PaperWeightsExact) {
  for (std::size_t t = 1; t <= 10; ++t) {
    const auto q = paper_literal_weights(t);
    ASSERT_EQ(q.size(), t);
    double binom = 1.0, total = std::pow(2.0, static_cast<double>(t)) - 1;
    for (std::size_t r = 1; r <= t; ++r) {
      binom = binom * static_cast<double>(t - r + 1) / static_cast<double>(r);
      EXPECT_EQ(q[r - 1], binom / total) << "t=" << t << " r=" << r;
    }
  }
  double s = 0;
  for (double v : paper_literal_weights(200)) s += v;
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Sampling, NoSplitAliasesInput) {
  const IndexSet omega = bernoulli_sample(20, 20, 0.5, 1);
  const auto sets = split_samples(omega, 0.5, 0.5, 4, SplitMode::kNoSplit, 0);
  ASSERT_EQ(sets.size(), 4u);
  for (const auto& s : sets) EXPECT_EQ(*s, omega);
}

class SplitModes : public ::testing::TestWithParam<SplitMode> {};

TEST_P(SplitModes, SetsAreSubsetsAndCoverOmega) {
  const IndexSet omega = bernoulli_sample(40, 40, 0.5, 2);
  const std::size_t t = 5;
  const auto sets = split_samples(omega, 0.5, per_set_rate(0.5, t), t, GetParam(), 9);
  ASSERT_EQ(sets.size(), t);
  std::set<std::pair<Index, Index>> uni;
  for (const auto& s : sets) {
    for (const auto& c : s->cells()) {
      EXPECT_TRUE(omega.contains(c));
      uni.insert({c.row, c.col});
    }
  }
  // Every observed cell belongs to at least one set.
  EXPECT_EQ(uni.size(), omega.size());
  const auto again = split_samples(omega, 0.5, per_set_rate(0.5, t), t, GetParam(), 9);
  for (std::size_t i = 0; i < t; ++i) EXPECT_EQ(*sets[i], *again[i]);
}

INSTANTIATE_TEST_SUITE_P(Modes, SplitModes,
                         ::testing::Values(SplitMode::kPaperLiteral, SplitMode::kExactCoupling));

TEST(Sampling, SeedDerivation) {
  EXPECT_EQ(derive_seed({1, 2, 3}), derive_seed({1, 2, 3}));
  EXPECT_NE(derive_seed({1, 2, 3}), derive_seed({1, 2, 4}));
  EXPECT_NE(derive_seed({1, 2}), derive_seed({2, 1}));
}
