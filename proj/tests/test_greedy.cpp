#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nterm/errors.hpp"
#include "nterm/greedy.hpp"

using namespace nterm;

namespace {
Group g(std::size_t b, Rational m, long k) { return Group{b, std::move(m), BigInt(k)}; }

CompressedVector line(std::initializer_list<int> mags) {
  std::vector<Group> out;
  for (int m : mags) out.push_back(g(0, m, 1));
  return CompressedVector::canonicalize(out);
}
}  // namespace

TEST(Gamma, L1KeepsTheLargest) {
  const auto out = gamma(line({3, 2, 2, 1}), 1, SpaceSpec::lp(1.0, 4));
  EXPECT_EQ(*out.max_residual.powered, 5);
  EXPECT_EQ(*out.min_residual.powered, 5);
}

TEST(Gamma, TwoBlockTieSpread) {
  const auto space = SpaceSpec::direct_sum({{1, 4}, {3, 6}}, 2.0, 2.0);
  const auto x = indicator({{0, 2}, {1, 2}}, space.block_sizes());
  const auto out = gamma(x, 2, space);
  EXPECT_EQ(*out.max_residual.powered, 2);
  EXPECT_EQ(*out.min_residual.powered, 1);
  EXPECT_EQ(out.allocations, 3);
  EXPECT_EQ(out.min_allocation,
            (std::vector<std::pair<std::size_t, BigInt>>{{0, BigInt(0)}, {1, BigInt(2)}}));
  const auto raw = gamma_bruteforce(to_explicit(x, make_layout(space)), 2, space);
  EXPECT_EQ(compare(raw.max_residual, out.max_residual), 0);
  EXPECT_EQ(compare(raw.min_residual, out.min_residual), 0);
}

TEST(Gamma, VanishesPastTheSupport) {
  const auto x = line({3, 1});
  EXPECT_EQ(gamma(x, 2, SpaceSpec::lp(2.0, 2)).max_residual.value, 0.0);
  EXPECT_EQ(gamma(x, 5, SpaceSpec::lp(2.0, 2)).max_residual.value, 0.0);
}

TEST(Gamma, RefusesOversizedTieClasses) {
  const auto space = SpaceSpec::direct_sum({{2, 40}, {2, 40}, {2, 40}, {2, 40}}, 2.0, 2.0);
  const auto x = indicator({{0, 40}, {1, 40}, {2, 40}, {3, 40}}, space.block_sizes());
  EXPECT_THROW(gamma(x, 60, space, GreedyBudget{1000}), TieBudgetExceeded);
  EXPECT_NO_THROW(gamma(x, 60, space, GreedyBudget{100'000}));
}

TEST(Sigma, Examples) {
  EXPECT_EQ(*sigma_exact(line({3, 2, 1}), 1, SpaceSpec::lp(1.0, 3)).powered, 3);
  const auto space = SpaceSpec::block_sum(BlockSchedule({4, 5, 6}));
  const auto y1 = indicator({{0, 20}}, space.block_sizes());
  EXPECT_EQ(*sigma_exact(y1, 16, space).powered, 4);
  EXPECT_EQ(*sigma_dp(y1, 16, space).powered, 4);
  EXPECT_EQ(compare(sigma_exact(y1, 0, space), space_norm(y1, space)), 0);
}

TEST(SigmaOracle, Examples) {
  const std::vector<double> x{3, 2, 1};
  EXPECT_NEAR(sigma_oracle_grid(x, 1, SpaceSpec::lp(1.0, 3)), 3.0, 1e-6);
  const std::vector<double> ones{1, 1};
  EXPECT_NEAR(sigma_oracle_grid(ones, 1, SpaceSpec::lp(2.0, 2)), 1.0, 1e-6);
  const std::vector<double> twos{2, 2};
  EXPECT_NEAR(sigma_oracle_grid(twos, 2, SpaceSpec::lp(1.0, 2)), 0.0, 1e-12);
  const std::vector<double> five(5, 1.0);
  EXPECT_THROW(sigma_oracle_grid(five, 1, SpaceSpec::lp(1.0, 5)), OracleUnavailable);
}

TEST(Sigma, ExactAgreesWithDp) {
  const auto space = SpaceSpec::direct_sum({{2, 5}, {3, 6}, {4, 7}}, 2.0, 2.0);
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> mag(0, 4), cnt(0, 5);
  for (int t = 0; t < 100; ++t) {
    std::vector<Group> raw;
    for (std::size_t b = 0; b < 3; ++b) {
      raw.push_back(g(b, mag(rng), cnt(rng) / 2));
      raw.push_back(g(b, mag(rng), cnt(rng) / 2));
    }
    const auto x = CompressedVector::canonicalize(raw, space.block_sizes());
    for (std::uint64_t N = 0; N <= to_u64(x.support_size()); ++N) {
      EXPECT_EQ(compare(sigma_exact(x, N, space), sigma_dp(x, N, space)), 0);
    }
  }
}

TEST(ErrorSequences, PropertiesOnRandomVectors) {
  const auto space = SpaceSpec::block_sum(BlockSchedule({4, 5, 6}, 3));
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> mag(1, 4), cnt(0, 6);
  for (int t = 0; t < 40; ++t) {
    std::vector<Group> raw;
    for (std::size_t b = 0; b < 3; ++b) raw.push_back(g(b, mag(rng), cnt(rng)));
    raw.push_back(g(1, mag(rng), cnt(rng)));
    const auto x = CompressedVector::canonicalize(raw, space.block_sizes());
    ErrorSequenceOptions generic;
    generic.allow_closed_form = false;
    const auto s = error_sequence(x, space, ErrorKind::kSigma, generic);
    const auto gm = error_sequence(x, space, ErrorKind::kGamma, generic);
    const auto support = s.support_size();
    for (std::uint64_t k = 0; k <= support; ++k) {
      EXPECT_LE(compare(s.at(k), gm.at(k)), 0) << "k=" << k;
      if (k > 0) {
        EXPECT_LE(compare(s.at(k), s.at(k - 1)), 0);
        EXPECT_LE(compare(gm.at(k), gm.at(k - 1)), 0);
      }
    }
    EXPECT_EQ(s.at(support).value, 0.0);
    EXPECT_EQ(gm.at(support).value, 0.0);
  }
}

TEST(ErrorSequences, XsShapeClosedForm) {
  // 2 on Y_1 (36 coordinates, cap 4) and 1 on 36 coordinates of Y_2 for a = (4, 9, 16).
  const auto space = SpaceSpec::block_sum(BlockSchedule::squares(2));
  const auto x = CompressedVector::canonicalize({g(0, 2, 36), g(1, 1, 36)}, space.block_sizes());
  const auto s = error_sequence(x, space, ErrorKind::kSigma);
  const auto gm = error_sequence(x, space, ErrorKind::kGamma);
  ASSERT_TRUE(s.is_closed_form());
  EXPECT_EQ(*s.at(36).powered, 16);
  EXPECT_GE(gm.at(10).value, 6.0);
  EXPECT_EQ(*gm.at(10).powered, 52);
  EXPECT_EQ(s.at(72).value, 0.0);
  EXPECT_EQ(s.at(100).value, 0.0);
}

TEST(GreedyConstant, LpIsOne) {
  for (double p : {1.0, 2.0, 3.0}) {
    GreedyConstantConfig cfg;
    cfg.trials = 100;
    cfg.seed = 7;
    const auto est = greedy_constant(SpaceSpec::lp(p, 8), cfg);
    EXPECT_EQ(est.value, 1.0) << "p=" << p << " " << est.witness;
    EXPECT_GT(est.samples, 0);
  }
}

TEST(GreedyConstant, AdversarialWitnessOnBlockSum) {
  GreedyConstantConfig cfg;
  cfg.trials = 20;
  cfg.adversarial = true;
  const auto est = greedy_constant(SpaceSpec::block_sum(BlockSchedule({4, 5, 6})), cfg);
  EXPECT_GT(est.value, 2.0) << est.witness;
}

TEST(DemocracyConstant, Examples) {
  EXPECT_EQ(democracy_constant(SpaceSpec::lp(2.0, 6), 3, DemocracyMode::kBruteForce), 1.0);
  const auto space = SpaceSpec::block_sum(BlockSchedule({4, 5, 6}, 3));
  EXPECT_NEAR(democracy_constant(space, 40, DemocracyMode::kExact), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(democracy_constant(space, 1, DemocracyMode::kExact), 1.0);
}
