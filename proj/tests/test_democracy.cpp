#include <gtest/gtest.h>

#include <random>

#include "nterm/democracy.hpp"
#include "nterm/errors.hpp"

using namespace nterm;

namespace {
SpaceSpec mini() { return SpaceSpec::block_sum(BlockSchedule({4, 5, 6}, 3)); }
SpaceSpec toy() { return SpaceSpec::direct_sum({{2, 4}, {3, 6}}, 2.0, 2.0); }
}  // namespace

TEST(Demfun, BlockSumExamples) {
  const auto space = mini();
  const auto v20 = demfun_dp(space, 20);
  EXPECT_EQ(*v20.left.powered, 4);
  EXPECT_EQ(*v20.right.powered, 20);
  EXPECT_EQ(v20.left.allocation[0], 20);
  const auto v40 = demfun_dp(space, 40);
  EXPECT_EQ(*v40.left.powered, 20);
  EXPECT_EQ(v40.left.allocation[1], 40);
  EXPECT_EQ(*v40.right.powered, 40);
  const auto v1 = demfun_dp(space, 1);
  EXPECT_EQ(*v1.left.powered, 1);
  EXPECT_EQ(*v1.right.powered, 1);
  EXPECT_EQ(*demfun_dp(space, 0).left.powered, 0);
}

TEST(Demfun, BruteForceExamples) {
  const auto v = demfun_bruteforce(toy(), 4);
  EXPECT_EQ(*v.left.powered, 2);
  EXPECT_EQ(*v.right.powered, 4);
  EXPECT_EQ(v.left.allocation[0], 4);
  const auto l1 = demfun_bruteforce(SpaceSpec::lp(1.0, 6), 3);
  EXPECT_DOUBLE_EQ(l1.left.value, 3.0);
  EXPECT_DOUBLE_EQ(l1.right.value, 3.0);
  EXPECT_EQ(demfun_bruteforce(toy(), 0).left.value, 0.0);
  EXPECT_THROW(demfun_bruteforce(SpaceSpec::lp(2.0, 21), 2), OracleUnavailable);
}

TEST(Demfun, AgreesWithBruteForceOnShrunkenSpaces) {
  const std::vector<std::vector<BlockShape>> shapes = {
      {{2, 4}, {3, 6}},
      {{1, 4}, {4, 12}},
      {{1, 3}, {2, 5}, {3, 7}},
      {{3, 3}, {2, 6}, {2, 5}},
  };
  for (const auto& blocks : shapes) {
    const auto space = SpaceSpec::direct_sum(blocks, 2.0, 2.0);
    for (std::uint64_t N = 0; N <= to_u64(space.universe_size()); ++N) {
      const auto dp = demfun_dp(space, N);
      const auto bf = demfun_bruteforce(space, N);
      EXPECT_EQ(*dp.left.powered, *bf.left.powered) << space.describe() << " N=" << N;
      EXPECT_EQ(*dp.right.powered, *bf.right.powered) << space.describe() << " N=" << N;
    }
  }
}

TEST(Demfun, NonAdditiveSpacesUseTheAllocationDp) {
  const auto space = SpaceSpec::direct_sum({{2, 4}, {3, 6}}, 2.0, 1.0);
  for (std::uint64_t N = 0; N <= 10; ++N) {
    const auto dp = demfun_dp(space, N);
    const auto bf = demfun_bruteforce(space, N);
    EXPECT_NEAR(dp.left.value, bf.left.value, 1e-12) << N;
    EXPECT_NEAR(dp.right.value, bf.right.value, 1e-12) << N;
  }
}

TEST(Demfun, VertexEnumerationMatchesAllocationDp) {
  const auto space = SpaceSpec::block_sum(BlockSchedule({4, 5, 6, 7}, 3));
  for (std::uint64_t N = 0; N <= 840; N += 7) {
    EXPECT_EQ(*left_democracy(space, N).powered, *demfun_allocation_dp(space, N).left.powered)
        << N;
  }
  for (std::uint64_t N = 0; N <= 144; ++N) {
    EXPECT_EQ(*demfun_dp(space, N).right.powered, *demfun_allocation_dp(space, N).right.powered);
  }
}

TEST(Demfun, TruncationIsRefused) {
  const auto space = SpaceSpec::block_sum(BlockSchedule({4, 5, 6}));
  EXPECT_THROW(left_democracy(space, 121), InadequateTruncation);
  EXPECT_THROW(right_democracy(space, 25), InadequateTruncation);
  EXPECT_NO_THROW(right_democracy(space, 24));
  EXPECT_THROW(left_democracy(toy(), 11), InvalidArgument);
}

TEST(Demfun, TableInvariants) {
  const auto space = SpaceSpec::block_sum(BlockSchedule({4, 5, 6, 7}, 4));
  const auto table = demfun_table(space, 400);
  ASSERT_EQ(table.values.size(), 401u);
  for (std::uint64_t N = 1; N <= 400; ++N) {
    const auto& cur = table.values[N];
    const auto& prev = table.values[N - 1];
    EXPECT_GE(*cur.left.powered, *prev.left.powered);
    EXPECT_GE(*cur.right.powered, *prev.right.powered);
    EXPECT_LE(*cur.left.powered, *cur.right.powered);
    EXPECT_EQ(*cur.right.powered, N);
    if (2 * N <= 400) {
      // h_r(2N) <= 2 h_r(N), compared in squares.
      EXPECT_LE(*table.values[2 * N].right.powered, 4 * *cur.right.powered);
    }
  }
}

TEST(DoublingScan, Examples) {
  const auto space = SpaceSpec::block_sum(BlockSchedule({4, 5, 6, 7}, 3));
  const auto rows = doubling_scan(space, 1, 2);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].ratio_powered, 5);
  EXPECT_EQ(rows[0].bound_powered, Rational(10, 3));
  EXPECT_NEAR(rows[0].ratio, 2.2360679774997898, 1e-15);
  EXPECT_EQ(rows[1].ratio_powered, 6);
  EXPECT_EQ(rows[1].bound_powered, 4);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.meets_bound);
    EXPECT_TRUE(r.upper_equal);
  }
  EXPECT_THROW(doubling_scan(space, 1, 3), InadequateTruncation);
  const auto single = SpaceSpec::block_sum(BlockSchedule({4, 5}, 1));
  EXPECT_THROW(doubling_scan(single, 1, 1), InadequateTruncation);
}

TEST(DoublingScan, BoundHoldsOnDeeperSchedules) {
  for (const auto& schedule : {BlockSchedule::linear(6), BlockSchedule::squares(4)}) {
    const auto space = SpaceSpec::block_sum(schedule);
    for (const auto& r : doubling_scan(space, 1, schedule.depth() - 1)) {
      EXPECT_TRUE(r.meets_bound) << "k=" << r.k;
      EXPECT_TRUE(r.upper_ok) << "k=" << r.k;
    }
  }
}

TEST(PrefixCheck, ReportsEqualitiesAndCounterexamples) {
  const auto report = prefix_norm_check(mini(), 1, 60);
  EXPECT_TRUE(report.rows[0].equal);
  EXPECT_TRUE(report.rows[19].equal);
  EXPECT_EQ(report.rows[23].prefix_powered, 8);
  EXPECT_EQ(report.rows[23].hl_powered, 8);
  // Filling Y_1 first is not optimal at N = 40: 4 + min(20, 20) = 24 > 20.
  EXPECT_EQ(report.rows[39].prefix_powered, 24);
  EXPECT_EQ(report.rows[39].hl_powered, 20);
  ASSERT_FALSE(report.counterexamples.empty());
  EXPECT_EQ(report.counterexamples.front(), 37u);
}

TEST(Truncation, LeftDemocracyIsStableUnderDeeperSchedules) {
  const auto a = SpaceSpec::block_sum(BlockSchedule::linear(2));
  const auto b = SpaceSpec::block_sum(BlockSchedule::linear(3));
  for (std::uint64_t N = 0; N <= 120; ++N) {
    EXPECT_EQ(*left_democracy(a, N).powered, *left_democracy(b, N).powered) << N;
  }
}
