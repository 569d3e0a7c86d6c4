#include <gtest/gtest.h>

#include <cmath>

#include "nterm/democracy.hpp"
#include "nterm/errors.hpp"

using namespace nterm;

namespace {
ProbedFunction log_fn() {
  return ProbedFunction::from_callable(
      "1+log2", [](std::uint64_t N) { return 1.0 + std::log2(static_cast<double>(N)); },
      default_probe_grid());
}
ProbedFunction sqrt_fn() {
  return ProbedFunction::from_callable(
      "sqrt", [](std::uint64_t N) { return std::sqrt(static_cast<double>(N)); },
      default_probe_grid());
}
}  // namespace

TEST(ProbeGrid, DenseThenGeometric) {
  const auto grid = default_probe_grid();
  EXPECT_EQ(grid[0], 1u);
  EXPECT_EQ(grid[65535], 65536u);
  EXPECT_TRUE(std::is_sorted(grid.begin(), grid.end()));
  EXPECT_LE(grid.back(), std::uint64_t{1} << 62);
  EXPECT_GT(grid.back(), std::uint64_t{1} << 61);
  const auto small = default_probe_grid(10);
  EXPECT_EQ(small.size(), 10u);
}

TEST(ProbedFunction, TableLookup) {
  const auto f = ProbedFunction::from_table("t", {{1, 1.0}, {4, 2.0}});
  EXPECT_EQ(f(4), 2.0);
  EXPECT_FALSE(f(3));
  EXPECT_FALSE(f(0));
  EXPECT_EQ(f.probes(), (std::vector<std::uint64_t>{1, 4}));
}

TEST(Cghm, LogSqrtPairGivesFiveTerms) {
  const auto seq = cghm_construct(sqrt_fn(), log_fn(), 2.0, 0.25, 5);
  ASSERT_EQ(seq.terms.size(), 5u) << seq.exhaustion;
  EXPECT_FALSE(seq.exhausted);
  std::uint64_t prev_k = 0, prev_n = 0, prev_w = 0;
  for (const auto& t : seq.terms) {
    EXPECT_GT(t.k, prev_k);
    EXPECT_GT(t.n, prev_n);
    EXPECT_GT(t.w, prev_w);
    EXPECT_EQ(t.n, t.w * t.k);
    EXPECT_LE(std::uint64_t{1} << (t.r - 1), t.w);
    EXPECT_LT(t.w, std::uint64_t{1} << t.r);
    EXPECT_GE(t.ratio_k, t.threshold);
    EXPECT_TRUE(t.holds);
    // Both sides evaluated directly.
    const double lhs = std::sqrt(static_cast<double>(t.k)) /
                       (1.0 + std::log2(static_cast<double>(t.n)));
    EXPECT_GE(lhs, std::pow(static_cast<double>(t.w), 0.25));
    prev_k = t.k;
    prev_n = t.n;
    prev_w = t.w;
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  for (const auto& t : seq.terms) pairs.emplace_back(t.k, t.n);
  EXPECT_TRUE(condition71_check(sqrt_fn(), log_fn(), pairs, 1.0, 0.25).all_pass);
}

TEST(Cghm, AlphaZeroStillConstructs) {
  const auto seq = cghm_construct(sqrt_fn(), log_fn(), 2.0, 0.0, 5);
  EXPECT_EQ(seq.terms.size(), 5u) << seq.exhaustion;
  for (const auto& t : seq.terms) EXPECT_DOUBLE_EQ(t.threshold, std::pow(2.0, t.r));
}

TEST(Cghm, BoundedRatioExhausts) {
  const auto seq = cghm_construct(log_fn(), log_fn(), 2.0, 0.25, 5);
  EXPECT_TRUE(seq.exhausted);
  EXPECT_TRUE(seq.terms.empty());
  EXPECT_EQ(seq.exhaustion.rfind("ratio step", 0), 0u) << seq.exhaustion;
}

TEST(Cghm, RejectsNonDoublingLeftFunction) {
  const auto sq = ProbedFunction::from_callable(
      "N^2", [](std::uint64_t N) { return static_cast<double>(N) * N; }, default_probe_grid(1000));
  const auto cube = ProbedFunction::from_callable(
      "N^3", [](std::uint64_t N) { return std::pow(static_cast<double>(N), 3); },
      default_probe_grid(1000));
  EXPECT_THROW(cghm_construct(cube, sq, 2.0, 0.25, 3), InvalidArgument);
}

TEST(Condition71, GrowthAndInequality) {
  const std::vector<std::pair<std::uint64_t, std::uint64_t>> same = {{10, 10}, {20, 20}};
  const auto r = condition71_check(sqrt_fn(), log_fn(), same, 1.0, 0.25);
  EXPECT_FALSE(r.growth);
  EXPECT_FALSE(r.all_pass);

  // Democratic tables: h_r = h_l = sqrt gives (k/n)^{1/2} < (n/k)^alpha.
  const std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs = {
      {10, 100}, {10, 10'000}, {10, 1'000'000}};
  const auto dem = condition71_check(sqrt_fn(), sqrt_fn(), pairs, 1.0, 0.25);
  EXPECT_TRUE(dem.growth);
  EXPECT_FALSE(dem.all_pass);
  for (const auto& row : dem.rows) EXPECT_FALSE(row.inequality_ok);

  const std::vector<std::pair<std::uint64_t, std::uint64_t>> one = {{1, 2}};
  EXPECT_FALSE(condition71_check(sqrt_fn(), log_fn(), one, 1.0, 0.25).growth);
}
