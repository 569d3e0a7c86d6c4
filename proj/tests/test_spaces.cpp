#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nterm/errors.hpp"
#include "nterm/spaces.hpp"

using namespace nterm;

namespace {
Group g(std::size_t b, Rational m, long k) { return Group{b, std::move(m), BigInt(k)}; }

std::vector<Group> block0(std::initializer_list<int> mags) {
  std::vector<Group> out;
  for (int m : mags) out.push_back(g(0, m, 1));
  return out;
}
}  // namespace

TEST(TruncBlock, IndicatorCases) {
  const auto nine = CompressedVector::canonicalize({g(0, 1, 9)});
  EXPECT_EQ(*trunc_block_norm(nine.block_groups(0), 4, 2.0).powered, 4);
  EXPECT_DOUBLE_EQ(trunc_block_norm(nine.block_groups(0), 4, 2.0).value, 2.0);
  const auto three = CompressedVector::canonicalize({g(0, 1, 3)});
  EXPECT_EQ(*trunc_block_norm(three.block_groups(0), 4, 2.0).powered, 3);
}

TEST(TruncBlock, TopTwoOfMixedMagnitudes) {
  const auto v = CompressedVector::canonicalize(block0({3, 2, 2, 1}));
  const auto n = trunc_block_norm(v.block_groups(0), 2, 2.0);
  EXPECT_EQ(*n.powered, 13);
  EXPECT_NEAR(n.value, std::sqrt(13.0), 1e-15);
  // n >= support: the full l_2 norm.
  EXPECT_EQ(*trunc_block_norm(v.block_groups(0), 10, 2.0).powered, 18);
  EXPECT_EQ(*trunc_block_norm(v.block_groups(0), 2, 3.0).powered, 35);
}

TEST(SupFormOracle, Examples) {
  const std::vector<Rational> v{3, 2, 2, 1};
  EXPECT_EQ(*sup_form_norm_oracle(v, 2).powered, 13);
  EXPECT_EQ(*sup_form_norm_oracle(v, 4).powered, 18);
  const std::vector<Rational> ones(5, Rational(1));
  EXPECT_EQ(*sup_form_norm_oracle(ones, 3).powered, 3);
  EXPECT_THROW(sup_form_norm_oracle(std::vector<Rational>(26, Rational(1)), 3), OracleUnavailable);
}

TEST(SupFormOracle, AgreesWithTruncBlockUpToSupport12) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4), sz(1, 12);
  for (int t = 0; t < 150; ++t) {
    const int size = sz(rng);
    std::vector<Rational> coords(size);
    for (auto& c : coords) {
      c = Rational(num(rng), den(rng));
      c.canonicalize();
    }
    std::uniform_int_distribution<int> capd(1, size);
    const BigInt cap = capd(rng);
    const auto space = SpaceSpec::trunc_block(cap, size, 2.0);
    const auto x = from_explicit(coords, make_layout(space));
    EXPECT_EQ(*space_norm(x, space).powered, *sup_form_norm_oracle(coords, cap).powered);
  }
}

TEST(SpaceNorm, BlockSumExamples) {
  const auto space = SpaceSpec::block_sum(BlockSchedule({4, 5, 6}));
  EXPECT_EQ(*space_norm(indicator({{0, 20}}), space).powered, 4);
  EXPECT_EQ(*space_norm(indicator({{0, 4}, {1, 16}}), space).powered, 20);
  EXPECT_EQ(space_norm(CompressedVector{}, space).value, 0.0);
  EXPECT_THROW(space_norm(indicator({{0, 21}}), space), CapacityError);
}

TEST(SpaceNorm, MixedExponents) {
  // outer l_1 of inner l_2 blocks: sqrt(4) + sqrt(9).
  const auto space = SpaceSpec::direct_sum({{4, 4}, {9, 9}}, 2.0, 1.0);
  const auto x = CompressedVector::canonicalize({g(0, 1, 4), g(1, 1, 9)});
  const auto n = space_norm(x, space);
  EXPECT_FALSE(n.powered);
  EXPECT_NEAR(n.value, 5.0, 1e-12);
}

TEST(SpaceNorm, IndicatorPowersAreIntegers) {
  const auto space = SpaceSpec::block_sum(BlockSchedule({4, 5, 6, 7}));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    std::map<std::size_t, BigInt> counts;
    long expected = 0;
    const long caps[] = {4, 20, 120};
    const long sizes[] = {20, 120, 840};
    for (std::size_t b = 0; b < 3; ++b) {
      std::uniform_int_distribution<long> m(0, sizes[b]);
      const long c = m(rng);
      counts[b] = c;
      expected += std::min(c, caps[b]);
    }
    const auto n = space_norm(indicator(counts), space);
    EXPECT_EQ(*n.powered, expected);
  }
}

TEST(SpaceNorm, CompressedMatchesExplicitUnderPermutationsAndSigns) {
  const auto space = SpaceSpec::direct_sum({{2, 5}, {3, 6}}, 2.0, 2.0);
  const auto layout = make_layout(space);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> mag(-6, 6);
  for (int t = 0; t < 200; ++t) {
    std::vector<Rational> coords(layout.dimension());
    for (auto& c : coords) c = mag(rng);
    const auto x = from_explicit(coords, layout);
    std::shuffle(coords.begin() + layout.offsets[1], coords.end(), rng);
    std::shuffle(coords.begin(), coords.begin() + layout.offsets[1], rng);
    for (auto& c : coords) {
      if (rng() & 1) c = -c;
    }
    EXPECT_EQ(compare(space_norm(x, space), explicit_norm(coords, space, layout)), 0);
  }
}

TEST(SpaceNorm, MonotoneAndTriangle) {
  const auto space = SpaceSpec::direct_sum({{2, 4}, {3, 6}}, 2.0, 2.0);
  const auto layout = make_layout(space);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> x(layout.dimension()), y(x.size()), s(x.size()), bigger(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
      s[i] = x[i] + y[i];
      bigger[i] = x[i] * (1.0 + std::abs(u(rng)));
    }
    const double nx = explicit_norm_double(x, space, layout);
    const double ny = explicit_norm_double(y, space, layout);
    EXPECT_LE(explicit_norm_double(s, space, layout), (nx + ny) * (1 + 1e-9));
    EXPECT_GE(explicit_norm_double(bigger, space, layout), nx * (1 - 1e-12));
  }
}

TEST(NormValue, ExactComparison) {
  const auto a = NormValue::from_power(Rational(2), 2.0);
  const auto b = NormValue::from_power(Rational(2), 2.0);
  const auto c = NormValue::from_power(Rational(3), 2.0);
  EXPECT_EQ(compare(a, b), 0);
  EXPECT_LT(compare(a, c), 0);
  EXPECT_EQ(compare(a, NormValue::from_double(std::sqrt(2.0), 2.0)), 0);
}

TEST(Lattice, NormalizationAndShrinking) {
  EXPECT_TRUE(lattice_check(SpaceSpec::lp(1.0, 5), 50, 1).passed());
  EXPECT_TRUE(lattice_check(SpaceSpec::trunc_block(4, 16, 2.0), 50, 2).passed());
  const auto report = lattice_check(SpaceSpec::block_sum(BlockSchedule({4, 5, 6})), 200, 3);
  EXPECT_TRUE(report.passed()) << report.witness;
  EXPECT_EQ(report.trials, 200);
  const auto half = CompressedVector::canonicalize({g(0, Rational(3, 2), 1), g(0, Rational(1, 2), 2)});
  const auto full = CompressedVector::canonicalize({g(0, 3, 1), g(0, 1, 2)});
  const auto l1 = SpaceSpec::lp(1.0, 3);
  EXPECT_EQ(*space_norm(half, l1).powered * 2, *space_norm(full, l1).powered);
  const auto e1 = CompressedVector::canonicalize({g(0, 1, 1)});
  EXPECT_EQ(space_norm(e1, SpaceSpec::trunc_block(4, 16, 2.0)).value, 1.0);
}
