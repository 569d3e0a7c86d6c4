#include <gtest/gtest.h>

#include "nterm/errors.hpp"
#include "nterm/schedule.hpp"

using namespace nterm;

TEST(Schedule, LinearProducts) {
  const auto s = BlockSchedule::linear(3);
  EXPECT_EQ(s.a(1), 4);
  EXPECT_EQ(s.a(4), 7);
  EXPECT_EQ(s.n(0), 1);
  EXPECT_EQ(s.n(1), 4);
  EXPECT_EQ(s.n(2), 20);
  EXPECT_EQ(s.n(3), 120);
  EXPECT_EQ(s.n(4), 840);
  EXPECT_EQ(s.block_cap(0), 4);
  EXPECT_EQ(s.block_size(0), 20);
  EXPECT_EQ(s.block_size(2), 840);
}

TEST(Schedule, SquaresProducts) {
  const auto s = BlockSchedule::squares(4);
  EXPECT_EQ(s.a(2), 9);
  EXPECT_EQ(s.n(2), 36);
  EXPECT_EQ(s.n(3), 576);
  EXPECT_EQ(s.n(4), 14400);
}

TEST(Schedule, ExtendsPastListedEntries) {
  const BlockSchedule inc({4, 5}, 3);
  EXPECT_EQ(inc.a(3), 6);
  EXPECT_EQ(inc.a(4), 7);
  const BlockSchedule sq({4, 9}, 3, 2.0, 2.0, Extension::kSquares);
  EXPECT_EQ(sq.a(3), 16);
  EXPECT_EQ(sq.a(4), 25);
  EXPECT_THROW(BlockSchedule({4, 5}, 3, 2.0, 2.0, Extension::kNone), InvalidArgument);
  EXPECT_EQ(parse_extension(to_string(Extension::kSquares)), Extension::kSquares);
}

TEST(Schedule, RejectsNonstandardGrowth) {
  EXPECT_THROW(BlockSchedule({3, 5, 6}), InvalidArgument);
  EXPECT_THROW(BlockSchedule({4, 4, 6}), InvalidArgument);
  EXPECT_THROW(BlockSchedule({4, 6, 5}), InvalidArgument);
  EXPECT_NO_THROW(BlockSchedule({2, 3, 4}, 2, 2.0, 2.0, Extension::kIncrement, true));
}

TEST(Schedule, WithDepthKeepsTheRule) {
  const auto s = BlockSchedule::squares(2).with_depth(4);
  EXPECT_EQ(s.depth(), 4);
  EXPECT_EQ(s.n(4), 14400);
}
