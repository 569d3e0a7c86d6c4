#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nterm/errors.hpp"
#include "nterm/json_io.hpp"
#include "nterm/report.hpp"

using namespace nterm;

TEST(Report, FloatFormatting) {
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(std::sqrt(20.0)), "4.4721359549995796");
}

TEST(Report, EmptyRunsDocument) {
  Json j;
  j["runs"] = Json::array();
  EXPECT_EQ(dump_json(j), "{\n  \"runs\": []\n}\n");
}

TEST(Report, StableKeyOrderAndFloats) {
  Json j;
  j["z"] = 0.5;
  j["a"] = Json::array({1, 2.25, "x"});
  j["m"] = Json::object();
  EXPECT_EQ(dump_json(j),
            "{\n  \"z\": 0.5,\n  \"a\": [\n    1,\n    2.25,\n    \"x\"\n  ],\n  \"m\": {}\n}\n");
}

TEST(Report, Csv) {
  CsvTable t({"N", "hl_float"});
  t.add_row({"20", "2"});
  t.add_row({"a,b", "say \"hi\""});
  EXPECT_EQ(t.str(), "N,hl_float\n20,2\n\"a,b\",\"say \"\"hi\"\"\"\n");
  EXPECT_THROW(t.add_row({"1"}), InvalidArgument);
}

TEST(Report, AtomicWriteIsByteDeterministic) {
  const auto dir = std::filesystem::temp_directory_path() / "nterm_report_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.csv").string();
  write_output(path, "a,b\n1,2\n");
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), "a,b\n1,2\n");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove_all(dir);
}

TEST(JsonIo, ScheduleAndSpaces) {
  const auto s = schedule_from_json(Json::parse(R"({"a": [4, 5, 6], "K": 3})"));
  EXPECT_EQ(s.depth(), 3);
  EXPECT_EQ(s.n(4), 840);
  const auto back = schedule_from_json(to_json(s));
  EXPECT_EQ(back.n(4), 840);
  const auto lp = space_from_json(Json::parse(R"({"type": "lp", "p": 1, "dim": 3})"));
  EXPECT_EQ(lp.universe_size(), 3);
  const auto ds = space_from_json(
      Json::parse(R"({"type": "direct_sum", "blocks": [[2, 4], [3, 6]], "inner_p": 2})"));
  EXPECT_EQ(ds.universe_size(), 10);
  EXPECT_THROW(space_from_json(Json::parse(R"({"type": "weird"})")), InvalidArgument);
}

TEST(JsonIo, VectorsRoundTrip) {
  const auto space = SpaceSpec::block_sum(BlockSchedule({4, 5, 6}));
  const auto v = vector_from_json(
      Json::parse(R"({"groups": [[0, "1/2", "3"], [1, 2, 5], [0, "1/2", 1]]})"), space);
  ASSERT_EQ(v.groups().size(), 2u);
  EXPECT_EQ(v.groups()[0].multiplicity, 4);
  EXPECT_EQ(vector_from_json(to_json(v), space), v);
  EXPECT_THROW(vector_from_json(Json::parse(R"({"groups": [[0, "1", "21"]]})"), space),
               CapacityError);
  const auto lp = SpaceSpec::lp(1.0, 3);
  const auto c = vector_from_json(Json::parse(R"({"coords": ["3", "-2", 1]})"), lp);
  EXPECT_EQ(c.support_size(), 3);
}
