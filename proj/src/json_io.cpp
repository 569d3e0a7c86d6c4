#include "nterm/json_io.hpp"

#include <fstream>

#include "nterm/errors.hpp"

namespace nterm {

namespace {

Rational rational_of(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(parse_bigint(j.dump()));
  throw InvalidArgument("expected an integer or a rational string, got " + j.dump());
}

BigInt bigint_of(const Json& j) {
  if (j.is_string()) return parse_bigint(j.get<std::string>());
  if (j.is_number_integer()) return parse_bigint(j.dump());
  throw InvalidArgument("expected an integer, got " + j.dump());
}

double double_of(const Json& j, const char* what) {
  if (!j.is_number()) throw InvalidArgument(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument("cannot open " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

BlockSchedule schedule_from_json(const Json& j) {
  if (!j.contains("a") || !j["a"].is_array()) throw InvalidArgument("schedule needs an \"a\" array");
  std::vector<std::int64_t> a;
  for (const auto& e : j["a"]) {
    if (!e.is_number_integer()) throw InvalidArgument("schedule entries must be integers");
    a.push_back(e.get<std::int64_t>());
  }
  const int depth = j.contains("K") ? j["K"].get<int>() : static_cast<int>(a.size()) - 1;
  const double outer = j.contains("outer_p") ? double_of(j["outer_p"], "outer_p") : 2.0;
  const double inner = j.contains("inner_p") ? double_of(j["inner_p"], "inner_p") : outer;
  const auto ext = j.contains("extend") ? parse_extension(j["extend"].get<std::string>())
                                        : Extension::kIncrement;
  const bool nonstandard = j.value("allow_nonstandard", false);
  return BlockSchedule(std::move(a), depth, outer, inner, ext, nonstandard);
}

Json to_json(const BlockSchedule& schedule) {
  Json j;
  j["a"] = schedule.listed();
  j["K"] = schedule.depth();
  j["outer_p"] = schedule.outer_p();
  j["inner_p"] = schedule.inner_p();
  j["extend"] = to_string(schedule.extension());
  j["allow_nonstandard"] = schedule.allow_nonstandard();
  return j;
}

SpaceSpec space_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("space must be a JSON object");
  if (j.contains("a")) return SpaceSpec::block_sum(schedule_from_json(j));
  const std::string type = j.value("type", "");
  if (type == "lp") return SpaceSpec::lp(double_of(j.at("p"), "p"), bigint_of(j.at("dim")));
  if (type == "trunc_block") {
    return SpaceSpec::trunc_block(bigint_of(j.at("cap")), bigint_of(j.at("size")),
                                  double_of(j.at("p"), "p"));
  }
  if (type == "direct_sum") {
    std::vector<BlockShape> blocks;
    for (const auto& b : j.at("blocks")) {
      if (!b.is_array() || b.size() != 2) throw InvalidArgument("blocks are [cap, size] pairs");
      blocks.push_back({bigint_of(b[0]), bigint_of(b[1])});
    }
    const double outer = j.contains("outer_p") ? double_of(j["outer_p"], "outer_p") : 2.0;
    const double inner = j.contains("inner_p") ? double_of(j["inner_p"], "inner_p") : outer;
    return SpaceSpec::direct_sum(std::move(blocks), inner, outer);
  }
  throw InvalidArgument("unknown space type \"" + type + "\"");
}

CompressedVector vector_from_json(const Json& j, const SpaceSpec& space) {
  if (j.contains("coords")) {
    const auto layout = make_layout(space);
    std::vector<Rational> coords;
    for (const auto& c : j["coords"]) coords.push_back(rational_of(c));
    if (coords.size() != layout.dimension()) {
      throw InvalidArgument("expected " + std::to_string(layout.dimension()) + " coordinates");
    }
    return from_explicit(coords, layout);
  }
  if (!j.contains("groups")) throw InvalidArgument("vector needs \"groups\" or \"coords\"");
  std::vector<Group> groups;
  for (const auto& g : j["groups"]) {
    if (!g.is_array() || g.size() != 3) {
      throw InvalidArgument("groups are [block, magnitude, multiplicity] triples");
    }
    groups.push_back(Group{g[0].get<std::size_t>(), abs(rational_of(g[1])), bigint_of(g[2])});
  }
  return CompressedVector::canonicalize(std::move(groups), space.block_sizes());
}

Json to_json(const CompressedVector& v) {
  Json groups = Json::array();
  for (const auto& g : v.groups()) {
    groups.push_back(Json::array({g.block, to_string(g.magnitude), to_string(g.multiplicity)}));
  }
  Json j;
  j["groups"] = std::move(groups);
  return j;
}

}  // namespace nterm
