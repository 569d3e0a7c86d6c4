#pragma once

// JSON descriptions of schedules, spaces and vectors.
//
//   schedule: {"a": [4, 5, 6], "K": 3, "outer_p": 2, "inner_p": 2,
//              "extend": "increment", "allow_nonstandard": false}
//   space:    a schedule, or {"type": "lp", "p": 2, "dim": 4}
//             | {"type": "trunc_block", "cap": 2, "size": 4, "p": 2}
//             | {"type": "direct_sum", "blocks": [[2, 4], [3, 6]],
//                "inner_p": 2, "outer_p": 2}
//   vector:   {"groups": [[block, "magnitude", "multiplicity"], ...]}
//             | {"coords": ["3", "-2", "1/2", ...]} over the explicit layout

#include <string>

#include "nterm/report.hpp"
#include "nterm/schedule.hpp"
#include "nterm/spaces.hpp"
#include "nterm/vectors.hpp"

namespace nterm {

Json load_json_file(const std::string& path);

BlockSchedule schedule_from_json(const Json& j);
Json to_json(const BlockSchedule& schedule);

SpaceSpec space_from_json(const Json& j);

CompressedVector vector_from_json(const Json& j, const SpaceSpec& space);
Json to_json(const CompressedVector& v);

}  // namespace nterm
