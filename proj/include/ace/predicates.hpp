#pragma once

#include <string>
#include <vector>

#include "ace/json.hpp"

namespace ace {

// Predicate spec forms over a flat fact map:
//   {"const": true}
//   {"fact": "robot.battery", "op": "lt", "value": 2}
//   {"zone_dirt_zero": "kitchen.counters"}
//   {"object_absent": "crate"}
//   {"all": [...]}, {"any": [...]}
bool eval_predicate(const Json& pred, const Json& facts);

// Fact keys a predicate reads; used for the success/failure overlap check.
std::vector<std::string> predicate_fact_keys(const Json& pred);

// Conservative satisfiability-overlap check on the sim's fact vocabulary:
// true when the two predicates could hold on the same state.
bool predicates_may_overlap(const Json& a, const Json& b);

}  // namespace ace
