#pragma once

#include <json.hpp>

namespace ace {

// Insertion-ordered JSON keeps trace lines byte-comparable across runs.
using Json = nlohmann::ordered_json;

}  // namespace ace
