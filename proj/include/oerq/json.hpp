#pragma once

#include <nlohmann/json.hpp>

namespace oerq {

// Insertion-ordered so serialized maps follow field order.
using json = nlohmann::ordered_json;

}  // namespace oerq
