#pragma once

#include <string>

#include "json.hpp"

namespace swgame::tools {

// Deterministic text: keys sorted, two-space indent, floating-point numbers
// as %.17g, non-finite numbers as the strings "inf", "-inf" and "nan".
std::string dump(const nlohmann::json& value);

}  // namespace swgame::tools
