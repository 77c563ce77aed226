#pragma once

#include <string>

#include "json.hpp"

namespace plap {

/// %.17g, with "nan", "inf", "-inf" spelled out.
std::string format_g17(double x);

/// JSON text with every floating-point number printed to 17 significant digits.
/// Non-finite numbers become null. indent < 0 gives a single line.
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace plap
