#pragma once

#include <istream>
#include <string>

#include <json.hpp>

namespace tandem {

// Minimal TOML reader covering the scenario-file subset: [table] and
// [[array-of-tables]] headers, dotted bare keys, basic "strings", integers,
// floats, booleans, single-line arrays and inline tables, '#' comments.
// Dates, multi-line strings and quoted keys are not supported.
nlohmann::json parse_toml(std::istream& in);
nlohmann::json parse_toml(const std::string& text);

}  // namespace tandem
