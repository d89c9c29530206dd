#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace har::csv {

/// Splits on commas; no quoting (identifiers in this toolkit never contain
/// commas or quotes, and writers reject ones that do).
std::vector<std::string_view> split(std::string_view line);

/// Reads the next line, stripping a trailing '\r'. Returns false at EOF.
bool next_line(std::istream& in, std::string& line);

std::optional<double> parse_double(std::string_view field);
std::optional<std::int64_t> parse_int(std::string_view field);

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

/// Throws InvalidArgument if `field` cannot be written unquoted.
void check_field(std::string_view field);

}  // namespace har::csv
