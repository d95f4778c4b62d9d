#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace moeadstn {

// Shortest decimal text that reads back to the same double; "inf"/"nan"
// for non-finite values.
std::string format_double(double v);
// Empty string for a missing value.
std::string format_optional(const std::optional<double>& v);

// Splits one CSV line on commas (no quoting) and strips a trailing '\r'.
std::vector<std::string> split_csv(std::string_view line);

// Whole-string parse; nullopt on anything else.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_integer(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

} // namespace moeadstn
