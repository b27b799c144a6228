#pragma once

// Value parsing for the key = value formats (cavity manifests, experiment specs).
// Malformed values throw ValidationError naming the field.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace oneshot::text {

[[nodiscard]] std::string_view trim(std::string_view s);
// Splits on sep and trims each piece; empty input gives an empty list.
[[nodiscard]] std::vector<std::string_view> split(std::string_view s, char sep);

[[nodiscard]] double parse_double(std::string_view field, std::string_view value);
[[nodiscard]] int parse_int(std::string_view field, std::string_view value);
[[nodiscard]] std::uint64_t parse_u64(std::string_view field, std::string_view value);
// true/false, 1/0, yes/no
[[nodiscard]] bool parse_bool(std::string_view field, std::string_view value);

[[nodiscard]] std::vector<double> parse_double_list(std::string_view field, std::string_view value);
[[nodiscard]] std::vector<int> parse_int_list(std::string_view field, std::string_view value);

[[nodiscard]] std::string join(const std::vector<double>& values, std::string_view sep = ", ");
[[nodiscard]] std::string join(const std::vector<int>& values, std::string_view sep = ", ");

}  // namespace oneshot::text
