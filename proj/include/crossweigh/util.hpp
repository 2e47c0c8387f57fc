#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crossweigh {

// Shortest decimal form that parses back to exactly the same double.
std::string format_double(double value);

std::optional<double> parse_double(std::string_view text);

// Splits on runs of spaces/tabs; never yields empty fields.
std::vector<std::string_view> split_fields(std::string_view line);

// Splits on '\n', keeping empty lines; a trailing '\r' is stripped from
// each line so CRLF input parses the same as LF.
std::vector<std::string_view> split_lines(std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(std::uint64_t value);

}  // namespace crossweigh
