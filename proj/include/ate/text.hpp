#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ate {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

// Strict numeric parsing: the whole (trimmed) field must be consumed.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_long(std::string_view s);

// Fixed-point formatting, e.g. fmt_fixed(0.429558, 2) == "0.43".
std::string fmt_fixed(double v, int decimals);
// Signed fixed-point, e.g. "+9.2" / "-16.8".
std::string fmt_signed(double v, int decimals);
// Shortest round-trip representation (std::to_chars).
std::string fmt_shortest(double v);

std::vector<std::string> split(std::string_view s, char delim);

} // namespace ate
