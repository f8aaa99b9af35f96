#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace workdyn {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

std::string format_int(long long value);

/// Full-string strict parses; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);
std::optional<long long> parse_int(std::string_view text);

}  // namespace workdyn
