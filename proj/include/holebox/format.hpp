#pragma once

#include <optional>
#include <string>

namespace holebox {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// Empty string for absent values.
std::string format_optional(const std::optional<double>& value);

}  // namespace holebox
