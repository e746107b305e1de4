#pragma once

#include <string>

namespace frostgrid {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

/// Like format_double but with at least `min_decimals` digits after the point
/// (never in exponent form), e.g. 5 -> "5.00".
std::string format_fixed_min(double v, int min_decimals = 2);

/// Strict parse of a complete string as a double; throws ParseError.
double parse_double(const std::string& s);

}  // namespace frostgrid
