#pragma once

#include <string_view>

namespace d2dcov {

/// Convert between the unit pairs used at the CLI boundary: dB <-> linear
/// ratio and mW <-> W. Unit names are case-insensitive; converting a unit to
/// itself is the identity. Unknown units or pairs throw std::invalid_argument.
/// Everything past the CLI works in linear ratios and watts.
double convert_units(double value, std::string_view from, std::string_view to);

double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace d2dcov
