#pragma once

#include <string>
#include <string_view>

namespace edgecap::decimal {

/// Renders `value * 10^shift` as a decimal string.
///
/// The shift is applied to the shortest round-trip representation of
/// `value` by moving the decimal point, so no binary rounding takes
/// place: `parse_scaled(format_scaled(v, k), k) == v` for every finite v.
/// This is how seconds are written as milliseconds (k = 3) and bits per
/// second as megabits per second (k = -6).
std::string format_scaled(double value, int shift);

/// Parses a decimal number and returns it multiplied by `10^-shift`,
/// correctly rounded. Throws std::invalid_argument on malformed text.
double parse_scaled(std::string_view text, int shift);

/// Fixed-point rendering for human-readable tables.
std::string fixed(double value, int decimals);

}  // namespace edgecap::decimal
