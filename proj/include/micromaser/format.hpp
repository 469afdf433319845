#pragma once

#include <string>

namespace micromaser {

// Shortest decimal that parses back to the identical double.
std::string format_shortest(double x);
// Shortest round-trip, always in scientific notation (used for times).
std::string format_scientific(double x);
double parse_double(const std::string& text);

}  // namespace micromaser
