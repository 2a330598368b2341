#pragma once

#include <string>

namespace morld {

// Shortest form with at most 9 significant digits, '.' separator, no locale.
std::string format_number(double value);

} // namespace morld
