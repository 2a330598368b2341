#include "morld/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace morld {

std::string format_number(double value) {
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    if (value == 0.0)
        value = 0.0; // drop the sign of -0
    std::array<char, 64> buf{};
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 9);
    return std::string(buf.data(), res.ptr);
}

} // namespace morld
