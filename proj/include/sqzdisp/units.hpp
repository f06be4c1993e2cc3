#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sqzdisp::units {

enum class Dimension {
    length,         ///< m, mm, um, nm, pm, A
    frequency,      ///< Hz, kHz, MHz, GHz
    power,          ///< W, mW, uW, nW
    time,           ///< s, ms, us
    angle,          ///< rad, mrad, deg
    decibel,        ///< dB
    dimensionless,  ///< bare number or percent
};

struct UnitError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Parses "<number> <unit>" into SI base units (dB stays in dB). A bare
/// number is accepted only for dimensionless quantities; "95 %" gives 0.95.
/// Throws UnitError naming the problem.
[[nodiscard]] double parse(std::string_view text, Dimension dim);

/// Non-negative integer count, no unit.
[[nodiscard]] int parse_count(std::string_view text);

[[nodiscard]] std::string_view name(Dimension dim);

}  // namespace sqzdisp::units
