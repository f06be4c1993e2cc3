#include "sqzdisp/units.hpp"

#include <charconv>
#include <cmath>
#include <utility>

namespace sqzdisp::units {

namespace {

struct Unit {
    std::string_view symbol;
    Dimension dim;
    double scale;
};

constexpr Unit table[] = {
    {"m", Dimension::length, 1.0},
    {"mm", Dimension::length, 1e-3},
    {"um", Dimension::length, 1e-6},
    {"µm", Dimension::length, 1e-6},
    {"nm", Dimension::length, 1e-9},
    {"pm", Dimension::length, 1e-12},
    {"A", Dimension::length, 1e-10},
    {"Å", Dimension::length, 1e-10},
    {"Hz", Dimension::frequency, 1.0},
    {"kHz", Dimension::frequency, 1e3},
    {"MHz", Dimension::frequency, 1e6},
    {"GHz", Dimension::frequency, 1e9},
    {"W", Dimension::power, 1.0},
    {"mW", Dimension::power, 1e-3},
    {"uW", Dimension::power, 1e-6},
    {"µW", Dimension::power, 1e-6},
    {"nW", Dimension::power, 1e-9},
    {"s", Dimension::time, 1.0},
    {"ms", Dimension::time, 1e-3},
    {"us", Dimension::time, 1e-6},
    {"µs", Dimension::time, 1e-6},
    {"rad", Dimension::angle, 1.0},
    {"mrad", Dimension::angle, 1e-3},
    {"deg", Dimension::angle, 3.14159265358979323846 / 180.0},
    {"dB", Dimension::decibel, 1.0},
    {"%", Dimension::dimensionless, 1e-2},
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

// Leading number and the rest of the text.
std::pair<double, std::string_view> split_number(std::string_view text) {
    const auto s = trim(text);
    double value = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), value);
    if (ec != std::errc() || ptr == first) throw UnitError("'" + std::string(text) + "' does not start with a number");
    if (!std::isfinite(value)) throw UnitError("'" + std::string(text) + "' is not finite");
    return {value, trim(std::string_view(ptr, static_cast<std::size_t>(s.data() + s.size() - ptr)))};
}

}  // namespace

std::string_view name(Dimension dim) {
    switch (dim) {
        case Dimension::length: return "length";
        case Dimension::frequency: return "frequency";
        case Dimension::power: return "power";
        case Dimension::time: return "time";
        case Dimension::angle: return "angle";
        case Dimension::decibel: return "decibel";
        case Dimension::dimensionless: return "dimensionless";
    }
    return "?";
}

double parse(std::string_view text, Dimension dim) {
    const auto [value, unit] = split_number(text);
    if (unit.empty()) {
        if (dim == Dimension::dimensionless) return value;
        throw UnitError("'" + std::string(text) + "' has no unit; expected a " + std::string(name(dim)));
    }
    for (const auto& u : table) {
        if (u.symbol != unit) continue;
        if (u.dim != dim)
            throw UnitError("'" + std::string(text) + "' is a " + std::string(name(u.dim)) + ", expected a " +
                            std::string(name(dim)));
        return value * u.scale;
    }
    throw UnitError("'" + std::string(text) + "': unknown unit '" + std::string(unit) + "'");
}

int parse_count(std::string_view text) {
    const auto s = trim(text);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw UnitError("'" + std::string(text) + "' is not an integer");
    if (value < 0) throw UnitError("'" + std::string(text) + "' is negative");
    return value;
}

}  // namespace sqzdisp::units
