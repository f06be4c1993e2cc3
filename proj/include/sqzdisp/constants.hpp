#pragma once

#include <numbers>

namespace sqzdisp::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double planck_h = 6.62607015e-34;     // J s (exact, SI 2019)
inline constexpr double speed_of_light = 299792458.0;  // m/s (exact)

}  // namespace sqzdisp::constants
