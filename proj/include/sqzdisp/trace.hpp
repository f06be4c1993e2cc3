#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sqzdisp {

/// Spectrum analyser settings. A zero span selects the time-domain
/// (zero-span) mode with sample spacing 1/VBW.
struct EsaSettings {
    double center_freq = 0.0;  ///< Hz
    double span = 0.0;         ///< Hz
    double rbw = 1.0;          ///< Hz
    double vbw = 1.0;          ///< Hz
    int averages = 1;
    int samples = 1;

    void validate() const;
    [[nodiscard]] bool zero_span() const { return span == 0.0; }
    /// Independent envelope samples behind each displayed point:
    /// trace averages times the video filter's RBW/VBW smoothing.
    [[nodiscard]] int effective_averages() const;
    /// Axis of the trace: time (s) in zero span, otherwise frequency (Hz).
    [[nodiscard]] std::vector<double> axis() const;
};

struct SpectrumTrace {
    std::vector<double> axis;
    std::vector<double> values;
    EsaSettings settings;  ///< rbw = vbw = 0 for traces that are not ESA output
    std::string axis_unit;
    std::string value_unit;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument unless the axis is strictly increasing
    /// and every value is finite and non-negative.
    void validate() const;
    [[nodiscard]] std::size_t size() const { return axis.size(); }
};

}  // namespace sqzdisp
