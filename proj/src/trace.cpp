#include "sqzdisp/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sqzdisp {

void EsaSettings::validate() const {
    if (!(rbw > 0.0)) throw std::invalid_argument("EsaSettings: RBW must be positive");
    if (!(vbw > 0.0)) throw std::invalid_argument("EsaSettings: VBW must be positive");
    if (averages < 1) throw std::invalid_argument("EsaSettings: averages must be >= 1");
    if (samples < 1) throw std::invalid_argument("EsaSettings: samples must be >= 1");
    if (!(span >= 0.0) || !std::isfinite(span)) throw std::invalid_argument("EsaSettings: span must be finite and >= 0");
    if (!zero_span() && samples < 2) throw std::invalid_argument("EsaSettings: a swept trace needs at least 2 samples");
}

int EsaSettings::effective_averages() const {
    const double smoothing = std::max(1.0, std::round(rbw / vbw));
    return static_cast<int>(averages * smoothing);
}

std::vector<double> EsaSettings::axis() const {
    validate();
    std::vector<double> out(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        if (zero_span())
            out[static_cast<std::size_t>(k)] = k / vbw;
        else
            out[static_cast<std::size_t>(k)] = center_freq - 0.5 * span + span * k / (samples - 1);
    }
    return out;
}

void SpectrumTrace::validate() const {
    if (axis.size() != values.size()) throw std::invalid_argument("SpectrumTrace: axis and values differ in length");
    for (std::size_t k = 1; k < axis.size(); ++k)
        if (!(axis[k] > axis[k - 1])) throw std::invalid_argument("SpectrumTrace: axis not strictly increasing");
    for (double v : values)
        if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("SpectrumTrace: values must be finite and >= 0");
}

}  // namespace sqzdisp
