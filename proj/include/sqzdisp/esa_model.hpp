#pragma once

#include <cstdint>
#include <optional>

#include "sqzdisp/execution.hpp"
#include "sqzdisp/trace.hpp"

namespace sqzdisp {

[[nodiscard]] double optical_frequency(double wavelength);

/// N = P / (h nu RBW): photons collected in one measurement interval 1/RBW.
[[nodiscard]] double photons_per_measurement(double power, double frequency, double rbw);

/// d_mod^2 + d_noise^2 (m^2).
[[nodiscard]] double esa_response(double d_mod, double d_noise);

/// Linear displacement ramp d(t) = offset + rate t.
struct Ramp {
    double rate = 0.0;    ///< m/s
    double offset = 0.0;  ///< m
    [[nodiscard]] double at(double t) const { return offset + rate * t; }
};

/// Zero-span trace of a ramped displacement. Each point is the average of
/// K = effective_averages() envelope powers |d_mod + n|^2 where n is complex
/// Gaussian noise of power d_noise^2 noise_var, so noise-only points are
/// Gamma(K, mean/K) distributed. Values in m^2, axis in s.
[[nodiscard]] SpectrumTrace generate_ramp_trace(double noise_var, double d_noise, const Ramp& ramp,
                                                const EsaSettings& settings, std::uint64_t seed,
                                                Exec exec = Exec::serial);

/// Modulation tone seen through the RBW filter (Gaussian, FWHM = RBW).
struct Tone {
    double frequency = 0.0;  ///< Hz
    double d_mod = 0.0;      ///< m
};

/// Swept trace around settings.center_freq with an optional tone. Values in m^2.
[[nodiscard]] SpectrumTrace generate_spectrum_trace(double noise_var, double d_noise, std::optional<Tone> tone,
                                                    const EsaSettings& settings, std::uint64_t seed,
                                                    Exec exec = Exec::serial);

/// Power response of the RBW filter at `offset` Hz from its centre.
[[nodiscard]] double rbw_response(double offset, double rbw);

/// Divide (or multiply) every value by d_noise^2, switching between m^2 and
/// QNL-relative units.
[[nodiscard]] SpectrumTrace to_qnl_units(const SpectrumTrace& trace, double d_noise);
[[nodiscard]] SpectrumTrace to_displacement_units(const SpectrumTrace& trace, double d_noise);

/// Variance of a noise-only point with mean `mean` after K-fold averaging.
[[nodiscard]] double floor_variance(double mean, int effective_averages);

/// Upper `confidence` quantile of Gamma(K, 1/K), the normalized floor.
[[nodiscard]] double floor_quantile(double confidence, int effective_averages);

/// Coherent floor d_noise for which a ramp is first detected at `d_target`
/// with the given confidence: d_noise^2 (q - 1) = d_target^2.
[[nodiscard]] double calibrate_noise_floor(double d_target, double confidence, int effective_averages);

/// Empirical upper quantile (nearest rank) of the trace values.
[[nodiscard]] double empirical_quantile(const SpectrumTrace& trace, double confidence);

/// A ramp measurement and the noise-only record taken with the same beam.
struct RampRun {
    SpectrumTrace noise_only;
    SpectrumTrace ramp;
    Ramp profile;
};

/// Ramp signal model values = alpha + beta d(t)^2. alpha is the mean of
/// the noise-only record; beta is the least-squares slope of the ramp above it.
struct RampFit {
    double alpha = 0;
    double beta = 0;
};
[[nodiscard]] RampFit fit_ramp(const RampRun& run);

/// Smallest ramp displacement whose averaged (fitted) signal exceeds the
/// noise-only confidence quantile. Throws NeverDetected if the fitted signal
/// stays below the threshold over the whole ramp.
[[nodiscard]] double detection_threshold(const RampRun& run, double confidence);

struct MinDetectable {
    double d_min_sqz = 0;
    double d_min_coh = 0;
    double improvement = 0;  ///< d_min_coh / d_min_sqz
};

[[nodiscard]] MinDetectable min_detectable(const RampRun& sqz, const RampRun& coh, double confidence);

/// Tone power and floor from a least-squares fit of a swept trace to
/// floor + S * rbw_response(f - f_tone).
struct ToneFit {
    double floor = 0;
    double signal = 0;
    [[nodiscard]] double snr() const { return signal / floor; }
};
[[nodiscard]] ToneFit fit_tone(const SpectrumTrace& trace, double tone_frequency);

}  // namespace sqzdisp
