#include "sqzdisp/esa_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/gamma.hpp>

#include "sqzdisp/constants.hpp"
#include "sqzdisp/errors.hpp"
#include "sqzdisp/rng.hpp"

namespace sqzdisp {

namespace {

// Average of k envelope powers |d + n|^2, n complex Gaussian with E|n|^2 = noise_power.
double averaged_power(rng::Stream& s, double d, double noise_power, int k) {
    const double sigma = std::sqrt(0.5 * noise_power);
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        const double re = d + sigma * s.normal();
        const double im = sigma * s.normal();
        sum += re * re + im * im;
    }
    return sum / k;
}

template <class Point>
void fill(int samples, Exec exec, Point&& point) {
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (int k = 0; k < samples; ++k) point(k);
    } else {
        for (int k = 0; k < samples; ++k) point(k);
    }
}

// Least squares of y against [1, x]; returns intercept and slope.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("linear_fit: regressor is constant");
    const double slope = sxy / sxx;
    return {my - slope * mx, slope};
}

void check_noise(double noise_var, double d_noise) {
    if (!(noise_var > 0.0)) throw std::invalid_argument("noise variance must be positive");
    if (!(d_noise > 0.0)) throw std::invalid_argument("d_noise must be positive");
}

}  // namespace

double optical_frequency(double wavelength) {
    if (!(wavelength > 0.0)) throw std::invalid_argument("optical_frequency: wavelength must be positive");
    return constants::speed_of_light / wavelength;
}

double photons_per_measurement(double power, double frequency, double rbw) {
    if (!(power > 0.0) || !(frequency > 0.0) || !(rbw > 0.0))
        throw std::invalid_argument("photons_per_measurement: inputs must be positive");
    return power / (constants::planck_h * frequency * rbw);
}

double esa_response(double d_mod, double d_noise) {
    if (!(d_mod >= 0.0) || !(d_noise >= 0.0)) throw std::invalid_argument("esa_response: inputs must be >= 0");
    return d_mod * d_mod + d_noise * d_noise;
}

SpectrumTrace generate_ramp_trace(double noise_var, double d_noise, const Ramp& ramp, const EsaSettings& settings,
                                  std::uint64_t seed, Exec exec) {
    settings.validate();
    if (!settings.zero_span()) throw std::invalid_argument("generate_ramp_trace: needs zero span");
    check_noise(noise_var, d_noise);

    SpectrumTrace out;
    out.settings = settings;
    out.axis = settings.axis();
    out.values.resize(out.axis.size());
    out.axis_unit = "s";
    out.value_unit = "m^2";
    out.seed = seed;

    const int k = settings.effective_averages();
    const double noise_power = d_noise * d_noise * noise_var;
    fill(settings.samples, exec, [&](int i) {
        rng::Stream s(rng::split(seed, static_cast<std::uint64_t>(i)));
        const auto idx = static_cast<std::size_t>(i);
        out.values[idx] = averaged_power(s, std::abs(ramp.at(out.axis[idx])), noise_power, k);
    });
    return out;
}

double rbw_response(double offset, double rbw) {
    if (!(rbw > 0.0)) throw std::invalid_argument("rbw_response: RBW must be positive");
    return std::exp(-4.0 * std::log(2.0) * offset * offset / (rbw * rbw));
}

SpectrumTrace generate_spectrum_trace(double noise_var, double d_noise, std::optional<Tone> tone,
                                      const EsaSettings& settings, std::uint64_t seed, Exec exec) {
    settings.validate();
    if (settings.zero_span()) throw std::invalid_argument("generate_spectrum_trace: needs a non-zero span");
    check_noise(noise_var, d_noise);

    SpectrumTrace out;
    out.settings = settings;
    out.axis = settings.axis();
    out.values.resize(out.axis.size());
    out.axis_unit = "Hz";
    out.value_unit = "m^2";
    out.seed = seed;

    const int k = settings.effective_averages();
    const double noise_power = d_noise * d_noise * noise_var;
    fill(settings.samples, exec, [&](int i) {
        rng::Stream s(rng::split(seed, static_cast<std::uint64_t>(i)));
        const auto idx = static_cast<std::size_t>(i);
        double d = 0.0;
        if (tone) d = tone->d_mod * std::sqrt(rbw_response(out.axis[idx] - tone->frequency, settings.rbw));
        out.values[idx] = averaged_power(s, d, noise_power, k);
    });
    return out;
}

SpectrumTrace to_qnl_units(const SpectrumTrace& trace, double d_noise) {
    if (!(d_noise > 0.0)) throw std::invalid_argument("to_qnl_units: d_noise must be positive");
    SpectrumTrace out = trace;
    const double scale = d_noise * d_noise;
    for (double& v : out.values) v /= scale;
    out.value_unit = "QNL";
    return out;
}

SpectrumTrace to_displacement_units(const SpectrumTrace& trace, double d_noise) {
    if (!(d_noise > 0.0)) throw std::invalid_argument("to_displacement_units: d_noise must be positive");
    SpectrumTrace out = trace;
    const double scale = d_noise * d_noise;
    for (double& v : out.values) v *= scale;
    out.value_unit = "m^2";
    return out;
}

double floor_variance(double mean, int effective_averages) {
    if (effective_averages < 1) throw std::invalid_argument("floor_variance: averages must be >= 1");
    return mean * mean / effective_averages;
}

double floor_quantile(double confidence, int effective_averages) {
    if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
    if (effective_averages < 1) throw std::invalid_argument("floor_quantile: averages must be >= 1");
    const double k = effective_averages;
    return boost::math::quantile(boost::math::gamma_distribution<double>(k, 1.0 / k), confidence);
}

double calibrate_noise_floor(double d_target, double confidence, int effective_averages) {
    if (!(d_target > 0.0)) throw std::invalid_argument("calibrate_noise_floor: target must be positive");
    return d_target / std::sqrt(floor_quantile(confidence, effective_averages) - 1.0);
}

double empirical_quantile(const SpectrumTrace& trace, double confidence) {
    if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
    if (trace.values.empty()) throw std::invalid_argument("empirical_quantile: empty trace");
    std::vector<double> v = trace.values;
    const auto n = v.size();
    auto rank = static_cast<std::size_t>(std::ceil(confidence * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n) - 1;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(rank), v.end());
    return v[rank];
}

RampFit fit_ramp(const RampRun& run) {
    if (run.noise_only.values.empty() || run.ramp.values.empty()) throw std::invalid_argument("fit_ramp: empty trace");
    double alpha = 0.0;
    for (double v : run.noise_only.values) alpha += v;
    alpha /= static_cast<double>(run.noise_only.values.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < run.ramp.axis.size(); ++i) {
        const double d = run.profile.at(run.ramp.axis[i]);
        sxx += d * d * d * d;
        sxy += d * d * (run.ramp.values[i] - alpha);
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_ramp: ramp never leaves zero");
    return {alpha, sxy / sxx};
}

double detection_threshold(const RampRun& run, double confidence) {
    const double q = empirical_quantile(run.noise_only, confidence);
    const auto fit = fit_ramp(run);
    if (!(fit.beta > 0.0)) throw NeverDetected("ramp signal does not grow with displacement");
    const double d_min = std::sqrt(std::max(0.0, (q - fit.alpha) / fit.beta));
    double d_max = 0.0;
    for (double t : run.ramp.axis) d_max = std::max(d_max, std::abs(run.profile.at(t)));
    if (d_min > d_max)
        throw NeverDetected("ramp up to " + std::to_string(d_max) + " m never crosses the " +
                            std::to_string(confidence) + " threshold");
    return d_min;
}

MinDetectable min_detectable(const RampRun& sqz, const RampRun& coh, double confidence) {
    MinDetectable out;
    out.d_min_sqz = detection_threshold(sqz, confidence);
    out.d_min_coh = detection_threshold(coh, confidence);
    out.improvement = out.d_min_coh / out.d_min_sqz;
    return out;
}

ToneFit fit_tone(const SpectrumTrace& trace, double tone_frequency) {
    if (!(trace.settings.rbw > 0.0)) throw std::invalid_argument("fit_tone: trace has no RBW");
    std::vector<double> x(trace.axis.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rbw_response(trace.axis[i] - tone_frequency, trace.settings.rbw);
    const auto [floor, signal] = linear_fit(x, trace.values);
    return {floor, signal};
}

}  // namespace sqzdisp
