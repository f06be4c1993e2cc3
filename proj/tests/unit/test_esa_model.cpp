#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/gamma.hpp>

#include "oracles.hpp"
#include "sqzdisp/errors.hpp"
#include "sqzdisp/esa_model.hpp"
#include "sqzdisp/rng.hpp"

using namespace sqzdisp;

namespace {
constexpr double h = 6.62607015e-34;
constexpr double c = 299792458.0;

EsaSettings zero_span(double rbw, double vbw, int averages, int samples) {
    EsaSettings s;
    s.rbw = rbw;
    s.vbw = vbw;
    s.averages = averages;
    s.samples = samples;
    return s;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
}

// Noise-only record and ramp record of one beam; the two noise streams are
// shared between beams so comparisons are paired.
RampRun ramp_run(double noise_var, double d_noise, double rate, const EsaSettings& s, std::uint64_t seed,
                 int noise_samples = 1 << 16) {
    EsaSettings n = s;
    n.samples = noise_samples;
    RampRun r;
    r.profile = Ramp{rate, 0.0};
    r.noise_only = generate_ramp_trace(noise_var, d_noise, Ramp{}, n, rng::split(seed, 1));
    r.ramp = generate_ramp_trace(noise_var, d_noise, r.profile, s, rng::split(seed, 2));
    return r;
}
}  // namespace

TEST_CASE("photons per measurement interval") {
    const double nu = optical_frequency(1064e-9);
    CHECK(nu == doctest::Approx(c / 1064e-9));
    CHECK(photons_per_measurement(h * nu * 1e5, nu, 1e5) == doctest::Approx(1.0).epsilon(1e-14));
    const double n = photons_per_measurement(1e-3, nu, 1e5);
    CHECK(n == doctest::Approx(5.36e10).epsilon(1e-3));
    CHECK(photons_per_measurement(1e-3, nu, 5e4) == doctest::Approx(2 * n));
    CHECK_THROWS_AS((void)photons_per_measurement(1e-3, nu, 0.0), std::invalid_argument);
}

TEST_CASE("esa_response") {
    CHECK(esa_response(0.0, 2.0) == 4.0);
    CHECK(esa_response(1.5, 1.5) == 2 * 1.5 * 1.5);
    CHECK(esa_response(3.0, 4.0) == 25.0);
    CHECK_THROWS_AS((void)esa_response(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("settings") {
    CHECK_THROWS_AS((void)zero_span(0.0, 1.0, 1, 10).validate(), std::invalid_argument);
    CHECK_THROWS_AS((void)zero_span(1.0, 0.0, 1, 10).validate(), std::invalid_argument);
    CHECK_THROWS_AS((void)zero_span(1.0, 1.0, 0, 10).validate(), std::invalid_argument);
    CHECK(zero_span(1e5, 100, 10, 5).effective_averages() == 10000);
    CHECK(zero_span(1e3, 1e3, 20, 5).effective_averages() == 20);
    CHECK(zero_span(1e3, 1e4, 3, 5).effective_averages() == 3);
    const auto ax = zero_span(1e3, 250.0, 1, 4).axis();
    CHECK(ax == std::vector<double>{0.0, 0.004, 0.008, 0.012});
    EsaSettings swept = zero_span(1e4, 100, 1, 5);
    swept.center_freq = 5e6;
    swept.span = 1e5;
    CHECK(swept.axis().front() == doctest::Approx(4.95e6));
    CHECK(swept.axis().back() == doctest::Approx(5.05e6));
}

TEST_CASE("SpectrumTrace validation") {
    SpectrumTrace t;
    t.axis = {0, 1, 1};
    t.values = {1, 1, 1};
    CHECK_THROWS_AS((void)t.validate(), std::invalid_argument);
    t.axis = {0, 1, 2};
    t.values = {1, -1, 1};
    CHECK_THROWS_AS((void)t.validate(), std::invalid_argument);
}

TEST_CASE("zero ramp gives a flat floor at d_noise^2") {
    const auto s = zero_span(1e3, 1e3, 20, 20000);
    const double dn = 3e-10;
    const auto t = generate_ramp_trace(1.0, dn, Ramp{}, s, 11);
    const double m = mean(t.values);
    const double se = dn * dn / std::sqrt(20.0 * t.size());
    CHECK(std::abs(m - dn * dn) < 4 * se);
    // Flat: first and second halves agree.
    const std::vector<double> a(t.values.begin(), t.values.begin() + 10000), b(t.values.begin() + 10000, t.values.end());
    CHECK(std::abs(mean(a) - mean(b)) < 4 * std::sqrt(2.0) * dn * dn / std::sqrt(20.0 * 10000));
}

TEST_CASE("squeezed floor over coherent floor is the noise variance") {
    const auto s = zero_span(1e3, 1e3, 20, 20000);
    const double v = std::pow(10.0, -0.284);
    const auto coh = generate_ramp_trace(1.0, 1.0, Ramp{}, s, 21);
    const auto sqz = generate_ramp_trace(v, 1.0, Ramp{}, s, 22);
    const double ratio = mean(sqz.values) / mean(coh.values);
    // Two independent means, each with relative error 1/sqrt(K n).
    CHECK(std::abs(ratio - v) < 4 * v * std::sqrt(2.0 / (20.0 * 20000)));
}

TEST_CASE("traces are deterministic and thread-count independent") {
    const auto s = zero_span(1e3, 1e3, 5, 4096);
    const Ramp r{1e-8, 0.0};
    const auto a = generate_ramp_trace(0.7, 2e-10, r, s, 99, Exec::serial);
    const auto b = generate_ramp_trace(0.7, 2e-10, r, s, 99, Exec::parallel);
    const auto c2 = generate_ramp_trace(0.7, 2e-10, r, s, 99, Exec::parallel);
    CHECK(a.values == b.values);
    CHECK(b.values == c2.values);
    CHECK(generate_ramp_trace(0.7, 2e-10, r, s, 100).values != a.values);
    EsaSettings swept = zero_span(1e4, 100, 2, 301);
    swept.center_freq = 5e6;
    swept.span = 1e5;
    const Tone tone{5e6, 1e-9};
    CHECK(generate_spectrum_trace(1.0, 1e-9, tone, swept, 5, Exec::serial).values ==
          generate_spectrum_trace(1.0, 1e-9, tone, swept, 5, Exec::parallel).values);
    CHECK_THROWS_AS((void)generate_ramp_trace(1.0, 1.0, r, swept, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)generate_spectrum_trace(1.0, 1.0, tone, s, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)generate_ramp_trace(0.0, 1.0, r, s, 1), std::invalid_argument);
}

TEST_CASE("floor statistics with VBW = RBW") {
    for (int averages : {1, 4, 20}) {
        const auto s = zero_span(1e3, 1e3, averages, 10000);
        const auto t = generate_ramp_trace(1.0, 1.0, Ramp{}, s, 31 + averages);
        const double K = averages;
        const double model = floor_variance(1.0, averages);
        CHECK(model == doctest::Approx(1.0 / K));
        // Standard error of a sample variance of Gamma(K) data (excess kurtosis 6/K).
        const double se = model * std::sqrt(2.0 / (t.size() - 1) + 6.0 / (K * t.size()));
        CHECK(std::abs(variance(t.values) - model) < 3 * se);
    }
}

TEST_CASE("floor points are Gamma(K, mean/K): Kolmogorov-Smirnov") {
    const int K = 20;
    const auto s = zero_span(1e3, 1e3, K, 20000);
    auto v = generate_ramp_trace(1.0, 1.0, Ramp{}, s, 41).values;
    std::sort(v.begin(), v.end());
    const boost::math::gamma_distribution<double> g(K, 1.0 / K);
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = boost::math::cdf(g, v[i]);
        d = std::max({d, std::abs(f - double(i) / v.size()), std::abs(f - double(i + 1) / v.size())});
    }
    // 0.1% critical value.
    CHECK(d < 1.95 / std::sqrt(double(v.size())));
}

TEST_CASE("unit conversions round trip") {
    const auto s = zero_span(1e3, 1e3, 3, 1000);
    const auto t = generate_ramp_trace(1.0, 2.7e-10, Ramp{}, s, 51);
    const auto back = to_displacement_units(to_qnl_units(t, 2.7e-10), 2.7e-10);
    for (std::size_t i = 0; i < t.size(); ++i) REQUIRE(back.values[i] == doctest::Approx(t.values[i]).epsilon(1e-12));
    CHECK(to_qnl_units(t, 2.7e-10).value_unit == "QNL");
    CHECK(back.value_unit == "m^2");
}

TEST_CASE("quantiles and calibration") {
    for (int K : {1, 5, 20})
        for (double conf : {0.9, 0.95, 0.99}) {
            const boost::math::gamma_distribution<double> g(K, 1.0 / K);
            CHECK(floor_quantile(conf, K) == doctest::Approx(boost::math::quantile(g, conf)).epsilon(1e-12));
        }
    const double q = floor_quantile(0.99, 20);
    const double dn = calibrate_noise_floor(2.3e-10, 0.99, 20);
    CHECK(dn * dn * (q - 1.0) == doctest::Approx(2.3e-10 * 2.3e-10).epsilon(1e-12));
    SpectrumTrace t;
    for (int i = 1; i <= 100; ++i) {
        t.axis.push_back(i);
        t.values.push_back(101 - i);
    }
    // Nearest rank: ceil(p n)-th smallest.
    CHECK(empirical_quantile(t, 0.99) == 99.0);
    CHECK(empirical_quantile(t, 0.5) == 50.0);
    CHECK(empirical_quantile(t, 0.951) == 96.0);
    CHECK_THROWS_AS((void)empirical_quantile(t, 1.0), std::invalid_argument);
}

TEST_CASE("ramp fit recovers the floor and the unit slope") {
    const auto s = zero_span(1e3, 1e3, 20, 8192);
    const double dn = 3e-10, rate = 1.2e-9 / 8.192;
    const auto run = ramp_run(1.0, dn, rate, s, 61);
    const auto fit = fit_ramp(run);
    CHECK(fit.alpha == doctest::Approx(dn * dn).epsilon(0.01));
    CHECK(fit.beta == doctest::Approx(1.0).epsilon(0.02));
    RampRun flat = run;
    flat.profile = Ramp{};
    CHECK_THROWS_AS((void)fit_ramp(flat), std::invalid_argument);
}

TEST_CASE("min_detectable examples") {
    const auto s = zero_span(1e3, 1e3, 20, 8192);
    const double dn = calibrate_noise_floor(2.3e-10, 0.99, 20);
    const double rate = 1.2e-9 / 8.192;
    const auto coh = ramp_run(1.0, dn, rate, s, 71);
    // Equal noise, independent records.
    const auto coh2 = ramp_run(1.0, dn, rate, s, 72);
    const auto same = min_detectable(coh2, coh, 0.99);
    CHECK(same.improvement == doctest::Approx(1.0).epsilon(0.03));
    CHECK(same.d_min_coh == doctest::Approx(2.3e-10).epsilon(0.03));

    const double v = std::pow(10.0, -0.284);
    const auto sqz = ramp_run(v, dn, rate, s, 71);
    const auto r99 = min_detectable(sqz, coh, 0.99);
    const auto r95 = min_detectable(sqz, coh, 0.95);
    CHECK(r99.improvement == doctest::Approx(std::sqrt(1.0 / v)).epsilon(0.01));
    CHECK(std::abs(r99.improvement - 1.5) / 1.5 < 0.15);
    CHECK(r95.improvement == doctest::Approx(r99.improvement).epsilon(0.01));
    CHECK(r99.d_min_coh / r99.d_min_sqz == doctest::Approx(r99.improvement));
    CHECK(r95.d_min_coh < r99.d_min_coh);
}

TEST_CASE("d_min monotonicity") {
    const double dn = 3e-10, rate = 2.4e-9 / 8.192;
    auto d_min = [&](double var, int averages) {
        return detection_threshold(ramp_run(var, dn, rate, zero_span(1e3, 1e3, averages, 8192), 81), 0.99);
    };
    double prev = 1.0;
    for (int a : {1, 4, 16, 64}) {
        const double d = d_min(1.0, a);
        CHECK(d <= prev);
        prev = d;
    }
    prev = 0.0;
    for (double v : {0.3, 0.5, 0.8, 1.0, 1.5}) {
        const double d = d_min(v, 10);
        CHECK(d >= prev);
        prev = d;
    }
}

TEST_CASE("a ramp below the threshold is never detected") {
    const auto s = zero_span(1e3, 1e3, 20, 2048);
    const auto run = ramp_run(1.0, 1e-9, 1e-13, s, 91);
    CHECK_THROWS_AS((void)detection_threshold(run, 0.99), NeverDetected);
}

TEST_CASE("RBW response and tone fit") {
    CHECK(rbw_response(0.0, 1e4) == 1.0);
    CHECK(rbw_response(5e3, 1e4) == doctest::Approx(0.5));
    EsaSettings s = zero_span(1e4, 100, 20, 601);
    s.center_freq = 4.976e6;
    s.span = 1.5e5;
    // Exact synthetic trace.
    SpectrumTrace t;
    t.settings = s;
    t.axis = s.axis();
    for (double f : t.axis) t.values.push_back(2.0 + 7.0 * rbw_response(f - 4.976e6, 1e4));
    const auto fit = fit_tone(t, 4.976e6);
    CHECK(fit.floor == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.signal == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(fit.snr() == doctest::Approx(3.5).epsilon(1e-12));
    // Generated trace: SNR of the tone is (d_mod / d_noise)^2.
    const double dn = 1e-9;
    const auto g = generate_spectrum_trace(1.0, dn, Tone{4.976e6, std::sqrt(2.8) * dn}, s, 17);
    CHECK(fit_tone(g, 4.976e6).snr() == doctest::Approx(2.8).epsilon(0.03));
}
