#include "sqzdisp/ring_cavity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sqzdisp/constants.hpp"
#include "sqzdisp/errors.hpp"

namespace sqzdisp {

namespace {

constexpr double two_pi = 2.0 * constants::pi;

double wrap_phase(double phi) {
    double w = std::fmod(phi, two_pi);
    if (w < 0.0) w += two_pi;
    return w;
}

double circular_distance(double a, double b) {
    const double d = wrap_phase(a - b);
    return std::min(d, two_pi - d);
}

struct Amplitudes {
    double R1, R2, R3, loss;
    double r1, rho;  // input coupler; remaining round trip r2 r3 sqrt(1 - loss)
    double g;
};

Amplitudes amplitudes(const CavityConfig& c) {
    const auto R = c.effective_R();
    Amplitudes a{R[0], R[1], R[2], c.intracavity_loss, 0, 0, 0};
    a.r1 = std::sqrt(R[0]);
    a.rho = std::sqrt(R[1] * R[2] * (1.0 - c.intracavity_loss));
    a.g = a.r1 * a.rho;
    return a;
}

Lineshape airy(const Amplitudes& a, double phi) {
    const double c = std::cos(phi);
    const double denom = 1.0 - 2.0 * a.g * c + a.g * a.g;
    const double T1 = 1.0 - a.R1, T2 = 1.0 - a.R2, T3 = 1.0 - a.R3;
    Lineshape out;
    out.t = T1 * T2 * a.R3 / denom;
    out.r = (a.R1 - 2.0 * a.r1 * a.rho * c + a.rho * a.rho) / denom;
    out.absorbed = T1 * (T3 + a.R2 * a.R3 * a.loss) / denom;
    return out;
}

}  // namespace

void CavityConfig::validate() const {
    if (!(round_trip_length > 0.0)) throw std::invalid_argument("CavityConfig: round-trip length must be positive");
    for (double R : mirror_R)
        if (!(R > 0.0 && R <= 1.0)) throw std::invalid_argument("CavityConfig: reflectivities must lie in (0, 1]");
    if (!(intracavity_loss >= 0.0 && intracavity_loss < 1.0))
        throw std::invalid_argument("CavityConfig: intracavity loss must lie in [0, 1)");
    if (!(roc_curved > 0.0)) throw std::invalid_argument("CavityConfig: radius of curvature must be positive");
    if (finesse && !(*finesse > 0.0)) throw std::invalid_argument("CavityConfig: finesse must be positive");
    if (fsr && !(*fsr > 0.0)) throw std::invalid_argument("CavityConfig: FSR must be positive");
    if (finesse) {
        const auto R = effective_R();
        if (!(R[0] > 0.0 && R[0] < 1.0))
            throw std::invalid_argument("CavityConfig: finesse unreachable with the third mirror and loss given");
    }
}

std::array<double, 3> CavityConfig::effective_R() const {
    if (!finesse) return mirror_R;
    // Solve pi sqrt(g) / (1 - g) = F for the round-trip product g, then share
    // it equally between the couplers.
    const double F = *finesse;
    const double s = (-constants::pi + std::sqrt(constants::pi * constants::pi + 4.0 * F * F)) / (2.0 * F);
    const double g = s * s;
    const double rest = std::sqrt(mirror_R[2] * (1.0 - intracavity_loss));
    const double Rc = g / rest;
    return {Rc, Rc, mirror_R[2]};
}

double CavityConfig::round_trip_amplitude() const { return amplitudes(*this).g; }

double CavityConfig::free_spectral_range() const {
    return fsr ? *fsr : constants::speed_of_light / round_trip_length;
}

double CavityConfig::finesse_value() const {
    const double g = round_trip_amplitude();
    return constants::pi * std::sqrt(g) / (1.0 - g);
}

double CavityConfig::linewidth() const { return free_spectral_range() / finesse_value(); }

bool CavityConfig::impedance_matched(double tol) const {
    const auto a = amplitudes(*this);
    return std::abs(a.r1 - a.rho) <= tol;
}

CavityConfig CavityConfig::nominal() {
    CavityConfig c;
    c.finesse = 31.0;
    return c;
}

double round_trip_gouy(const CavityConfig& config) {
    config.validate();
    if (config.gouy) return *config.gouy;
    // Start just after the curved mirror: free propagation over the round
    // trip (the flats are identity), then the mirror as a lens f = R/2.
    const double L = config.round_trip_length;
    const double R = config.roc_curved;
    const double A = 1.0 - 2.0 * L / R;
    const double D = 1.0;
    const double half_trace = 0.5 * (A + D);
    if (!(std::abs(half_trace) < 1.0))
        throw UnstableCavity("round trip ray matrix has |A + D| / 2 = " + std::to_string(std::abs(half_trace)));
    return std::acos(half_trace);
}

Lineshape family_lineshape(const CavityConfig& config, int order, double phi_fund) {
    if (order < 0) throw std::invalid_argument("family_lineshape: negative order");
    const double psi = round_trip_gouy(config);
    return airy(amplitudes(config), phi_fund + order * psi);
}

Lineshape mode_lineshape(const CavityConfig& config, int m, int n, double phi_fund) {
    if (m < 0 || n < 0) throw std::invalid_argument("mode_lineshape: negative index");
    return family_lineshape(config, m + n, phi_fund);
}

double off_resonance_reflection(const CavityConfig& config) {
    config.validate();
    return airy(amplitudes(config), constants::pi).r;
}

double mean_transmission(const CavityConfig& config) {
    config.validate();
    const auto a = amplitudes(config);
    return (1.0 - a.R1) * (1.0 - a.R2) * a.R3 / (1.0 - a.g * a.g);
}

double mean_reflection(const CavityConfig& config) {
    config.validate();
    const auto a = amplitudes(config);
    return 1.0 - (1.0 - a.R1) * (1.0 - a.rho * a.rho) / (1.0 - a.g * a.g);
}

double family_resonance(const CavityConfig& config, int order) {
    return wrap_phase(-order * round_trip_gouy(config));
}

double sideband_transmission(const CavityConfig& config, double offset) {
    return family_lineshape(config, 0, two_pi * offset / config.free_spectral_range()).t;
}

SpectrumTrace scan_reflection(const CavityConfig& config, const ExpansionCoefficients& incident, double phi_lo,
                              double phi_hi, int samples, Exec exec) {
    if (samples < 2) throw std::invalid_argument("scan_reflection: need at least 2 samples");
    if (!(phi_hi > phi_lo)) throw std::invalid_argument("scan_reflection: empty phase range");
    config.validate();
    const double psi = round_trip_gouy(config);
    const auto a = amplitudes(config);
    const auto families = incident.family_weights();

    SpectrumTrace out;
    out.axis.resize(static_cast<std::size_t>(samples));
    out.values.resize(static_cast<std::size_t>(samples));
    out.axis_unit = "rad";
    out.value_unit = "fraction";
    out.settings.rbw = 0.0;
    out.settings.vbw = 0.0;
    out.settings.samples = samples;

    auto point = [&](int k) {
        const double phi = phi_lo + (phi_hi - phi_lo) * k / (samples - 1);
        double sum = 0.0;
        for (std::size_t N = 0; N < families.size(); ++N)
            if (families[N] > 0.0) sum += families[N] * airy(a, phi + static_cast<double>(N) * psi).r;
        out.axis[static_cast<std::size_t>(k)] = phi;
        out.values[static_cast<std::size_t>(k)] = sum;
    };

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (int k = 0; k < samples; ++k) point(k);
    } else {
        for (int k = 0; k < samples; ++k) point(k);
    }
    return out;
}

CombinationEfficiency combination_efficiency(const CavityConfig& config, const ModeSpec& transmitted_mode,
                                             const ExpansionCoefficients& reflected_expansion, double lock_phi) {
    config.validate();
    const auto a = amplitudes(config);
    const double psi = round_trip_gouy(config);

    CombinationEfficiency out;
    out.eta_trans = airy(a, lock_phi + transmitted_mode.order() * psi).t;
    const auto families = reflected_expansion.family_weights();
    for (std::size_t N = 0; N < families.size(); ++N) {
        out.represented_weight += families[N];
        if (families[N] > 0.0) out.eta_refl += families[N] * airy(a, lock_phi + static_cast<double>(N) * psi).r;
    }
    const double missing = std::max(0.0, 1.0 - out.represented_weight);
    out.eta_refl_total = out.eta_refl + missing * mean_reflection(config);
    return out;
}

std::vector<Dip> analyze_dips(const SpectrumTrace& scan, const CavityConfig& config,
                              const ExpansionCoefficients& incident) {
    if (scan.axis.empty()) throw std::invalid_argument("analyze_dips: empty scan");
    const auto families = incident.family_weights();
    const double fwhm = two_pi / config.finesse_value();
    double total = 0.0;
    for (double w : families) total += w;
    const double r_off = off_resonance_reflection(config);
    const double baseline = total * r_off;
    const auto a = amplitudes(config);
    const double psi = round_trip_gouy(config);

    std::vector<Dip> dips;
    for (std::size_t N = 0; N < families.size(); ++N) {
        if (!(families[N] > 0.0)) continue;
        Dip d;
        d.order = static_cast<int>(N);
        d.phase = family_resonance(config, d.order);
        d.weight = families[N];

        double lowest = std::numeric_limits<double>::infinity();
        double nearest = std::numeric_limits<double>::infinity();
        double nearest_value = 0.0;
        for (std::size_t k = 0; k < scan.axis.size(); ++k) {
            const double dist = circular_distance(scan.axis[k], d.phase);
            if (dist <= 0.25 * fwhm) lowest = std::min(lowest, scan.values[k]);
            if (dist < nearest) {
                nearest = dist;
                nearest_value = scan.values[k];
            }
        }
        if (!std::isfinite(lowest)) lowest = nearest_value;
        d.depth = baseline - lowest;

        double other = 0.0;
        for (std::size_t K = 0; K < families.size(); ++K)
            if (K != N && families[K] > 0.0)
                other += families[K] * (r_off - airy(a, d.phase + static_cast<double>(K) * psi).r);
        d.crosstalk = other / d.weight;
        d.isolated = d.crosstalk < 0.01;
        dips.push_back(d);
    }
    return dips;
}

}  // namespace sqzdisp
