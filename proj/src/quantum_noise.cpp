#include "sqzdisp/quantum_noise.hpp"

#include <cmath>
#include <stdexcept>

#include "sqzdisp/constants.hpp"
#include "sqzdisp/errors.hpp"
#include "sqzdisp/overlap_integrals.hpp"

namespace sqzdisp {

namespace {

double full_overlap_norm(const ModeSpec& a, const ModeSpec& b, const BeamParams& beam) {
    if (a == b) return 1.0;
    const Region all[] = {Region::full_plane()};
    return std::abs(region_overlap(a, b, beam, all).value);
}

void check_efficiency(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("efficiency must lie in [0, 1]");
}

}  // namespace

ModeState ModeState::coherent(const ModeSpec& mode, double photons) {
    if (!(photons >= 0.0)) throw std::invalid_argument("ModeState::coherent: negative photon number");
    return {mode, std::sqrt(photons), 1.0, 1.0};
}

ModeState ModeState::squeezed_vacuum(const ModeSpec& mode, double var_amp) {
    if (!(var_amp > 0.0)) throw std::invalid_argument("ModeState::squeezed_vacuum: variance must be positive");
    return {mode, {}, var_amp, 1.0 / var_amp};
}

void ModeState::validate() const {
    if (!(var_amp >= 0.0) || !(var_phase >= 0.0)) throw std::invalid_argument("ModeState: negative variance");
    if (var_amp * var_phase < 1.0 - 1e-12) throw std::invalid_argument("ModeState: violates the uncertainty relation");
}

void check_orthogonal(std::span<const ModeSpec> modes, const BeamParams& beam, double tol) {
    for (std::size_t i = 0; i < modes.size(); ++i)
        for (std::size_t j = i + 1; j < modes.size(); ++j) {
            const double o = full_overlap_norm(modes[i], modes[j], beam);
            if (o > tol)
                throw NonOrthogonalBasis("modes " + modes[i].label() + " and " + modes[j].label() + " overlap by " +
                                         std::to_string(o));
        }
}

MultimodeField::MultimodeField(const BeamParams& beam, std::vector<ModeState> states)
    : beam_(beam), states_(std::move(states)) {
    beam_.validate();
    int bright = 0;
    std::vector<ModeSpec> modes;
    for (const auto& s : states_) {
        s.validate();
        if (std::abs(s.mean_amplitude) > 0.0) ++bright;
        modes.push_back(s.mode);
    }
    if (bright != 1) throw std::invalid_argument("MultimodeField: exactly one mode must carry the mean field");
    check_orthogonal(modes, beam_);
}

const ModeState& MultimodeField::mean_state() const {
    for (const auto& s : states_)
        if (std::abs(s.mean_amplitude) > 0.0) return s;
    throw std::logic_error("MultimodeField without a mean mode");
}

double MultimodeField::n_total() const { return std::norm(mean_state().mean_amplitude); }

MultimodeField MultimodeField::with_state(const ModeState& state) const {
    auto states = states_;
    bool replaced = false;
    for (auto& s : states)
        if (s.mode == state.mode) {
            s = state;
            replaced = true;
        }
    if (!replaced) states.push_back(state);
    return MultimodeField(beam_, std::move(states));
}

ModeSpec measurement_flip(const ModeSpec& mean_mode, Combination which) {
    switch (which) {
        case Combination::b: return ModeSpec::flipped(mean_mode, FlipSet::h());
        case Combination::c: return ModeSpec::flipped(mean_mode, FlipSet::v());
        case Combination::d: return ModeSpec::flipped(mean_mode, FlipSet::hv());
        case Combination::a: break;
    }
    // The sum current is not a differential measurement; its noise mode is the mean mode.
    return mean_mode;
}

double differential_noise_variance(const MultimodeField& field, const ModeSpec& flip) {
    std::vector<ModeSpec> modes;
    for (const auto& s : field.states()) modes.push_back(s.mode);
    check_orthogonal(modes, field.beam());

    double populated = 0.0;
    double variance = 0.0;
    for (const auto& s : field.states()) {
        const double o = full_overlap_norm(flip, s.mode, field.beam());
        if (o < 1e-12) continue;
        const double w = o * o;
        populated += w;
        variance += w * s.var_amp;
    }
    return variance + std::max(0.0, 1.0 - populated);
}

ModeState apply_loss(const ModeState& state, double efficiency) {
    check_efficiency(efficiency);
    ModeState out = state;
    out.mean_amplitude = std::sqrt(efficiency) * state.mean_amplitude;
    out.var_amp = efficiency * state.var_amp + (1.0 - efficiency);
    out.var_phase = efficiency * state.var_phase + (1.0 - efficiency);
    return out;
}

ModeState apply_losses(const ModeState& state, std::span<const double> efficiencies) {
    ModeState out = state;
    for (double eta : efficiencies) out = apply_loss(out, eta);
    return out;
}

double propagate_variance(double var, std::span<const double> efficiencies) {
    for (double eta : efficiencies) {
        check_efficiency(eta);
        var = eta * var + (1.0 - eta);
    }
    return var;
}

double required_source_variance(double target_var, std::span<const double> efficiencies) {
    double eta = 1.0;
    for (double e : efficiencies) {
        check_efficiency(e);
        eta *= e;
    }
    if (!(eta > 0.0)) throw std::invalid_argument("required_source_variance: chain transmits nothing");
    const double source = (target_var - (1.0 - eta)) / eta;
    if (!(source > 0.0))
        throw std::invalid_argument("required_source_variance: target variance " + std::to_string(target_var) +
                                    " unreachable with total efficiency " + std::to_string(eta));
    return source;
}

double visibility_to_efficiency(double visibility) {
    if (!(visibility >= 0.0 && visibility <= 1.0)) throw std::invalid_argument("visibility must lie in [0, 1]");
    return visibility * visibility;
}

double sql_displacement(double photons, double waist) {
    if (!(photons > 0.0) || !(waist > 0.0)) throw std::invalid_argument("sql_displacement: inputs must be positive");
    return std::sqrt(constants::pi / 8.0) * waist / std::sqrt(photons);
}

double sql_focused(double photons, double wavelength, double numerical_aperture) {
    if (!(numerical_aperture > 0.0 && numerical_aperture <= 1.0))
        throw std::invalid_argument("sql_focused: numerical aperture must lie in (0, 1]");
    return sql_displacement(photons, wavelength / (2.0 * numerical_aperture));
}

double snr(double d_mod, double noise_var, double photons, double waist) {
    if (!(noise_var > 0.0)) throw std::invalid_argument("snr: noise variance must be positive");
    const double ratio = d_mod / sql_displacement(photons, waist);
    return ratio * ratio / noise_var;
}

double snr_improvement(double noise_var_sqz, double noise_var_coh) {
    if (!(noise_var_sqz > 0.0) || !(noise_var_coh > 0.0)) throw std::invalid_argument("snr_improvement: variances must be positive");
    return noise_var_coh / noise_var_sqz;
}

double to_db(double variance_ratio) { return 10.0 * std::log10(variance_ratio); }
double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace sqzdisp
