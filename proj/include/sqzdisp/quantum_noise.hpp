#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sqzdisp/detection.hpp"
#include "sqzdisp/transverse_modes.hpp"

namespace sqzdisp {

/// Linearized state of one transverse mode. Variances are in units of the
/// quantum noise limit (coherent state = 1).
struct ModeState {
    ModeSpec mode;
    std::complex<double> mean_amplitude{};  ///< sqrt(photons) per measurement interval
    double var_amp = 1.0;                   ///< amplitude quadrature X+
    double var_phase = 1.0;                 ///< phase quadrature X-

    static ModeState vacuum(const ModeSpec& mode) { return {mode, {}, 1.0, 1.0}; }
    static ModeState coherent(const ModeSpec& mode, double photons);
    /// Minimum-uncertainty squeezed vacuum with the given amplitude variance.
    static ModeState squeezed_vacuum(const ModeSpec& mode, double var_amp);

    /// Throws std::invalid_argument if a variance is negative or the
    /// uncertainty product falls below one.
    void validate() const;
};

/// The beam under measurement: exactly one mode carries the mean field and
/// all modes are mutually orthogonal.
class MultimodeField {
public:
    /// Throws NonOrthogonalBasis if two modes overlap beyond 1e-6, and
    /// std::invalid_argument unless exactly one state has a mean amplitude.
    MultimodeField(const BeamParams& beam, std::vector<ModeState> states);

    [[nodiscard]] const BeamParams& beam() const { return beam_; }
    [[nodiscard]] const std::vector<ModeState>& states() const { return states_; }
    [[nodiscard]] const ModeState& mean_state() const;
    [[nodiscard]] double n_total() const;

    /// Copy with `state` replacing the state in the same mode, or appended.
    [[nodiscard]] MultimodeField with_state(const ModeState& state) const;

private:
    BeamParams beam_;
    std::vector<ModeState> states_;
};

/// Throws NonOrthogonalBasis if any pair of modes overlaps beyond `tol`.
void check_orthogonal(std::span<const ModeSpec> modes, const BeamParams& beam, double tol = 1e-6);

/// Flipped mode whose X+ sets the noise of combination `which` for a beam
/// whose mean field is in `mean_mode`: Ib flips x, Ic flips y, Id both.
[[nodiscard]] ModeSpec measurement_flip(const ModeSpec& mean_mode, Combination which);

/// Normalized variance of the differential photocurrent associated with
/// `flip`: the amplitude variance of the field's component in that mode.
/// Unpopulated parts of the mode are vacuum (variance 1).
[[nodiscard]] double differential_noise_variance(const MultimodeField& field, const ModeSpec& flip);

/// Beamsplitter loss: var' = eta var + (1 - eta), mean' = sqrt(eta) mean.
[[nodiscard]] ModeState apply_loss(const ModeState& state, double efficiency);

/// Folds apply_loss over a chain of efficiencies (order does not matter).
[[nodiscard]] ModeState apply_losses(const ModeState& state, std::span<const double> efficiencies);

/// Variance after a chain of efficiencies.
[[nodiscard]] double propagate_variance(double var, std::span<const double> efficiencies);

/// Source variance needed to deliver `target_var` through the chain.
/// Throws std::invalid_argument when the target is out of reach (source
/// variance would be negative).
[[nodiscard]] double required_source_variance(double target_var, std::span<const double> efficiencies);

/// Mode-matching efficiency from fringe visibility: V^2.
[[nodiscard]] double visibility_to_efficiency(double visibility);

/// Standard quantum limit for an infinite split detector, TEM00 waist w0.
[[nodiscard]] double sql_displacement(double photons, double waist);
/// Same with the beam focused to the diffraction limit lambda / (2 NA).
[[nodiscard]] double sql_focused(double photons, double wavelength, double numerical_aperture);

/// Power SNR of a displacement modulation: (d_mod / d_SQL)^2 / noise_var.
[[nodiscard]] double snr(double d_mod, double noise_var, double photons, double waist);
[[nodiscard]] double snr_improvement(double noise_var_sqz, double noise_var_coh = 1.0);

/// 10 log10 of a variance ratio; negative means below the QNL.
[[nodiscard]] double to_db(double variance_ratio);
[[nodiscard]] double from_db(double db);

}  // namespace sqzdisp
