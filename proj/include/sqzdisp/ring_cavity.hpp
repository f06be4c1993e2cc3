#pragma once

#include <array>
#include <optional>
#include <vector>

#include "sqzdisp/execution.hpp"
#include "sqzdisp/overlap_integrals.hpp"
#include "sqzdisp/trace.hpp"
#include "sqzdisp/transverse_modes.hpp"

namespace sqzdisp {

/// Three-mirror ring: input coupler, output coupler, curved high reflector.
/// Astigmatism of the curved mirror is ignored.
struct CavityConfig {
    double round_trip_length = 0.2;                   ///< m
    std::array<double, 3> mirror_R{0.95, 0.95, 1.0};  ///< power reflectivities: input, output, third
    double roc_curved = 0.25;                         ///< m
    double intracavity_loss = 0.0;                    ///< power fraction per round trip

    /// Overrides. The quoted finesse, FSR and mirror set of an experiment
    /// need not agree, so each may be given on its own.
    std::optional<double> finesse;  ///< replaces the coupler reflectivities, keeping impedance matching
    std::optional<double> fsr;      ///< Hz; default c / round_trip_length
    std::optional<double> gouy;     ///< rad per round trip; default from the ray matrix

    void validate() const;

    /// Coupler reflectivities actually used (after the finesse override).
    [[nodiscard]] std::array<double, 3> effective_R() const;
    /// Round-trip amplitude product r1 r2 r3 sqrt(1 - loss).
    [[nodiscard]] double round_trip_amplitude() const;
    [[nodiscard]] double free_spectral_range() const;
    /// pi sqrt(g) / (1 - g) with g the round-trip amplitude product.
    [[nodiscard]] double finesse_value() const;
    /// Full width at half maximum of the transmission peak (Hz).
    [[nodiscard]] double linewidth() const;
    [[nodiscard]] bool impedance_matched(double tol = 1e-12) const;

    /// Mirrors 0.95/0.95/HR, 250 mm curved mirror, 0.2 m round trip,
    /// finesse 31.
    static CavityConfig nominal();
};

/// Fundamental Gouy phase per round trip, acos of half the trace of the
/// round-trip ray matrix. Throws UnstableCavity unless |A + D| < 2.
[[nodiscard]] double round_trip_gouy(const CavityConfig& config);

struct Lineshape {
    double t = 0;         ///< transmitted through the output coupler
    double r = 0;         ///< reflected at the input coupler
    double absorbed = 0;  ///< leaked through the third mirror or lost inside
};

/// Airy response of TEM_mn at round-trip phase phi_fund + (m + n) psi.
[[nodiscard]] Lineshape mode_lineshape(const CavityConfig& config, int m, int n, double phi_fund);

/// Same, for a family order N = m + n.
[[nodiscard]] Lineshape family_lineshape(const CavityConfig& config, int order, double phi_fund);

/// Reflection of TEM_00 at the anti-resonance, the off-resonant level.
[[nodiscard]] double off_resonance_reflection(const CavityConfig& config);

/// Transmission averaged uniformly over the round-trip phase.
[[nodiscard]] double mean_transmission(const CavityConfig& config);
/// Reflection averaged uniformly over the round-trip phase.
[[nodiscard]] double mean_reflection(const CavityConfig& config);

/// Phase phi_fund in [0, 2 pi) at which family N is resonant.
[[nodiscard]] double family_resonance(const CavityConfig& config, int order);

/// TEM_00 transmission for a sideband `offset` Hz from the lock point.
[[nodiscard]] double sideband_transmission(const CavityConfig& config, double offset);

/// Reflected power sum |c_mn|^2 r_mn(phi) sampled at `samples` points of
/// [phi_lo, phi_hi]; axis in rad, values as a fraction of the incident power.
[[nodiscard]] SpectrumTrace scan_reflection(const CavityConfig& config, const ExpansionCoefficients& incident,
                                            double phi_lo, double phi_hi, int samples, Exec exec = Exec::serial);

struct CombinationEfficiency {
    double eta_trans = 0;           ///< t_00 of the transmitted mode at the lock
    double eta_refl = 0;            ///< sum |c_mn|^2 r_mn(lock) over the represented modes
    double represented_weight = 0;  ///< sum |c_mn|^2 of the supplied expansion
    /// eta_refl plus the unrepresented weight reflected at the phase-averaged
    /// level (families beyond the truncation are spread uniformly in phase).
    double eta_refl_total = 0;
};

[[nodiscard]] CombinationEfficiency combination_efficiency(const CavityConfig& config, const ModeSpec& transmitted_mode,
                                                          const ExpansionCoefficients& reflected_expansion,
                                                          double lock_phi = 0.0);

/// A dip of a reflection scan attributed to one mode family.
struct Dip {
    int order = 0;          ///< N = m + n
    double phase = 0;       ///< predicted resonance (rad)
    double weight = 0;      ///< sum |c_mn|^2 of the family
    double depth = 0;       ///< off-resonance level minus the trace minimum near the resonance
    /// Dip that the other families put at this resonance, relative to `weight`.
    double crosstalk = 0;
    bool isolated = false;  ///< crosstalk below 1%
};

/// Attributes the dips of a scan made with `config` and `incident`.
/// Families with zero weight are skipped.
[[nodiscard]] std::vector<Dip> analyze_dips(const SpectrumTrace& scan, const CavityConfig& config,
                                            const ExpansionCoefficients& incident);

}  // namespace sqzdisp
