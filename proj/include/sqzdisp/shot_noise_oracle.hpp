#pragma once

#include <cstdint>
#include <vector>

#include "sqzdisp/detection.hpp"
#include "sqzdisp/execution.hpp"
#include "sqzdisp/rng.hpp"
#include "sqzdisp/transverse_modes.hpp"

namespace sqzdisp {

struct PhotonSample {
    std::vector<TransversePoint> positions;
    [[nodiscard]] std::size_t count() const { return positions.size(); }
};

/// Draws positions from |u_mode|^2 at the evaluation plane, one axis at a
/// time: inverse CDF for order 0, rejection from a Gaussian proposal above.
/// Flips are ignored (they leave the intensity unchanged).
class PhotonSampler {
public:
    /// Throws RejectionStall if an axis would accept fewer than
    /// `min_acceptance` of its proposals.
    PhotonSampler(const BeamParams& beam, const ModeSpec& mode, double min_acceptance = 1e-4);

    [[nodiscard]] TransversePoint draw(rng::Stream& s) const;
    /// Acceptance probability of the x and y rejection steps (1 for order 0).
    [[nodiscard]] double acceptance_x() const { return x_.acceptance; }
    [[nodiscard]] double acceptance_y() const { return y_.acceptance; }

private:
    struct Axis {
        int order = 0;
        double width = 0;
        double proposal_sigma = 0;
        double bound = 1;  // max target / proposal
        double acceptance = 1;
    };
    Axis make_axis(int order, double min_acceptance) const;
    double draw_axis(const Axis& a, rng::Stream& s) const;

    BeamParams beam_;
    Axis x_, y_;
};

[[nodiscard]] PhotonSample sample_photons(const BeamParams& beam, const ModeSpec& mode, std::size_t n,
                                          std::uint64_t seed);

struct MonteCarloConfig {
    BeamParams beam;
    ModeSpec mode = ModeSpec::tem00();
    double mean_photons = 1e4;  ///< Poisson mean per trial
    TransversePoint displacement{};
    Combination combination = Combination::b;
    std::uint64_t seed = 1;
};

struct MonteCarloResult {
    int trials = 0;
    double mean = 0;        ///< sample mean of N_-
    double variance = 0;    ///< unbiased sample variance of N_-
    double mean_total = 0;  ///< sample mean of the photon count
    double var_total = 0;
    /// Standard errors of `mean` and `variance` (the latter from the fourth
    /// central moment).
    double mean_stderr = 0;
    double variance_stderr = 0;
};

/// Per trial: Poisson(mean_photons) photons at i.i.d. positions, each
/// counted +-1 by the detector element it lands on; N_- is the chosen
/// combination. Trial t uses stream split(seed, t), so the result does not
/// depend on the thread count.
[[nodiscard]] MonteCarloResult mc_differential_variance(const MonteCarloConfig& config, const DetectorGeometry& geom,
                                                        int trials, Exec exec = Exec::serial);

}  // namespace sqzdisp
