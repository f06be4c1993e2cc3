#include "sqzdisp/shot_noise_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

#include "sqzdisp/constants.hpp"
#include "sqzdisp/errors.hpp"

namespace sqzdisp {

namespace {

constexpr double stall_acceptance = 1e-4;

double normal_pdf(double x, double sigma) {
    return std::exp(-0.5 * x * x / (sigma * sigma)) / (std::sqrt(2.0 * constants::pi) * sigma);
}

}  // namespace

PhotonSampler::PhotonSampler(const BeamParams& beam, const ModeSpec& mode, double min_acceptance) : beam_(beam) {
    beam_.validate();
    x_ = make_axis(mode.m(), min_acceptance);
    y_ = make_axis(mode.n(), min_acceptance);
}

PhotonSampler::Axis PhotonSampler::make_axis(int order, double min_acceptance) const {
    Axis a;
    a.order = order;
    a.width = beam_.width_at_plane();
    a.proposal_sigma = 0.5 * a.width * std::sqrt(2.0 * order + 1.0);
    if (order == 0) return a;

    // Bound the target/proposal ratio on a dense grid, with margin.
    const double r = mode_support_radius(order, a.width);
    constexpr int n = 20001;
    double ratio = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = -r + 2.0 * r * i / (n - 1);
        const double u = hermite_gauss_1d(order, x, a.width);
        ratio = std::max(ratio, u * u / normal_pdf(x, a.proposal_sigma));
    }
    a.bound = 1.1 * ratio;
    a.acceptance = 1.0 / a.bound;
    if (a.acceptance < min_acceptance)
        throw RejectionStall("rejection sampler for order " + std::to_string(order) + " accepts " +
                             std::to_string(a.acceptance) + " of proposals");
    return a;
}

double PhotonSampler::draw_axis(const Axis& a, rng::Stream& s) const {
    if (a.order == 0) {
        // |u_0|^2 is a normal density with sigma = w / 2.
        return a.width / std::sqrt(2.0) * boost::math::erf_inv(2.0 * s.uniform() - 1.0);
    }
    const auto cap = static_cast<long>(100.0 / std::min(stall_acceptance, a.acceptance));
    for (long tries = 0; tries < cap; ++tries) {
        const double x = a.proposal_sigma * s.normal();
        const double u = hermite_gauss_1d(a.order, x, a.width);
        if (s.uniform() * a.bound * normal_pdf(x, a.proposal_sigma) <= u * u) return x;
    }
    throw RejectionStall("rejection sampler made no progress");
}

TransversePoint PhotonSampler::draw(rng::Stream& s) const {
    const double x = draw_axis(x_, s);
    const double y = draw_axis(y_, s);
    return {x, y};
}

PhotonSample sample_photons(const BeamParams& beam, const ModeSpec& mode, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_photons: need at least one photon");
    const PhotonSampler sampler(beam, mode);
    rng::Stream s(seed);
    PhotonSample out;
    out.positions.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.positions.push_back(sampler.draw(s));
    return out;
}

MonteCarloResult mc_differential_variance(const MonteCarloConfig& config, const DetectorGeometry& geom, int trials,
                                          Exec exec) {
    if (trials < 100) throw std::invalid_argument("mc_differential_variance: need at least 100 trials");
    if (!(config.mean_photons > 0.0)) throw std::invalid_argument("mc_differential_variance: mean photons must be positive");
    geom.validate();
    const PhotonSampler sampler(config.beam, config.mode);
    quad::Box boxes[4];
    for (int k = 0; k < 4; ++k) boxes[k] = geom.element(k + 1);

    std::vector<double> minus(static_cast<std::size_t>(trials));
    std::vector<double> total(static_cast<std::size_t>(trials));

    auto trial = [&](int t) {
        rng::Stream s(rng::split(config.seed, static_cast<std::uint64_t>(t)));
        std::poisson_distribution<long> poisson(config.mean_photons);
        const long n = poisson(s.engine());
        double counts[4] = {0, 0, 0, 0};
        for (long i = 0; i < n; ++i) {
            const auto p = sampler.draw(s);
            const double x = p.x + config.displacement.x;
            const double y = p.y + config.displacement.y;
            for (int k = 0; k < 4; ++k)
                if (x >= boxes[k].x0 && x < boxes[k].x1 && y >= boxes[k].y0 && y < boxes[k].y1) {
                    counts[k] += 1.0;
                    break;
                }
        }
        const QuadrantCurrents q{counts[0], counts[1], counts[2], counts[3]};
        minus[static_cast<std::size_t>(t)] = combination(q, config.combination);
        total[static_cast<std::size_t>(t)] = static_cast<double>(n);
    };

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (int t = 0; t < trials; ++t) trial(t);
    } else {
        for (int t = 0; t < trials; ++t) trial(t);
    }

    auto moments = [](const std::vector<double>& v, double& mean, double& var, double& m4) {
        const auto n = static_cast<double>(v.size());
        double s = 0;
        for (double x : v) s += x;
        mean = s / n;
        double s2 = 0, s4 = 0;
        for (double x : v) {
            const double d = x - mean;
            s2 += d * d;
            s4 += d * d * d * d;
        }
        var = s2 / (n - 1.0);
        m4 = s4 / n;
    };

    MonteCarloResult out;
    out.trials = trials;
    double m4 = 0, m4_total = 0;
    moments(minus, out.mean, out.variance, m4);
    moments(total, out.mean_total, out.var_total, m4_total);
    const double n = trials;
    out.mean_stderr = std::sqrt(out.variance / n);
    out.variance_stderr = std::sqrt(std::max(0.0, (m4 - (n - 3.0) / (n - 1.0) * out.variance * out.variance) / n));
    return out;
}

}  // namespace sqzdisp
