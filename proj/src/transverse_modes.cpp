#include "sqzdisp/transverse_modes.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sqzdisp/constants.hpp"

namespace sqzdisp {

using constants::pi;

void BeamParams::validate() const {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw std::invalid_argument("BeamParams: wavelength must be positive");
    if (!(waist > 0.0) || !std::isfinite(waist))
        throw std::invalid_argument("BeamParams: waist must be positive");
    if (!std::isfinite(waist_z)) throw std::invalid_argument("BeamParams: waist_z must be finite");
}

double BeamParams::rayleigh_range() const { return pi * waist * waist / wavelength; }

double BeamParams::width_at_plane() const {
    const double zr = rayleigh_range();
    const double z = -waist_z;
    return waist * std::sqrt(1.0 + (z / zr) * (z / zr));
}

double BeamParams::gouy_at_plane() const { return std::atan2(-waist_z, rayleigh_range()); }

ModeSpec ModeSpec::hg(int m, int n) {
    if (m < 0 || n < 0) throw std::invalid_argument("ModeSpec: HG indices must be non-negative");
    ModeSpec s;
    s.m_ = m;
    s.n_ = n;
    return s;
}

ModeSpec ModeSpec::flipped(const ModeSpec& base, FlipSet axes) {
    ModeSpec s = base;
    s.flips_ = base.flips_.compose(axes);
    return s;
}

namespace {

std::string index_label(int k, bool flipped) { return (flipped ? "f" : "") + std::to_string(k); }

}  // namespace

std::string ModeSpec::label() const {
    if (m_ < 10 && n_ < 10)
        return "TEM" + index_label(m_, flips_.horizontal) + index_label(n_, flips_.vertical);
    return "HG(" + index_label(m_, flips_.horizontal) + "," + index_label(n_, flips_.vertical) + ")";
}

void hermite_gauss_1d_all(double x, double w0, std::span<double> out) {
    if (out.empty()) return;
    // psi_k(xi) normalized over xi; xi = sqrt(2) x / w0 and dxi/dx = sqrt(2)/w0.
    const double xi = std::numbers::sqrt2 * x / w0;
    const double jac = std::sqrt(std::numbers::sqrt2 / w0);
    double prev = 0.0;
    double cur = std::pow(pi, -0.25) * std::exp(-0.5 * xi * xi);
    out[0] = cur * jac;
    for (std::size_t k = 0; k + 1 < out.size(); ++k) {
        const double kd = static_cast<double>(k);
        const double next = std::sqrt(2.0 / (kd + 1.0)) * xi * cur - std::sqrt(kd / (kd + 1.0)) * prev;
        prev = cur;
        cur = next;
        out[k + 1] = cur * jac;
    }
}

double hermite_gauss_1d(int m, double x, double w0) {
    if (m < 0) throw std::invalid_argument("hermite_gauss_1d: negative order");
    if (m < 32) {
        double buf[32];
        hermite_gauss_1d_all(x, w0, std::span<double>(buf, static_cast<std::size_t>(m) + 1));
        return buf[m];
    }
    std::vector<double> buf(static_cast<std::size_t>(m) + 1);
    hermite_gauss_1d_all(x, w0, buf);
    return buf.back();
}

std::complex<double> mode_axis_factor(int order, bool flipped, const BeamParams& beam, double coord) {
    const double sign = (flipped && coord < 0.0) ? -1.0 : 1.0;
    if (beam.at_waist()) return sign * hermite_gauss_1d(order, coord, beam.waist);

    const double w = beam.width_at_plane();
    const double z = -beam.waist_z;
    const double zr = beam.rayleigh_range();
    const double k = 2.0 * pi / beam.wavelength;
    const double inv_r = z / (z * z + zr * zr);
    const double phase = -0.5 * k * coord * coord * inv_r + (order + 0.5) * beam.gouy_at_plane();
    return sign * hermite_gauss_1d(order, coord, w) * std::polar(1.0, phase);
}

std::complex<double> mode_amplitude(const ModeSpec& mode, const BeamParams& beam, TransversePoint p) {
    return mode_axis_factor(mode.m(), mode.flips().horizontal, beam, p.x) *
           mode_axis_factor(mode.n(), mode.flips().vertical, beam, p.y);
}

double mode_intensity(const ModeSpec& mode, const BeamParams& beam, TransversePoint p) {
    return std::norm(mode_amplitude(mode, beam, p));
}

double mode_support_radius(int max_order, double width) {
    // Beyond the classical turning point sqrt(2m+1) the function decays like
    // exp(-(xi - xi_t)^2); nine units past it the amplitude is < 1e-18 of peak.
    const double xi = std::sqrt(2.0 * max_order + 1.0) + 9.0;
    return xi * width / std::numbers::sqrt2;
}

}  // namespace sqzdisp
