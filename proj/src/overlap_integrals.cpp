#include "sqzdisp/overlap_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sqzdisp/constants.hpp"
#include "sqzdisp/quadrature.hpp"

namespace sqzdisp {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double axis_tol = 1e-13;

Interval signed_half(int sign) { return sign > 0 ? Interval{0.0, inf} : Interval{-inf, 0.0}; }

quad::Options axis_options(double width) {
    quad::Options opt;
    opt.abs_tol = axis_tol;
    opt.initial_panel = 0.5 * width;
    return opt;
}

// Integral of conj(f_a) f_b along one axis over [lo, hi] clipped to +-support.
quad::Result<std::complex<double>> axis_integral(int order_a, bool flip_a, int order_b, bool flip_b,
                                                 const BeamParams& beam, Interval iv, Exec exec) {
    const double width = beam.width_at_plane();
    const double support = mode_support_radius(std::max(order_a, order_b), width);
    const double lo = std::max(iv.lo, -support);
    const double hi = std::min(iv.hi, support);
    if (!(hi > lo)) return {};

    std::vector<double> breaks{lo, hi};
    if (lo < 0.0 && hi > 0.0) breaks.push_back(0.0);

    auto f = [&](double s) {
        return std::conj(mode_axis_factor(order_a, flip_a, beam, s)) * mode_axis_factor(order_b, flip_b, beam, s);
    };
    return quad::integrate_1d<std::complex<double>>(f, breaks, axis_options(width), exec);
}

}  // namespace

Region Region::full_plane(int weight) {
    Region r;
    r.kind = Kind::full_plane;
    r.weight = weight;
    return r;
}

Region Region::half_plane(Axis axis, int sign, int weight) {
    Region r;
    r.kind = Kind::half_plane;
    r.axis = axis;
    r.sign = sign;
    r.weight = weight;
    return r;
}

Region Region::quadrant(int sx, int sy, int weight) {
    Region r;
    r.kind = Kind::quadrant;
    r.sx = sx;
    r.sy = sy;
    r.weight = weight;
    return r;
}

Region Region::rect(double x0, double x1, double y0, double y1, int weight) {
    Region r;
    r.kind = Kind::rect;
    r.x0 = x0;
    r.x1 = x1;
    r.y0 = y0;
    r.y1 = y1;
    r.weight = weight;
    return r;
}

void Region::validate() const {
    if (weight != 1 && weight != -1) throw std::invalid_argument("Region: weight must be +1 or -1");
    if (kind == Kind::half_plane && sign != 1 && sign != -1) throw std::invalid_argument("Region: half-plane sign must be +-1");
    if (kind == Kind::quadrant && ((sx != 1 && sx != -1) || (sy != 1 && sy != -1)))
        throw std::invalid_argument("Region: quadrant signs must be +-1");
    if (kind == Kind::rect && (!(x0 <= x1) || !(y0 <= y1))) throw std::invalid_argument("Region: rect bounds unordered");
}

Interval Region::x_interval() const {
    switch (kind) {
        case Kind::full_plane: return {-inf, inf};
        case Kind::half_plane: return axis == Axis::horizontal ? signed_half(sign) : Interval{-inf, inf};
        case Kind::quadrant: return signed_half(sx);
        case Kind::rect: return {x0, x1};
    }
    return {-inf, inf};
}

Interval Region::y_interval() const {
    switch (kind) {
        case Kind::full_plane: return {-inf, inf};
        case Kind::half_plane: return axis == Axis::vertical ? signed_half(sign) : Interval{-inf, inf};
        case Kind::quadrant: return signed_half(sy);
        case Kind::rect: return {y0, y1};
    }
    return {-inf, inf};
}

std::vector<Region> signed_halves(Axis axis) {
    return {Region::half_plane(axis, +1, +1), Region::half_plane(axis, -1, -1)};
}

OverlapResult region_overlap(const ModeSpec& a, const ModeSpec& b, const BeamParams& beam,
                             std::span<const Region> regions, Exec exec) {
    beam.validate();
    OverlapResult out{};
    for (const auto& r : regions) {
        r.validate();
        const auto ix = axis_integral(a.m(), a.flips().horizontal, b.m(), b.flips().horizontal, beam, r.x_interval(), exec);
        const auto iy = axis_integral(a.n(), a.flips().vertical, b.n(), b.flips().vertical, beam, r.y_interval(), exec);
        out.value += static_cast<double>(r.weight) * ix.value * iy.value;
        out.abs_error += std::abs(ix.value) * iy.abs_error + std::abs(iy.value) * ix.abs_error + ix.abs_error * iy.abs_error;
    }
    return out;
}

double flipped_axis_coefficient(int i) {
    if (i < 0) throw std::invalid_argument("flipped_axis_coefficient: negative index");
    const double di = i;
    const double log_mag = std::lgamma(2.0 * di + 1.0) - 0.5 * std::log(constants::pi) - std::lgamma(di + 1.0) -
                           (di - 0.5) * std::log(2.0) - 0.5 * std::lgamma(2.0 * di + 2.0);
    return (i % 2 == 0 ? 1.0 : -1.0) * std::exp(log_mag);
}

double cmn_closed_form(int i, int j) {
    if (i < 0 || j < 0) throw std::invalid_argument("cmn_closed_form: negative index");
    const double di = i, dj = j;
    const double log_mag = std::lgamma(2.0 * di + 1.0) + std::lgamma(2.0 * dj + 1.0) - std::log(constants::pi) -
                           std::lgamma(di + 1.0) - std::lgamma(dj + 1.0) - (di + dj - 1.0) * std::log(2.0) -
                           0.5 * (std::lgamma(2.0 * di + 2.0) + std::lgamma(2.0 * dj + 2.0));
    return ((i + j) % 2 == 0 ? 1.0 : -1.0) * std::exp(log_mag);
}

ExpansionCoefficients::ExpansionCoefficients(int max_order)
    : max_order_(max_order), coeffs_(index(0, max_order + 1), 0.0) {
    if (max_order < 0) throw std::invalid_argument("ExpansionCoefficients: negative order");
}

std::size_t ExpansionCoefficients::index(int m, int n) {
    const auto order = static_cast<std::size_t>(m + n);
    return order * (order + 1) / 2 + static_cast<std::size_t>(m);
}

double ExpansionCoefficients::at(int m, int n) const {
    if (m < 0 || n < 0 || m + n > max_order_) return 0.0;
    return coeffs_[index(m, n)];
}

void ExpansionCoefficients::set(int m, int n, double c) {
    if (m < 0 || n < 0 || m + n > max_order_) throw std::out_of_range("ExpansionCoefficients::set");
    coeffs_[index(m, n)] = c;
}

double ExpansionCoefficients::total_weight() const {
    double sum = 0.0;
    for (double c : coeffs_) sum += c * c;
    return sum;
}

std::vector<double> ExpansionCoefficients::family_weights() const {
    std::vector<double> w(static_cast<std::size_t>(max_order_ + 1), 0.0);
    for (int order = 0; order <= max_order_; ++order)
        for (int m = 0; m <= order; ++m) {
            const double c = coeffs_[index(m, order - m)];
            w[static_cast<std::size_t>(order)] += c * c;
        }
    return w;
}

ExpansionCoefficients ExpansionCoefficients::truncated(int max_m, int max_n) const {
    ExpansionCoefficients out(max_order_);
    for (int order = 0; order <= max_order_; ++order)
        for (int m = 0; m <= order; ++m) {
            const int n = order - m;
            if (m <= max_m && n <= max_n) out.set(m, n, at(m, n));
        }
    return out;
}

std::vector<ExpansionCoefficients::Entry> ExpansionCoefficients::entries() const {
    std::vector<Entry> out;
    out.reserve(coeffs_.size());
    for (int order = 0; order <= max_order_; ++order)
        for (int m = 0; m <= order; ++m) out.push_back({m, order - m, coeffs_[index(m, order - m)]});
    return out;
}

std::vector<double> axis_overlaps(int base_order, bool flipped, const BeamParams& beam, int max_order, Exec exec) {
    BeamParams waist_plane = beam;
    waist_plane.waist_z = 0.0;
    std::vector<double> out(static_cast<std::size_t>(max_order + 1), 0.0);

    auto compute = [&](int k) {
        if (!flipped) {
            out[static_cast<std::size_t>(k)] = (k == base_order) ? 1.0 : 0.0;
            return;
        }
        // sign(x) is odd, so only opposite-parity pairs overlap.
        if ((k + base_order) % 2 == 0) return;
        const auto r = axis_integral(k, false, base_order, true, waist_plane, {-inf, inf}, Exec::serial);
        out[static_cast<std::size_t>(k)] = r.value.real();
    };

    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int k = 0; k <= max_order; ++k) compute(k);
    } else {
        for (int k = 0; k <= max_order; ++k) compute(k);
    }
    return out;
}

ExpansionCoefficients expand_flipped(const ModeSpec& mode, const BeamParams& beam, int max_order, Exec exec) {
    if (!mode.is_flipped()) throw std::invalid_argument("expand_flipped: mode is not a flipped mode");
    if (max_order < 0 || max_order > 60) throw std::invalid_argument("expand_flipped: max_order must be in [0, 60]");
    beam.validate();

    const auto xs = axis_overlaps(mode.m(), mode.flips().horizontal, beam, max_order, exec);
    const auto ys = axis_overlaps(mode.n(), mode.flips().vertical, beam, max_order, exec);

    ExpansionCoefficients out(max_order);
    for (int order = 0; order <= max_order; ++order)
        for (int m = 0; m <= order; ++m) {
            const int n = order - m;
            out.set(m, n, xs[static_cast<std::size_t>(m)] * ys[static_cast<std::size_t>(n)]);
        }
    return out;
}

ExpansionCoefficients closed_form_flipped_expansion(FlipSet axes, int max_order) {
    if (axes.empty()) throw std::invalid_argument("closed_form_flipped_expansion: no flip axes");
    if (max_order < 0) throw std::invalid_argument("closed_form_flipped_expansion: negative order");
    auto axis = [&](bool flipped) {
        std::vector<double> v(static_cast<std::size_t>(max_order + 1), 0.0);
        if (!flipped) {
            v[0] = 1.0;
            return v;
        }
        for (int k = 1; k <= max_order; k += 2) v[static_cast<std::size_t>(k)] = flipped_axis_coefficient((k - 1) / 2);
        return v;
    };
    const auto xs = axis(axes.horizontal);
    const auto ys = axis(axes.vertical);
    ExpansionCoefficients out(max_order);
    for (int order = 0; order <= max_order; ++order)
        for (int m = 0; m <= order; ++m)
            out.set(m, order - m, xs[static_cast<std::size_t>(m)] * ys[static_cast<std::size_t>(order - m)]);
    return out;
}

}  // namespace sqzdisp
