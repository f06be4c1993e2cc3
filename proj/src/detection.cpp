#include "sqzdisp/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "sqzdisp/errors.hpp"

namespace sqzdisp {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

quad::Options plane_options(double width) {
    quad::Options opt;
    opt.abs_tol = 1e-13;
    opt.initial_panel = 0.5 * width;
    return opt;
}

// Integral of the shifted profile over a box, clipped to its support window.
double box_integral(const IntensityProfile& prof, double width, TransversePoint shift, quad::Box b, Exec exec) {
    const double r = prof.support_radius;
    const double x0 = std::max(b.x0, shift.x - r), x1 = std::min(b.x1, shift.x + r);
    const double y0 = std::max(b.y0, shift.y - r), y1 = std::min(b.y1, shift.y + r);
    if (!(x1 > x0) || !(y1 > y0)) return 0.0;
    std::vector<double> xb{x0, x1}, yb{y0, y1};
    if (shift.x > x0 && shift.x < x1) xb.push_back(shift.x);
    if (shift.y > y0 && shift.y < y1) yb.push_back(shift.y);
    auto f = [&](double x, double y) { return prof.density({x - shift.x, y - shift.y}); };
    return quad::integrate_2d(f, xb, yb, plane_options(width), exec).value;
}

// Integral of |axis factor|^2 of the shifted mode over [lo, hi].
double axis_power(int order, const BeamParams& beam, double shift, double lo, double hi) {
    const double width = beam.width_at_plane();
    const double r = mode_support_radius(order, width);
    lo = std::max(lo, shift - r);
    hi = std::min(hi, shift + r);
    if (!(hi > lo)) return 0.0;
    std::vector<double> breaks{lo, hi};
    if (shift > lo && shift < hi) breaks.push_back(shift);
    auto f = [&](double s) { return std::norm(mode_axis_factor(order, false, beam, s - shift)); };
    return quad::integrate_1d<double>(f, breaks, plane_options(width)).value;
}

}  // namespace

void DetectorGeometry::validate() const {
    if (!(element_size > 0.0)) throw std::invalid_argument("DetectorGeometry: element size must be positive");
    if (!(gap >= 0.0) || !std::isfinite(gap)) throw std::invalid_argument("DetectorGeometry: gap must be finite and >= 0");
    if (!std::isfinite(center_offset.x) || !std::isfinite(center_offset.y))
        throw std::invalid_argument("DetectorGeometry: centre offset must be finite");
}

quad::Box DetectorGeometry::element(int k) const {
    if (k < 1 || k > 4) throw std::out_of_range("DetectorGeometry::element: k must be 1..4");
    const int sx = (k == 1 || k == 4) ? 1 : -1;
    const int sy = (k == 1 || k == 2) ? 1 : -1;
    const double g = 0.5 * gap;
    double gx = g, gy = g;
    if (layout == Layout::split) {
        if (split_axis == Axis::horizontal) gy = 0.0;
        else gx = 0.0;
    }
    const double outer = element_size + g;
    auto span = [](int s, double inner, double outer, double c) {
        return s > 0 ? std::pair{c + inner, c + outer} : std::pair{c - outer, c - inner};
    };
    const auto [x0, x1] = span(sx, gx, outer, center_offset.x);
    const auto [y0, y1] = span(sy, gy, outer, center_offset.y);
    return {x0, x1, y0, y1};
}

DetectorGeometry DetectorGeometry::quadrant(double size, double gap) {
    DetectorGeometry g;
    g.element_size = size;
    g.gap = gap;
    g.layout = Layout::quadrant;
    return g;
}

DetectorGeometry DetectorGeometry::split(Axis axis, double size, double gap) {
    DetectorGeometry g;
    g.element_size = size;
    g.gap = gap;
    g.layout = Layout::split;
    g.split_axis = axis;
    return g;
}

double combination(const QuadrantCurrents& q, Combination which) {
    switch (which) {
        case Combination::a: return q.ia();
        case Combination::b: return q.ib();
        case Combination::c: return q.ic();
        case Combination::d: return q.id();
    }
    return 0.0;
}

IntensityProfile intensity_of(const ModeSpec& mode, const BeamParams& beam) {
    return {[mode, beam](TransversePoint p) { return mode_intensity(mode, beam, p); },
            mode_support_radius(std::max(mode.m(), mode.n()), beam.width_at_plane())};
}

QuadrantCurrents quadrant_currents(const IntensityProfile& intensity, const BeamParams& beam,
                                   const DetectorGeometry& geom, TransversePoint displacement, double n_total,
                                   Exec exec) {
    geom.validate();
    const double width = beam.width_at_plane();
    double i[4];
    for (int k = 1; k <= 4; ++k) i[k - 1] = n_total * box_integral(intensity, width, displacement, geom.element(k), exec);
    return {i[0], i[1], i[2], i[3]};
}

QuadrantCurrents quadrant_currents(const ModeSpec& mode, const BeamParams& beam, const DetectorGeometry& geom,
                                   TransversePoint displacement, double n_total) {
    geom.validate();
    beam.validate();
    double i[4];
    for (int k = 1; k <= 4; ++k) {
        const auto b = geom.element(k);
        i[k - 1] = n_total * axis_power(mode.m(), beam, displacement.x, b.x0, b.x1) *
                   axis_power(mode.n(), beam, displacement.y, b.y0, b.y1);
    }
    return {i[0], i[1], i[2], i[3]};
}

PowerBudget power_budget(const IntensityProfile& intensity, const BeamParams& beam, const DetectorGeometry& geom,
                         TransversePoint displacement, Exec exec) {
    geom.validate();
    const double w = beam.width_at_plane();
    auto integral = [&](double x0, double x1, double y0, double y1) {
        return box_integral(intensity, w, displacement, {x0, x1, y0, y1}, exec);
    };

    PowerBudget out;
    for (int k = 1; k <= 4; ++k) {
        const auto b = geom.element(k);
        out.active += integral(b.x0, b.x1, b.y0, b.y1);
    }

    // Footprint: bounding box of the four elements.
    const auto e1 = geom.element(1), e3 = geom.element(3);
    const double fx0 = e3.x0, fx1 = e1.x1, fy0 = e3.y0, fy1 = e1.y1;
    const double cx0 = geom.element(2).x1, cx1 = e1.x0;  // vertical gap strip
    const double cy0 = geom.element(4).y1, cy1 = e1.y0;  // horizontal gap strip
    if (cx1 > cx0) out.gap += integral(cx0, cx1, fy0, fy1);
    if (cy1 > cy0) {
        out.gap += integral(fx0, cx0, cy0, cy1);
        out.gap += integral(cx1, fx1, cy0, cy1);
    }

    if (std::isfinite(fx0) || std::isfinite(fx1) || std::isfinite(fy0) || std::isfinite(fy1)) {
        out.outside += integral(-inf, inf, fy1, inf);    // above
        out.outside += integral(-inf, inf, -inf, fy0);   // below
        out.outside += integral(-inf, fx0, fy0, fy1);    // left
        out.outside += integral(fx1, inf, fy0, fy1);     // right
    }

    out.total = integral(-inf, inf, -inf, inf);
    return out;
}

double detector_loss(const BeamParams& beam, const DetectorGeometry& geom) {
    return 1.0 - quadrant_currents(ModeSpec::tem00(), beam, geom, {}).ia();
}

WaistOptimum optimize_waist(const DetectorGeometry& geom, double wavelength) {
    geom.validate();
    const double d = geom.element_size;
    if (!(geom.gap < d)) throw std::invalid_argument("optimize_waist: gap must be smaller than the element size");
    if (!std::isfinite(d)) throw NoBracket("optimize_waist: infinite detector has no finite optimum");

    const double lo = std::max(0.5 * geom.gap, 1e-3 * d);
    const double hi = 5.0 * d;
    auto loss = [&](double w0) {
        BeamParams b;
        b.wavelength = wavelength;
        b.waist = w0;
        return detector_loss(b, geom);
    };

    constexpr int n = 241;
    std::vector<double> ws(n), ls(n);
    for (int k = 0; k < n; ++k) {
        ws[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
        ls[k] = loss(ws[k]);
    }

    // Steps below round-off are flat; count descending-to-ascending turns.
    constexpr double flat = 1e-12;
    std::vector<int> signs;
    for (int k = 0; k + 1 < n; ++k) {
        const double step = ls[k + 1] - ls[k];
        if (std::abs(step) > flat) signs.push_back(step > 0 ? 1 : -1);
    }
    if (signs.empty() || signs.front() > 0) {
        if (std::count(signs.begin(), signs.end(), -1) != 0)
            throw NoBracket("optimize_waist: detector loss is not unimodal over the waist search range");
        return {ws[0], ls[0], true};
    }
    int turns = 0;
    for (std::size_t k = 0; k + 1 < signs.size(); ++k)
        if (signs[k] < 0 && signs[k + 1] > 0) ++turns;
    if (turns > 1 || (turns == 1 && signs.back() < 0))
        throw NoBracket("optimize_waist: detector loss is not unimodal over the waist search range");
    if (turns == 0) return {ws[n - 1], ls[n - 1], true};

    const auto best = static_cast<int>(std::min_element(ls.begin(), ls.end()) - ls.begin());
    const auto [w, l] = boost::math::tools::brent_find_minima(loss, ws[best - 1], ws[best + 1], 52);
    return {w, l, false};
}

double combination_slope(Combination which, Axis displacement_axis, const BeamParams& beam,
                         const DetectorGeometry& geom, const ModeSpec& mode) {
    const double h = beam.waist * 1e-5;
    auto signal = [&](double s) {
        const TransversePoint d = displacement_axis == Axis::horizontal ? TransversePoint{s, 0.0} : TransversePoint{0.0, s};
        return combination(quadrant_currents(mode, beam, geom, d), which);
    };
    auto central = [&](double step) { return (signal(step) - signal(-step)) / (2.0 * step); };
    return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

double displacement_signal_slope(Axis axis, const BeamParams& beam, const DetectorGeometry& geom, const ModeSpec& mode) {
    return combination_slope(axis == Axis::horizontal ? Combination::b : Combination::c, axis, beam, geom, mode);
}

}  // namespace sqzdisp
