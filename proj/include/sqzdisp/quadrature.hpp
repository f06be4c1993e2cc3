#pragma once

// Adaptive Gauss-Legendre panel quadrature.
//
// The domain is cut at caller-supplied breakpoints (flip lines, detector
// edges) so a discontinuity never falls inside a panel. Each panel is
// integrated with a 20-point rule; the 10-point rule on the same panel gives
// the error estimate. Panels whose estimate is too large are bisected until
// the summed estimate meets the tolerance.
//
// Panel evaluation is the parallel map; the final sum runs over panels sorted
// by position, so Exec::serial and Exec::parallel return identical bits.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "sqzdisp/errors.hpp"
#include "sqzdisp/execution.hpp"

namespace sqzdisp::quad {

template <class T>
struct Result {
    T value{};
    double abs_error = 0.0;
};

struct Options {
    double abs_tol = 1e-13;
    /// Segments between breakpoints start out cut into panels no wider than this.
    double initial_panel = 0.0;  // 0: one panel per segment
    std::size_t max_panels = 200000;
};

/// Full-interval Gauss-Legendre rule on [-1, 1].
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

[[nodiscard]] const Rule& gauss_legendre_20();
[[nodiscard]] const Rule& gauss_legendre_10();

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T, class F>
std::array<T, 2> panel_1d(const F& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    std::array<T, 2> out{};
    const Rule* rules[2] = {&gauss_legendre_20(), &gauss_legendre_10()};
    for (int r = 0; r < 2; ++r) {
        T sum{};
        const auto& rule = *rules[r];
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
        out[r] = sum * half;
    }
    return out;
}

inline std::vector<double> seed_edges(std::span<const double> breakpoints, double initial_panel) {
    std::vector<double> pts(breakpoints.begin(), breakpoints.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<double> edges;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        std::size_t pieces = 1;
        if (initial_panel > 0.0) pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / initial_panel)));
        for (std::size_t k = 0; k < pieces; ++k) edges.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(pieces));
    }
    if (!pts.empty()) edges.push_back(pts.back());
    return edges;
}

}  // namespace detail

/// Integrates f over [breakpoints.front(), breakpoints.back()] (after
/// sorting); interior breakpoints become panel edges. T is double or
/// std::complex<double>.
template <class T, class F>
Result<T> integrate_1d(const F& f, std::span<const double> breakpoints, const Options& opt = {},
                       Exec exec = Exec::serial) {
    struct Panel {
        double a, b;
        T value;
        double err;
        bool done;
    };
    const auto edges = detail::seed_edges(breakpoints, opt.initial_panel);
    if (edges.size() < 2) return {};

    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) panels.push_back({edges[i], edges[i + 1], T{}, 0.0, false});

    for (;;) {
        const auto count = static_cast<std::ptrdiff_t>(panels.size());
        auto eval = [&](std::ptrdiff_t i) {
            auto& p = panels[static_cast<std::size_t>(i)];
            if (p.done) return;
            const auto r = detail::panel_1d<T>(f, p.a, p.b);
            p.value = r[0];
            p.err = detail::magnitude(r[0] - r[1]);
            p.done = true;
        };
        if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
            for (std::ptrdiff_t i = 0; i < count; ++i) eval(i);
        } else {
            for (std::ptrdiff_t i = 0; i < count; ++i) eval(i);
        }

        double total_err = 0.0;
        for (const auto& p : panels) total_err += p.err;
        if (total_err <= opt.abs_tol) break;

        const double share = opt.abs_tol / static_cast<double>(panels.size());
        std::vector<Panel> next;
        next.reserve(panels.size() * 2);
        bool refined = false;
        for (const auto& p : panels) {
            // Panels at the resolution limit of double cannot be split further.
            const double mid = 0.5 * (p.a + p.b);
            if (p.err > share && mid > p.a && mid < p.b) {
                next.push_back({p.a, mid, T{}, 0.0, false});
                next.push_back({mid, p.b, T{}, 0.0, false});
                refined = true;
            } else {
                next.push_back(p);
            }
        }
        if (!refined || next.size() > opt.max_panels)
            throw QuadratureNotConverged("1D quadrature did not reach tolerance " + std::to_string(opt.abs_tol) +
                                             " (estimate " + std::to_string(total_err) + ")",
                                         total_err);
        panels = std::move(next);
    }

    Result<T> out;
    for (const auto& p : panels) {
        out.value += p.value;
        out.abs_error += p.err;
    }
    return out;
}

struct Box {
    double x0, x1, y0, y1;
};

/// Tensor-product version of integrate_1d over a rectangle. Panels are split
/// in both directions (quadtree) when refined.
template <class F>
Result<double> integrate_2d(const F& f, std::span<const double> xbreaks, std::span<const double> ybreaks,
                            const Options& opt = {}, Exec exec = Exec::serial) {
    struct Panel {
        Box box;
        double value;
        double err;
        bool done;
    };
    const auto xe = detail::seed_edges(xbreaks, opt.initial_panel);
    const auto ye = detail::seed_edges(ybreaks, opt.initial_panel);
    if (xe.size() < 2 || ye.size() < 2) return {};

    std::vector<Panel> panels;
    for (std::size_t j = 0; j + 1 < ye.size(); ++j)
        for (std::size_t i = 0; i + 1 < xe.size(); ++i) panels.push_back({{xe[i], xe[i + 1], ye[j], ye[j + 1]}, 0.0, 0.0, false});

    const Rule* rules[2] = {&gauss_legendre_20(), &gauss_legendre_10()};
    auto eval_panel = [&](Panel& p) {
        const double hx = 0.5 * (p.box.x1 - p.box.x0), mx = 0.5 * (p.box.x1 + p.box.x0);
        const double hy = 0.5 * (p.box.y1 - p.box.y0), my = 0.5 * (p.box.y1 + p.box.y0);
        double est[2];
        for (int r = 0; r < 2; ++r) {
            const auto& rule = *rules[r];
            double sum = 0.0;
            for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
                const double y = my + hy * rule.nodes[j];
                double row = 0.0;
                for (std::size_t i = 0; i < rule.nodes.size(); ++i) row += rule.weights[i] * f(mx + hx * rule.nodes[i], y);
                sum += rule.weights[j] * row;
            }
            est[r] = sum * hx * hy;
        }
        p.value = est[0];
        p.err = std::abs(est[0] - est[1]);
        p.done = true;
    };

    for (;;) {
        const auto count = static_cast<std::ptrdiff_t>(panels.size());
        if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 2)
            for (std::ptrdiff_t i = 0; i < count; ++i)
                if (!panels[static_cast<std::size_t>(i)].done) eval_panel(panels[static_cast<std::size_t>(i)]);
        } else {
            for (auto& p : panels)
                if (!p.done) eval_panel(p);
        }

        double total_err = 0.0;
        for (const auto& p : panels) total_err += p.err;
        if (total_err <= opt.abs_tol) break;

        const double share = opt.abs_tol / static_cast<double>(panels.size());
        std::vector<Panel> next;
        next.reserve(panels.size() * 2);
        bool refined = false;
        for (const auto& p : panels) {
            const double mx = 0.5 * (p.box.x0 + p.box.x1);
            const double my = 0.5 * (p.box.y0 + p.box.y1);
            const bool splittable = mx > p.box.x0 && mx < p.box.x1 && my > p.box.y0 && my < p.box.y1;
            if (p.err > share && splittable) {
                next.push_back({{p.box.x0, mx, p.box.y0, my}, 0.0, 0.0, false});
                next.push_back({{mx, p.box.x1, p.box.y0, my}, 0.0, 0.0, false});
                next.push_back({{p.box.x0, mx, my, p.box.y1}, 0.0, 0.0, false});
                next.push_back({{mx, p.box.x1, my, p.box.y1}, 0.0, 0.0, false});
                refined = true;
            } else {
                next.push_back(p);
            }
        }
        if (!refined || next.size() > opt.max_panels)
            throw QuadratureNotConverged("2D quadrature did not reach tolerance " + std::to_string(opt.abs_tol) +
                                             " (estimate " + std::to_string(total_err) + ")",
                                         total_err);
        panels = std::move(next);
    }

    Result<double> out;
    for (const auto& p : panels) {
        out.value += p.value;
        out.abs_error += p.err;
    }
    return out;
}

}  // namespace sqzdisp::quad
