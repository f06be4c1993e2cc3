#pragma once

// Reference computations that share no code with the library: Boost's
// Gauss-Kronrod integrator, Hermite polynomials and plain closed forms.

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/hermite.hpp>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

/// Normalized physicists' Hermite-Gauss function, straight from the definition.
inline double hg(int m, double x, double w0) {
    const double s = std::sqrt(2.0) * x / w0;
    const double norm = std::pow(2.0 / pi, 0.25) /
                        std::sqrt(std::ldexp(1.0, m) * boost::math::factorial<double>(static_cast<unsigned>(m)) * w0);
    return norm * boost::math::hermite(static_cast<unsigned>(m), s) * std::exp(-x * x / (w0 * w0));
}

template <class F>
double integrate(F f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

/// <HG_m | sign(x) HG_0> on one axis, w0 = 1: two half-line integrals.
inline double flipped_axis(int m) {
    const double right = integrate([m](double x) { return hg(m, x, 1.0) * hg(0, x, 1.0); }, 0.0, 12.0);
    const double left = integrate([m](double x) { return hg(m, x, 1.0) * hg(0, x, 1.0); }, -12.0, 0.0);
    return right - left;
}

}  // namespace oracle
