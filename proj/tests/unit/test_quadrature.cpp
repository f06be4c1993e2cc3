#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "oracles.hpp"
#include "sqzdisp/quadrature.hpp"

using namespace sqzdisp;

TEST_CASE("Gauss-Legendre tables integrate polynomials exactly") {
    for (const auto* rule : {&quad::gauss_legendre_20(), &quad::gauss_legendre_10()}) {
        const auto n = rule->nodes.size();
        double wsum = 0.0;
        for (double w : rule->weights) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-15));
        // Degree 2n-1 is exact: the integral of x^(2n-2) over [-1, 1] is 2/(2n-1).
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += rule->weights[i] * std::pow(rule->nodes[i], 2.0 * n - 2.0);
        CHECK(s == doctest::Approx(2.0 / (2.0 * n - 1.0)).epsilon(1e-13));
    }
}

TEST_CASE("a jump on a breakpoint costs nothing") {
    const double bp[] = {-3.0, 0.0, 2.0};
    auto step = [](double x) { return x < 0 ? std::exp(x) : -std::cos(x); };
    const auto r = quad::integrate_1d<double>(step, bp);
    CHECK(r.value == doctest::Approx((1.0 - std::exp(-3.0)) - std::sin(2.0)).epsilon(1e-14));
    CHECK(r.abs_error <= 1e-13);
}

TEST_CASE("a jump inside a panel is resolved by bisection") {
    const double bp[] = {-1.0, 1.0};
    auto step = [](double x) { return x < 0.3 ? 1.0 : 0.0; };
    const auto r = quad::integrate_1d<double>(step, bp, {1e-10, 0.0, 200000});
    CHECK(r.value == doctest::Approx(1.3).epsilon(1e-9));
}

TEST_CASE("complex integrands") {
    const double bp[] = {0.0, oracle::pi};
    const auto r = quad::integrate_1d<std::complex<double>>(
        [](double x) { return std::complex<double>(std::cos(x), std::sin(x)); }, bp);
    CHECK(r.value.real() == doctest::Approx(0.0).scale(1.0));
    CHECK(r.value.imag() == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("2D quadrature against a separable oracle") {
    const double xb[] = {-2.0, 0.0, 3.0};
    const double yb[] = {-1.0, 1.5};
    auto f = [](double x, double y) { return (x < 0 ? -1.0 : 1.0) * std::exp(-x * x - 0.5 * y * y); };
    const auto r = quad::integrate_2d(f, xb, yb);
    const double fx = oracle::integrate([](double x) { return std::exp(-x * x); }, 0.0, 3.0) -
                      oracle::integrate([](double x) { return std::exp(-x * x); }, -2.0, 0.0);
    const double fy = oracle::integrate([](double y) { return std::exp(-0.5 * y * y); }, -1.0, 1.5);
    CHECK(r.value == doctest::Approx(fx * fy).epsilon(1e-12));
}

TEST_CASE("serial and parallel give the same bits") {
    const double xb[] = {-4.0, -0.5, 0.0, 0.2, 0.7, 4.0};
    auto f = [](double x, double y) { return std::exp(-x * x - y * y) * (1.0 + std::sin(3 * x * y)) * (x > 0.2 ? 2.0 : 1.0); };
    quad::Options opt{1e-12, 0.5, 200000};
    const auto a = quad::integrate_2d(f, xb, xb, opt, Exec::serial);
    const auto b = quad::integrate_2d(f, xb, xb, opt, Exec::parallel);
    CHECK(a.value == b.value);
    CHECK(a.abs_error == b.abs_error);
    auto g = [](double x) { return std::sqrt(std::abs(x)) * std::cos(5 * x); };
    const auto c = quad::integrate_1d<double>(g, xb, opt, Exec::serial);
    const auto d = quad::integrate_1d<double>(g, xb, opt, Exec::parallel);
    CHECK(c.value == d.value);
}

TEST_CASE("an integrable singularity beyond the panel budget throws") {
    const double bp[] = {0.0, 1.0};
    auto f = [](double x) { return 1.0 / std::sqrt(x); };
    CHECK_THROWS_AS((void)quad::integrate_1d<double>(f, bp, {1e-15, 0.0, 64}), QuadratureNotConverged);
}
