#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sqzdisp/transverse_modes.hpp"

using namespace sqzdisp;

namespace {
const BeamParams beam{1064e-9, 150e-6, 0.0};
const double w0 = beam.waist;
}

TEST_CASE("BeamParams rejects non-positive wavelength and waist") {
    CHECK_NOTHROW((void)beam.validate());
    CHECK_THROWS_AS((void)(BeamParams{0.0, 1e-4, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((void)(BeamParams{1e-6, -1e-4, 0.0}.validate()), std::invalid_argument);
}

TEST_CASE("ModeSpec normalizes nested flips") {
    const auto f = ModeSpec::flipped(ModeSpec::tem00(), FlipSet::h());
    CHECK(ModeSpec::flipped(f, FlipSet::h()) == ModeSpec::tem00());
    CHECK(ModeSpec::flipped(f, FlipSet::v()) == ModeSpec::tem_f0f0());
    CHECK(ModeSpec::flipped(ModeSpec::tem_f0f0(), FlipSet::hv()) == ModeSpec::tem00());
    CHECK(ModeSpec::flipped(ModeSpec::tem00(), FlipSet::none()) == ModeSpec::tem00());
    CHECK(ModeSpec::tem_f0f0().label() == "TEMf0f0");
    CHECK(ModeSpec::tem_0f0().label() == "TEM0f0");
    CHECK(ModeSpec::hg(3, 1).label() == "TEM31");
    CHECK(ModeSpec::flipped(ModeSpec::hg(3, 1), FlipSet::h()).label() == "TEMf31");
    CHECK(ModeSpec::flipped(ModeSpec::hg(12, 3), FlipSet::v()).label() == "HG(12,f3)");
    CHECK_THROWS((void)ModeSpec::hg(-1, 0));
}

TEST_CASE("hermite_gauss_1d matches the closed-form definition") {
    for (int m = 0; m <= 40; ++m)
        for (double x : {-3.1, -1.0, -0.2, 0.0, 0.37, 1.5, 2.9}) {
            const double ref = oracle::hg(m, x * w0, w0);
            CHECK(hermite_gauss_1d(m, x * w0, w0) == doctest::Approx(ref).epsilon(1e-11).scale(1.0 / std::sqrt(w0)));
        }
}

TEST_CASE("hermite_gauss_1d_all agrees with the single-order evaluation") {
    std::vector<double> all(61);
    hermite_gauss_1d_all(0.83 * w0, w0, all);
    for (int m = 0; m <= 60; ++m) CHECK(all[m] == doctest::Approx(hermite_gauss_1d(m, 0.83 * w0, w0)).epsilon(1e-12));
}

TEST_CASE("mode_amplitude examples") {
    CHECK(std::abs(mode_amplitude(ModeSpec::hg(1, 0), beam, {0, 0})) == 0.0);
    const auto f = ModeSpec::tem_f00();
    for (double x : {0.1, 0.5, 1.7}) {
        const auto a = mode_amplitude(f, beam, {x * w0, 0.3 * w0});
        const auto b = mode_amplitude(f, beam, {-x * w0, 0.3 * w0});
        CHECK(std::abs(a) == doctest::Approx(std::abs(b)));
        CHECK(a.real() == doctest::Approx(-b.real()));
    }
    // Negative side carries the sign.
    CHECK(mode_amplitude(f, beam, {-0.5 * w0, 0}).real() < 0.0);
}

TEST_CASE("TEM00 normalizes to one over [-5 w0, 5 w0]^2") {
    const double one_axis = oracle::integrate(
        [](double x) { return std::norm(mode_axis_factor(0, false, beam, x)); }, -5 * w0, 5 * w0);
    // The plane integral separates into the square of one axis.
    CHECK(one_axis * one_axis == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mode_intensity(ModeSpec::tem00(), beam, {0, 0}) == doctest::Approx(2.0 / (oracle::pi * w0 * w0)).epsilon(1e-14));
    CHECK(mode_intensity(ModeSpec::tem00(), beam, {w0, 0}) / mode_intensity(ModeSpec::tem00(), beam, {0, 0}) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("gouy_phase examples") {
    const double psi = 0.731;
    CHECK(gouy_phase(0, 0, psi) == psi);
    CHECK(gouy_phase(1, 1, psi) == doctest::Approx(3 * psi));
    CHECK(gouy_phase(2, 0, oracle::pi / 4) == doctest::Approx(3 * oracle::pi / 4));
}

TEST_CASE("orthonormality up to order 8") {
    // Separable: the plane inner product is the product of two 1D overlaps.
    double ov[9][9];
    for (int a = 0; a <= 8; ++a)
        for (int b = 0; b <= 8; ++b)
            ov[a][b] = oracle::integrate(
                [a, b](double x) { return hermite_gauss_1d(a, x, w0) * hermite_gauss_1d(b, x, w0); }, -12 * w0, 12 * w0);
    double worst = 0.0;
    for (int m = 0; m <= 8; ++m)
        for (int n = 0; m + n <= 8; ++n)
            for (int mp = 0; mp <= 8; ++mp)
                for (int np = 0; mp + np <= 8; ++np) {
                    const double v = ov[m][mp] * ov[n][np];
                    const double want = (m == mp && n == np) ? 1.0 : 0.0;
                    worst = std::max(worst, std::abs(v - want));
                }
    CHECK(worst < 1e-8);
}

TEST_CASE("double flip is the identity; flips keep the intensity; parity") {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> u(-3 * w0, 3 * w0);
    std::uniform_int_distribution<int> order(0, 6);
    const auto ff = ModeSpec::flipped(ModeSpec::flipped(ModeSpec::hg(2, 1), FlipSet::h()), FlipSet::h());
    for (int k = 0; k < 10000; ++k) {
        const TransversePoint p{u(gen), u(gen)};
        REQUIRE(mode_amplitude(ff, beam, p) == mode_amplitude(ModeSpec::hg(2, 1), beam, p));
        REQUIRE(mode_intensity(ModeSpec::tem_f0f0(), beam, p) == mode_intensity(ModeSpec::tem00(), beam, p));
        const int m = order(gen), n = order(gen);
        const auto a = mode_amplitude(ModeSpec::hg(m, n), beam, p);
        const auto b = mode_amplitude(ModeSpec::hg(m, n), beam, {-p.x, p.y});
        REQUIRE(b.real() == doctest::Approx((m % 2 ? -1.0 : 1.0) * a.real()).epsilon(1e-12));
    }
}

TEST_CASE("a centred flipped mode is orthogonal to its base") {
    // sign(x) u0^2 is odd in x.
    const double v = oracle::integrate(
        [](double x) {
            const double u = hermite_gauss_1d(0, x, w0);
            return (x < 0 ? -1.0 : 1.0) * u * u;
        },
        -12 * w0, 12 * w0);
    CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("away from the waist the width grows and the Gouy phase accumulates") {
    BeamParams far = beam;
    far.waist_z = -beam.rayleigh_range();
    CHECK(far.width_at_plane() == doctest::Approx(std::sqrt(2.0) * w0));
    CHECK(std::abs(far.gouy_at_plane()) == doctest::Approx(oracle::pi / 4));
    // Still normalized.
    const double one_axis = oracle::integrate([&](double x) { return std::norm(mode_axis_factor(3, false, far, x)); },
                                              -12 * w0, 12 * w0);
    CHECK(one_axis == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("mode_support_radius bounds the highest mode") {
    const double r = mode_support_radius(60, w0);
    CHECK(std::abs(hermite_gauss_1d(60, r, w0)) < 1e-15 / std::sqrt(w0));
}
