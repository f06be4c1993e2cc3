#include <doctest.h>

#include <cmath>

#include "sqzdisp/units.hpp"

using namespace sqzdisp::units;

TEST_CASE("quantities convert to SI") {
    CHECK(parse("150 um", Dimension::length) == doctest::Approx(150e-6).epsilon(1e-15));
    CHECK(parse("150 µm", Dimension::length) == parse("150 um", Dimension::length));
    CHECK(parse("1.66 A", Dimension::length) == doctest::Approx(1.66e-10).epsilon(1e-15));
    CHECK(parse("1064 nm", Dimension::length) == doctest::Approx(1064e-9).epsilon(1e-15));
    CHECK(parse("0.5 mm", Dimension::length) == doctest::Approx(5e-4).epsilon(1e-15));
    CHECK(parse("4.976 MHz", Dimension::frequency) == doctest::Approx(4.976e6).epsilon(1e-15));
    CHECK(parse("100 kHz", Dimension::frequency) == doctest::Approx(1e5).epsilon(1e-15));
    CHECK(parse("1 mW", Dimension::power) == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(parse("8.192 s", Dimension::time) == 8.192);
    CHECK(parse("180 deg", Dimension::angle) == doctest::Approx(M_PI).epsilon(1e-15));
    CHECK(parse("-2.84 dB", Dimension::decibel) == -2.84);
    CHECK(parse("  +3 m  ", Dimension::length) == 3.0);
    CHECK(parse("2e-3 m", Dimension::length) == 2e-3);
}

TEST_CASE("bare numbers only for dimensionless quantities") {
    CHECK(parse("0.95", Dimension::dimensionless) == 0.95);
    CHECK(parse("95 %", Dimension::dimensionless) == doctest::Approx(0.95).epsilon(1e-15));
    CHECK_THROWS_AS((void)parse("150", Dimension::length), UnitError);
    CHECK_THROWS_AS((void)parse("1e-3", Dimension::power), UnitError);
    CHECK_THROWS_AS((void)parse("-3", Dimension::decibel), UnitError);
}

TEST_CASE("wrong or unknown units are rejected") {
    CHECK_THROWS_AS((void)parse("5 MHz", Dimension::length), UnitError);
    CHECK_THROWS_AS((void)parse("5 mW", Dimension::frequency), UnitError);
    CHECK_THROWS_AS((void)parse("5 %", Dimension::length), UnitError);
    CHECK_THROWS_AS((void)parse("5 furlong", Dimension::length), UnitError);
    CHECK_THROWS_AS((void)parse("5 M", Dimension::length), UnitError);
    CHECK_THROWS_AS((void)parse("um", Dimension::length), UnitError);
    CHECK_THROWS_AS((void)parse("", Dimension::dimensionless), UnitError);
    CHECK_THROWS_AS((void)parse("inf m", Dimension::length), UnitError);
    CHECK_THROWS_AS((void)parse("nan", Dimension::dimensionless), UnitError);
}

TEST_CASE("error messages name the problem") {
    try {
        (void)parse("5 MHz", Dimension::length);
        FAIL("expected UnitError");
    } catch (const UnitError& e) {
        const std::string what = e.what();
        CHECK(what.find("frequency") != std::string::npos);
        CHECK(what.find("length") != std::string::npos);
    }
    try {
        (void)parse("150", Dimension::length);
        FAIL("expected UnitError");
    } catch (const UnitError& e) {
        CHECK(std::string(e.what()).find("no unit") != std::string::npos);
    }
}

TEST_CASE("counts") {
    CHECK(parse_count("20") == 20);
    CHECK(parse_count(" 0 ") == 0);
    CHECK_THROWS_AS((void)parse_count("-1"), UnitError);
    CHECK_THROWS_AS((void)parse_count("2.5"), UnitError);
    CHECK_THROWS_AS((void)parse_count("20 s"), UnitError);
    CHECK_THROWS_AS((void)parse_count(""), UnitError);
}

TEST_CASE("dimension names") {
    CHECK(name(Dimension::length) == "length");
    CHECK(name(Dimension::decibel) == "decibel");
    CHECK(name(Dimension::dimensionless) == "dimensionless");
}
