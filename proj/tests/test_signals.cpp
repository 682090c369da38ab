#include <doctest.h>

#include <stdexcept>

#include "extrusim/signals.hpp"

using namespace extrusim;

TEST_SUITE("signals") {

TEST_CASE("piecewise linear evaluation and clamping") {
    PiecewiseLinearSignal sig({0.0, 1.0, 3.0}, {2.0, 4.0, 0.0});
    CHECK(sig(0.0) == doctest::Approx(2.0));
    CHECK(sig(0.5) == doctest::Approx(3.0));
    CHECK(sig(1.0) == doctest::Approx(4.0));
    CHECK(sig(2.0) == doctest::Approx(2.0));
    // constant extension outside the table
    CHECK(sig(-5.0) == doctest::Approx(2.0));
    CHECK(sig(10.0) == doctest::Approx(0.0));
}

TEST_CASE("slope uses the left segment at breakpoints") {
    PiecewiseLinearSignal sig({0.0, 1.0, 3.0}, {2.0, 4.0, 0.0});
    CHECK(sig.slope(0.5) == doctest::Approx(2.0));
    CHECK(sig.slope(2.0) == doctest::Approx(-2.0));
    // left slope at the interior breakpoint, first-segment slope at the front
    CHECK(sig.slope(1.0) == doctest::Approx(2.0));
    CHECK(sig.slope(0.0) == doctest::Approx(2.0));
    CHECK(sig.slope(3.0) == doctest::Approx(-2.0));
    // zero in the constant-extension region
    CHECK(sig.slope(-1.0) == doctest::Approx(0.0));
    CHECK(sig.slope(4.0) == doctest::Approx(0.0));
}

TEST_CASE("invalid breakpoint tables are rejected") {
    CHECK_THROWS_AS(PiecewiseLinearSignal({1.0, 1.0}, {0.0, 0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseLinearSignal({0.0, 1.0}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(PiecewiseLinearSignal({}, {}), std::invalid_argument);
}

TEST_CASE("bilinear table reproduces bilinear functions exactly") {
    // v(t, x) = 1 + 2t + 3x + 4tx
    std::vector<double> times{0.0, 1.0, 2.0};
    std::vector<double> xs{0.0, 0.5, 1.0};
    std::vector<double> values;
    for (double t : times)
        for (double x : xs) values.push_back(1.0 + 2.0 * t + 3.0 * x + 4.0 * t * x);
    BilinearTable table(times, xs, values);
    for (double t : {0.1, 0.7, 1.9}) {
        for (double x : {0.05, 0.4, 0.97}) {
            CHECK(table(t, x) == doctest::Approx(1.0 + 2.0 * t + 3.0 * x + 4.0 * t * x)
                                     .epsilon(1e-12));
        }
    }
    // clamped extension
    CHECK(table(-1.0, 0.0) == doctest::Approx(1.0));
    CHECK(table(5.0, 2.0) == doctest::Approx(table(2.0, 1.0)));
}

TEST_CASE("bilinear table size validation") {
    CHECK_THROWS_AS(BilinearTable({0.0, 1.0}, {0.0, 1.0}, {1.0, 2.0, 3.0}),
                    std::invalid_argument);
}

}  // TEST_SUITE
