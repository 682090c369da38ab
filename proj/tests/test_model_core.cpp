#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "extrusim/model_core.hpp"

using namespace extrusim;

namespace {

PhysicalParams unit_params() {
    PhysicalParams p;
    p.length = 1.0;
    p.pitch = 1.0;
    p.die_coeff = 1.0;
    p.pressure_coeff = 1.0;
    p.density = 1.0;
    p.effective_volume = 1.0;
    p.effective_area = 1.0;
    p.exchange_area = 1.0;
    p.heat_exchange = 1.0;
    p.heat_capacity = 1.0;
    p.viscosity = 1.0;
    p.visc_heat_pfz = 1.0;
    p.visc_heat_ffz = 1.0;
    p.visc_heat_coeff = 1.0;
    return p;
}

OperatingSignals constant_signals(double speed, double feed, double barrel) {
    OperatingSignals s;
    s.speed = PiecewiseLinearSignal({0.0, 100.0}, {speed, speed});
    s.feed_rate = PiecewiseLinearSignal({0.0, 100.0}, {feed, feed});
    s.inlet_moisture = PiecewiseLinearSignal({0.0}, {0.5});
    s.inlet_temperature = PiecewiseLinearSignal({0.0}, {1.0});
    s.barrel_temperature = BilinearTable({0.0}, {0.0}, {barrel});
    return s;
}

}  // namespace

TEST_SUITE("model_core") {

TEST_CASE("pumping capacity") {
    const auto p = unit_params();
    CHECK(pumping_capacity(p, 0.0) == 0.0);
    CHECK(pumping_capacity(p, 2.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(pumping_capacity(p, -1.0), std::invalid_argument);
    // linear in N
    auto q = p;
    q.density = 3.2;
    q.effective_volume = 0.7;
    for (double n : {0.1, 1.0, 4.5}) {
        CHECK(pumping_capacity(q, 2.0 * n) ==
              doctest::Approx(2.0 * pumping_capacity(q, n)));
    }
}

TEST_CASE("net flow rate closed form") {
    const auto p = unit_params();
    CHECK(net_flow_rate(p, p.length, 3.0) == 0.0);
    CHECK(net_flow_rate(p, 0.3, 0.0) == 0.0);
    CHECK(net_flow_rate(p, 0.5, 2.0) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(net_flow_rate(p, -0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(net_flow_rate(p, 1.5, 1.0), std::invalid_argument);
}

TEST_CASE("net flow rate monotone in l, linear in N") {
    const auto p = unit_params();
    double prev = net_flow_rate(p, 0.0, 1.0);
    for (int i = 1; i <= 20; ++i) {
        const double l = static_cast<double>(i) / 20.0;
        const double cur = net_flow_rate(p, l, 1.0);
        CHECK(cur < prev);
        prev = cur;
    }
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const double l = uni(rng);
        const double n = 0.1 + uni(rng);
        CHECK(net_flow_rate(p, l, 2.0 * n) ==
              doctest::Approx(2.0 * net_flow_rate(p, l, n)).epsilon(1e-13));
    }
}

TEST_CASE("pressure drop and flow identity") {
    const auto p = unit_params();
    CHECK(pressure_drop(p, p.length, 2.0) == 0.0);
    CHECK(pressure_drop(p, 0.4, 0.0) == 0.0);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto q = p;
    q.viscosity = 2.5;
    q.die_coeff = 0.8;
    for (int k = 0; k < 100; ++k) {
        const double l = 0.999 * uni(rng);
        const double n = 0.1 + 3.0 * uni(rng);
        CHECK(q.die_coeff / q.viscosity * pressure_drop(q, l, n) ==
              doctest::Approx(net_flow_rate(q, l, n)).epsilon(1e-13));
    }
}

TEST_CASE("interface velocity") {
    const auto p = unit_params();
    CHECK(interface_velocity(p, 0.5, 1.0, 0.5) == doctest::Approx(-1.0 / 3.0));
    CHECK_THROWS_AS(interface_velocity(p, 0.5, 1.0, 0.999999), RegimeError);
    // equilibrium identity
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uni(0.05, 0.95);
    for (int k = 0; k < 50; ++k) {
        const double l = uni(rng);
        const double n = 0.2 + uni(rng);
        const double fe = equilibrium_filling(p, l, n);
        CHECK(std::abs(interface_velocity(p, l, n, fe)) < 1e-12);
    }
}

TEST_CASE("interface velocity gradient matches finite differences") {
    auto p = unit_params();
    p.effective_volume = 0.3;
    p.effective_area = 1.7;
    p.die_coeff = 2.0;
    const double l = 0.42, n = 1.3, f = 0.35, d = 1e-6;
    const auto g = interface_velocity_gradient(p, l, n, f);
    const double fd_l = (interface_velocity(p, l + d, n, f) -
                         interface_velocity(p, l - d, n, f)) /
                        (2 * d);
    const double fd_n = (interface_velocity(p, l, n + d, f) -
                         interface_velocity(p, l, n - d, f)) /
                        (2 * d);
    const double fd_f = (interface_velocity(p, l, n, f + d) -
                         interface_velocity(p, l, n, f - d)) /
                        (2 * d);
    CHECK(g.d_position == doctest::Approx(fd_l).epsilon(1e-6));
    CHECK(g.d_speed == doctest::Approx(fd_n).epsilon(1e-6));
    CHECK(g.d_fill == doctest::Approx(fd_f).epsilon(1e-6));
}

TEST_CASE("equilibrium filling") {
    const auto p = unit_params();
    CHECK(equilibrium_filling(p, 0.5, 1.0) == doctest::Approx(1.0 / 3.0));
    CHECK(equilibrium_filling(p, 0.999999, 1.0) < 1e-5);
    // independent of the screw speed
    CHECK(equilibrium_filling(p, 0.37, 1.0) ==
          doctest::Approx(equilibrium_filling(p, 0.37, 7.0)));
    for (double l : {0.01, 0.25, 0.5, 0.75, 0.99}) {
        const double fe = equilibrium_filling(p, l, 2.0);
        CHECK(fe > 0.0);
        CHECK(fe < 1.0);
    }
}

TEST_CASE("pfz velocity") {
    const auto p = unit_params();
    // F-term vanishes at x = 0: exactly zeta N / l
    CHECK(velocity_pfz(p, 0.0, 1.0, 0.5, 0.7) == 1.0 / 0.5);
    // at equilibrium any x gives zeta N / l
    const double fe = equilibrium_filling(p, 0.5, 1.0);
    for (double x : {0.0, 0.3, 1.0}) {
        CHECK(velocity_pfz(p, x, 1.0, 0.5, fe) == doctest::Approx(2.0).epsilon(1e-12));
    }
    CHECK(velocity_pfz(p, 1.0, 1.0, 0.5, 0.5) == doctest::Approx(8.0 / 3.0));
    // strongly pumping configuration reverses the PFZ velocity at x = 1
    auto q = unit_params();
    q.length = 2.0;
    q.die_coeff = 100.0;
    q.effective_volume = 10.0;
    q.effective_area = 0.1;
    CHECK_THROWS_AS(velocity_pfz(q, 1.0, 1.0, 1.0, 0.1), RegimeError);
}

TEST_CASE("ffz velocity") {
    const auto p = unit_params();
    const double flow = net_flow_rate(p, 0.5, 1.0);
    // the F-term vanishes at x = 1: exactly zeta F_d / (rho0 V_eff (L - l))
    CHECK(velocity_ffz(p, 1.0, 1.0, 0.5, 0.7) == flow / 0.5);
    const double fe = equilibrium_filling(p, 0.5, 1.0);
    for (double x : {0.0, 0.4, 1.0}) {
        CHECK(velocity_ffz(p, x, 1.0, 0.5, fe) ==
              doctest::Approx(flow / 0.5).epsilon(1e-12));
    }
    CHECK(velocity_ffz(p, 0.0, 1.0, 0.5, 0.5) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("pfz source") {
    const auto p = unit_params();
    CHECK(heat_coupling_coeff(p) < 0.0);
    // both terms vanish: T_p = T_b and N = 0
    const auto rest = constant_signals(0.0, 0.0, 1.0);
    CHECK(source_pfz(p, 0.0, 0.5, 1.0, 0.4, rest) == doctest::Approx(0.0));
    // hand evaluation: C0 = -1, g_p = 1/0.5 = 2, T_p - T_b = 2
    const auto running = constant_signals(1.0, 0.1, 1.0);
    CHECK(source_pfz(p, 0.0, 0.5, 3.0, 0.5, running) == doctest::Approx(0.0));
    CHECK_THROWS_AS(heat_generation_pfz(p, 1.0, 0.0), RegimeError);
}

TEST_CASE("ffz source") {
    const auto p = unit_params();
    const auto rest = constant_signals(0.0, 0.0, 1.0);
    CHECK(source_ffz(p, 0.0, 0.5, 1.0, rest) == doctest::Approx(0.0));
    CHECK(heat_generation_ffz(p, 2.0) == doctest::Approx(4.0));
    // g_f has no x or T dependence
    const auto running = constant_signals(2.0, 0.1, 1.0);
    const double base = source_ffz(p, 0.0, 0.2, 1.0, running);
    CHECK(source_ffz(p, 0.0, 0.9, 1.0, running) == doctest::Approx(base));
    CHECK(source_ffz(p, 0.0, 0.2, 2.0, running) ==
          doctest::Approx(base + heat_coupling_coeff(p)));
}

TEST_CASE("inlet filling ratio") {
    const auto p = unit_params();
    const double fe = equilibrium_filling(p, 0.5, 1.0);
    const auto forced = constant_signals(1.0, pumping_capacity(p, 1.0) * fe, 1.0);
    CHECK(inlet_filling(p, forced, 3.0) == doctest::Approx(fe));
    CHECK(inlet_filling(p, constant_signals(0.5, 0.2, 1.0), 0.0) ==
          doctest::Approx(0.4));
    CHECK_THROWS_AS(inlet_filling(p, constant_signals(1.0, 0.0, 1.0), 0.0),
                    RegimeError);
    CHECK_THROWS_AS(inlet_filling(p, constant_signals(1.0, 1.5, 1.0), 0.0),
                    RegimeError);
}

TEST_CASE("parameter validation") {
    auto p = unit_params();
    CHECK_NOTHROW(p.validate());
    p.density = -1.0;
    p.viscosity = 0.0;
    const auto errors = p.validation_errors();
    CHECK(errors.size() == 2);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("conserving geometry flag") {
    auto p = unit_params();
    p.pitch = 0.1;
    p.effective_volume = 0.1;
    p.effective_area = 1.0;
    CHECK(p.is_conserving());
    p.effective_volume = 0.11;
    CHECK_FALSE(p.is_conserving());
}

}  // TEST_SUITE
