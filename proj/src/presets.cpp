#include "extrusim/presets.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "extrusim/model_core.hpp"

namespace extrusim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kProfileNodes = 513;
constexpr double kBreakStep = 0.5;

std::vector<double> sample_profile(const std::function<double(double)>& f) {
    std::vector<double> v(kProfileNodes);
    for (int i = 0; i < kProfileNodes; ++i) {
        v[static_cast<std::size_t>(i)] = f(static_cast<double>(i) / (kProfileNodes - 1));
    }
    return v;
}

std::vector<double> breakpoints(double horizon) {
    std::vector<double> ts;
    for (double t = 0.0; t < horizon + kBreakStep; t += kBreakStep) ts.push_back(t);
    return ts;
}

BilinearTable standard_barrel_table(double horizon) {
    std::vector<double> times{0.0, 0.25 * horizon, 0.5 * horizon, 0.75 * horizon,
                              horizon + kBreakStep};
    std::vector<double> positions{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> values;
    values.reserve(times.size() * positions.size());
    for (double t : times) {
        for (double x : positions) {
            values.push_back(1.0 + 0.2 * x * t / horizon);
        }
    }
    return BilinearTable(std::move(times), std::move(positions), std::move(values));
}

void fill_transport_fields(Scenario& s) {
    const auto ts = breakpoints(s.horizon);
    std::vector<double> moisture_in(ts.size()), temperature_in(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        moisture_in[i] = 0.5 + 0.06 * std::sin(0.9 * ts[i]);
        temperature_in[i] = 1.0 + 0.05 * std::sin(1.1 * ts[i]);
    }
    s.signals.inlet_moisture = PiecewiseLinearSignal(ts, moisture_in);
    s.signals.inlet_temperature = PiecewiseLinearSignal(ts, temperature_in);
    s.signals.barrel_temperature = standard_barrel_table(s.horizon);

    s.moisture_pfz0 = sample_profile([](double x) { return 0.5 + 0.1 * std::sin(1.7 * x); });
    const double moisture_corner = s.moisture_pfz0.back();
    s.moisture_ffz0 = sample_profile(
        [moisture_corner](double x) { return moisture_corner + 0.05 * std::sin(2.2 * x); });
    s.temperature_pfz0 =
        sample_profile([](double x) { return 1.0 + 0.1 * (1.0 - std::cos(1.3 * x)); });
    const double temperature_corner = s.temperature_pfz0.back();
    s.temperature_ffz0 = sample_profile([temperature_corner](double x) {
        return temperature_corner + 0.08 * std::sin(1.4 * x);
    });
}

std::vector<double> integer_output_times(double horizon) {
    std::vector<double> out;
    for (double t = 0.0; t <= horizon + 1e-12; t += 1.0) out.push_back(t);
    return out;
}

}  // namespace

PhysicalParams standard_params() {
    PhysicalParams p;
    p.length = 1.0;
    p.pitch = 0.1;
    p.die_coeff = 1.0;
    p.pressure_coeff = 1.0;
    p.density = 1.0;
    p.effective_volume = 0.1;  // = pitch * effective_area, conserving geometry
    p.effective_area = 1.0;
    p.exchange_area = 1.0;
    p.heat_exchange = 1.0;
    p.heat_capacity = 1.0;
    p.viscosity = 1.0;
    p.visc_heat_pfz = 1.0;
    p.visc_heat_ffz = 0.8;
    p.visc_heat_coeff = 0.02;
    p.ambient_pressure = 0.0;
    return p;
}

Scenario make_equilibrium_scenario(double horizon) {
    Scenario s;
    s.name = "equilibrium";
    s.params = standard_params();
    s.equilibrium_position = 0.5;
    s.equilibrium_speed = 1.0;
    s.horizon = horizon;
    s.conserving = true;
    s.data_scale = 0.0;

    const double fill_eq =
        equilibrium_filling(s.params, s.equilibrium_position, s.equilibrium_speed);
    s.initial_interface = s.equilibrium_position;

    const auto ts = breakpoints(horizon);
    s.signals.speed =
        PiecewiseLinearSignal(ts, std::vector<double>(ts.size(), s.equilibrium_speed));
    const double feed = pumping_capacity(s.params, s.equilibrium_speed) * fill_eq;
    s.signals.feed_rate = PiecewiseLinearSignal(ts, std::vector<double>(ts.size(), feed));
    s.fill0 = sample_profile([fill_eq](double) { return fill_eq; });
    fill_transport_fields(s);
    s.output_times = integer_output_times(horizon);
    return s;
}

Scenario make_stationary_scenario(double horizon) {
    Scenario s = make_equilibrium_scenario(horizon);
    s.name = "stationary";
    const auto eq = s.equilibrium();
    s.params.visc_heat_ffz = s.params.visc_heat_pfz / eq.filling;
    const double barrel = 1.0;
    const double c0 = heat_coupling_coeff(s.params);
    const double fixed =
        barrel - heat_generation_pfz(s.params, eq.speed, eq.filling) / c0;
    s.signals.barrel_temperature = BilinearTable({0.0}, {0.0}, {barrel});
    s.signals.inlet_temperature = PiecewiseLinearSignal({0.0}, {fixed});
    s.signals.inlet_moisture = PiecewiseLinearSignal({0.0}, {0.5});
    std::fill(s.moisture_pfz0.begin(), s.moisture_pfz0.end(), 0.5);
    std::fill(s.moisture_ffz0.begin(), s.moisture_ffz0.end(), 0.5);
    std::fill(s.temperature_pfz0.begin(), s.temperature_pfz0.end(), fixed);
    std::fill(s.temperature_ffz0.begin(), s.temperature_ffz0.end(), fixed);
    return s;
}

Scenario make_perturbed_scenario(double eps, double horizon) {
    Scenario s;
    s.name = "perturbed";
    s.params = standard_params();
    s.equilibrium_position = 0.5;
    s.equilibrium_speed = 1.0;
    s.horizon = horizon;
    s.conserving = true;
    s.data_scale = eps;

    const double fill_eq =
        equilibrium_filling(s.params, s.equilibrium_position, s.equilibrium_speed);
    s.initial_interface = s.equilibrium_position + 0.3 * eps;

    // Flat first segments keep the corner data compatible.
    const auto ts = breakpoints(horizon);
    std::vector<double> speed(ts.size()), feed(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = ts[i];
        const double speed_shape = (t <= kBreakStep) ? 0.0 : std::sin(1.3 * (t - kBreakStep));
        const double ratio_shape =
            (t <= kBreakStep) ? 0.8 : 0.8 * std::cos(0.9 * (t - kBreakStep));
        speed[i] = s.equilibrium_speed * (1.0 + eps * speed_shape);
        feed[i] = s.params.density * s.params.effective_volume * speed[i] * fill_eq *
                  (1.0 + eps * ratio_shape);
    }
    s.signals.speed = PiecewiseLinearSignal(ts, speed);
    s.signals.feed_rate = PiecewiseLinearSignal(ts, feed);

    // f_p0(0) = f_pe (1 + 0.8 eps) matches the inlet ratio; zero slope at 0.
    s.fill0 = sample_profile([fill_eq, eps](double x) {
        return fill_eq * (1.0 + eps * (0.55 + 0.25 * std::cos(kPi * x)));
    });
    fill_transport_fields(s);
    s.output_times = integer_output_times(horizon);
    return s;
}

Scenario make_h2_scenario(double eps, double horizon) {
    Scenario s;
    s.name = "h2class";
    s.params = standard_params();
    s.equilibrium_position = 0.5;
    s.equilibrium_speed = 1.0;
    s.horizon = horizon;
    s.conserving = true;
    s.require_h2 = true;
    s.data_scale = eps;

    const double fill_eq =
        equilibrium_filling(s.params, s.equilibrium_position, s.equilibrium_speed);
    s.initial_interface = s.equilibrium_position + 0.2 * eps;

    const double inlet_ratio = fill_eq * (1.0 + 0.5 * eps);
    const auto ts = breakpoints(horizon);
    std::vector<double> speed(ts.size()), feed(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = ts[i];
        const double speed_shape = (t <= kBreakStep) ? 0.0 : std::sin(1.3 * (t - kBreakStep));
        speed[i] = s.equilibrium_speed * (1.0 + eps * speed_shape);
        // Feed exactly proportional to the speed: the inlet ratio is constant
        // in time, so its first and second time derivatives vanish.
        feed[i] = s.params.density * s.params.effective_volume * speed[i] * inlet_ratio;
    }
    s.signals.speed = PiecewiseLinearSignal(ts, speed);
    s.signals.feed_rate = PiecewiseLinearSignal(ts, feed);

    // sin^4 ramp: value, slope and curvature all vanish at the inlet corner,
    // slope vanishes at x = 1 too.
    s.fill0 = sample_profile([fill_eq, eps](double x) {
        const double w = std::sin(0.5 * kPi * x);
        return fill_eq * (1.0 + eps * (0.5 + 0.3 * w * w * w * w));
    });
    fill_transport_fields(s);
    s.output_times = integer_output_times(horizon);
    return s;
}

}  // namespace extrusim
