#include "extrusim/model_core.hpp"

#include <cmath>
#include <string>

namespace extrusim {

namespace {

void check_position(const PhysicalParams& p, double position, const char* where) {
    if (!(position >= 0.0) || !(position <= p.length)) {
        throw std::invalid_argument(std::string(where) + ": position " +
                                    std::to_string(position) + " outside [0, L]");
    }
}

}  // namespace

double pumping_capacity(const PhysicalParams& p, double speed) {
    if (speed < 0.0) {
        throw std::invalid_argument("pumping_capacity: negative screw speed");
    }
    return p.density * p.effective_volume * speed;
}

double net_flow_rate(const PhysicalParams& p, double position, double speed) {
    check_position(p, position, "net_flow_rate");
    if (speed < 0.0) {
        throw std::invalid_argument("net_flow_rate: negative screw speed");
    }
    const double die_gap = p.die_coeff * (p.length - position);
    return p.density * p.effective_volume * speed * die_gap /
           (p.pressure_coeff * p.density + die_gap);
}

double pressure_drop(const PhysicalParams& p, double position, double speed) {
    check_position(p, position, "pressure_drop");
    const double die_gap = p.die_coeff * (p.length - position);
    return p.viscosity * p.density * p.effective_volume * speed * (p.length - position) /
           (p.pressure_coeff * p.density + die_gap);
}

double interface_velocity(const PhysicalParams& p, double position, double speed,
                          double fill_at_interface) {
    if (fill_at_interface >= 1.0 - kFillGuard) {
        throw RegimeError("interface_velocity: filling ratio " +
                          std::to_string(fill_at_interface) +
                          " too close to 1 (degenerate denominator)");
    }
    const double flow = net_flow_rate(p, position, speed);
    const double pumped = p.density * p.effective_volume * speed * fill_at_interface;
    return (flow - pumped) / (p.density * p.effective_area * (1.0 - fill_at_interface));
}

InterfaceVelocityGradient interface_velocity_gradient(const PhysicalParams& p,
                                                      double position, double speed,
                                                      double fill_at_interface) {
    if (fill_at_interface >= 1.0 - kFillGuard) {
        throw RegimeError("interface_velocity_gradient: filling ratio too close to 1");
    }
    const double one_minus = 1.0 - fill_at_interface;
    const double area_term = p.density * p.effective_area * one_minus;
    const double den = p.pressure_coeff * p.density + p.die_coeff * (p.length - position);
    const double flow = net_flow_rate(p, position, speed);
    const double pumped = p.density * p.effective_volume * speed;

    InterfaceVelocityGradient g;
    // dF_d/dl = -K_d B rho0^2 V_eff N / den^2
    const double flow_dl =
        -p.die_coeff * p.pressure_coeff * p.density * p.density * p.effective_volume *
        speed / (den * den);
    g.d_position = flow_dl / area_term;
    // F is linear in N, so dF/dN is the coefficient evaluated at N = 1.
    const double flow_unit = net_flow_rate(p, position, 1.0);
    g.d_speed =
        (flow_unit - p.density * p.effective_volume * fill_at_interface) / area_term;
    // dF/dfp1 = (F_d - theta N) / (rho0 S_eff (1 - fp1)^2)
    g.d_fill = (flow - pumped) / (p.density * p.effective_area * one_minus * one_minus);
    return g;
}

double equilibrium_filling(const PhysicalParams& p, double position, double speed) {
    if (!(position > 0.0) || !(position < p.length)) {
        throw std::invalid_argument("equilibrium_filling: position must be in (0, L)");
    }
    if (!(speed > 0.0)) {
        throw std::invalid_argument("equilibrium_filling: speed must be positive");
    }
    const double die_gap = p.die_coeff * (p.length - position);
    return die_gap / (p.pressure_coeff * p.density + die_gap);
}

EquilibriumPoint make_equilibrium(const PhysicalParams& p, double position, double speed) {
    EquilibriumPoint eq;
    eq.position = position;
    eq.speed = speed;
    eq.filling = equilibrium_filling(p, position, speed);
    return eq;
}

double velocity_pfz(const PhysicalParams& p, double x, double speed, double position,
                    double fill_at_interface) {
    const double drift = interface_velocity(p, position, speed, fill_at_interface);
    const double v = (p.pitch * speed - x * drift) / position;
    if (!(v > 0.0)) {
        throw RegimeError("velocity_pfz: nonpositive transport velocity " +
                          std::to_string(v) + " at x=" + std::to_string(x));
    }
    return v;
}

double velocity_ffz(const PhysicalParams& p, double x, double speed, double position,
                    double fill_at_interface) {
    const double drift = interface_velocity(p, position, speed, fill_at_interface);
    const double flow = net_flow_rate(p, position, speed);
    const double v = (p.pitch * flow / (p.density * p.effective_volume) +
                      (x - 1.0) * drift) /
                     (p.length - position);
    if (!(v > 0.0)) {
        throw RegimeError("velocity_ffz: nonpositive transport velocity " +
                          std::to_string(v) + " at x=" + std::to_string(x));
    }
    return v;
}

double heat_coupling_coeff(const PhysicalParams& p) {
    return -p.pitch * p.exchange_area * p.heat_exchange /
           (p.density * p.effective_volume * p.heat_capacity);
}

double heat_generation_pfz(const PhysicalParams& p, double speed, double fill) {
    if (!(fill > 0.0)) {
        throw RegimeError("heat_generation_pfz: filling ratio must be positive, got " +
                          std::to_string(fill));
    }
    return p.visc_heat_pfz * p.visc_heat_coeff * p.viscosity * speed * speed /
           (fill * p.density * p.effective_volume * p.heat_capacity);
}

double heat_generation_ffz(const PhysicalParams& p, double speed) {
    return p.visc_heat_ffz * p.visc_heat_coeff * p.viscosity * speed * speed /
           (p.density * p.effective_volume * p.heat_capacity);
}

double source_pfz(const PhysicalParams& p, double t, double x, double temperature,
                  double fill, const OperatingSignals& signals) {
    const double c0 = heat_coupling_coeff(p);
    const double barrel = signals.barrel_temperature(t, x);
    return c0 * (temperature - barrel) + heat_generation_pfz(p, signals.speed(t), fill);
}

double source_ffz(const PhysicalParams& p, double t, double x, double temperature,
                  const OperatingSignals& signals) {
    const double c0 = heat_coupling_coeff(p);
    const double barrel = signals.barrel_temperature(t, x);
    return c0 * (temperature - barrel) + heat_generation_ffz(p, signals.speed(t));
}

double inlet_filling_unchecked(const PhysicalParams& p, const OperatingSignals& signals,
                               double t) {
    const double speed = signals.speed(t);
    if (!(speed > 0.0)) {
        throw RegimeError("inlet_filling: screw speed must stay positive, got " +
                          std::to_string(speed) + " at t=" + std::to_string(t));
    }
    return signals.feed_rate(t) / pumping_capacity(p, speed);
}

double inlet_filling(const PhysicalParams& p, const OperatingSignals& signals, double t) {
    const double ratio = inlet_filling_unchecked(p, signals, t);
    if (!(ratio > 0.0) || !(ratio < 1.0)) {
        throw RegimeError("inlet_filling: ratio " + std::to_string(ratio) +
                          " outside (0,1) at t=" + std::to_string(t));
    }
    return ratio;
}

double inlet_filling_slope(const PhysicalParams& p, const OperatingSignals& signals,
                           double t) {
    const double speed = signals.speed(t);
    const double feed = signals.feed_rate(t);
    const double speed_slope = signals.speed.slope(t);
    const double feed_slope = signals.feed_rate.slope(t);
    return (feed_slope * speed - feed * speed_slope) /
           (p.density * p.effective_volume * speed * speed);
}

double inlet_filling_curvature(const PhysicalParams& p, const OperatingSignals& signals,
                               double t) {
    const double speed = signals.speed(t);
    const double speed_slope = signals.speed.slope(t);
    return -2.0 * speed_slope * inlet_filling_slope(p, signals, t) / speed;
}

}  // namespace extrusim
