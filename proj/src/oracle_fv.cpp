#include "extrusim/oracle_fv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace extrusim {

namespace {

constexpr double kCflLimit = 0.9;

double interp_curve(const std::vector<double>& xs, const std::vector<double>& vs,
                    double x) {
    if (x <= xs.front()) return vs.front();
    if (x >= xs.back()) return vs.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const std::size_t k = std::min(i, xs.size() - 2);
    const double w = (x - xs[k]) / (xs[k + 1] - xs[k]);
    return vs[k] + w * (vs[k + 1] - vs[k]);
}

}  // namespace

FvState make_fv_state(const PhysicalParams& params, double l0,
                      const std::vector<double>& fill,
                      const std::vector<double>& moisture_pfz,
                      const std::vector<double>& temperature_pfz,
                      const std::vector<double>& moisture_ffz,
                      const std::vector<double>& temperature_ffz) {
    if (fill.size() < 2 || moisture_pfz.size() != fill.size() ||
        temperature_pfz.size() != fill.size() || moisture_ffz.size() != fill.size() ||
        temperature_ffz.size() != fill.size()) {
        throw std::invalid_argument("make_fv_state: inconsistent cell arrays");
    }
    if (!(l0 > 0.0) || !(l0 < params.length)) {
        throw std::invalid_argument("make_fv_state: interface outside (0, L)");
    }
    for (double f : fill) {
        if (!(f > 0.0) || !(f < 1.0)) {
            throw std::invalid_argument("make_fv_state: fill cell outside (0, 1)");
        }
    }
    FvState s;
    s.time = 0.0;
    s.interface_position = l0;
    s.fill = fill;
    s.moisture_pfz = moisture_pfz;
    s.temperature_pfz = temperature_pfz;
    s.moisture_ffz = moisture_ffz;
    s.temperature_ffz = temperature_ffz;
    return s;
}

double fv_max_dt(const FvState& state, const OperatingSignals& signals,
                 const PhysicalParams& params) {
    const double t = state.time;
    const double l = state.interface_position;
    const double fp1 = state.fill_trace();
    const double speed = signals.speed(t);
    double fastest = 0.0;
    for (std::size_t i = 0; i < state.cells(); ++i) {
        const double x = state.cell_center(i);
        fastest = std::max(fastest, velocity_pfz(params, x, speed, l, fp1));
        fastest = std::max(fastest, velocity_ffz(params, x, speed, l, fp1));
    }
    return kCflLimit * state.spacing() / fastest;
}

FvState fv_step(const FvState& state, const OperatingSignals& signals,
                const PhysicalParams& params, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("fv_step: dt must be positive");
    const double t = state.time;
    const double l = state.interface_position;
    const double fp1 = state.fill_trace();
    const double speed = signals.speed(t);
    const double dx = state.spacing();
    const std::size_t n = state.cells();

    std::vector<double> a_pfz(n), a_ffz(n);
    double fastest = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = state.cell_center(i);
        a_pfz[i] = velocity_pfz(params, x, speed, l, fp1);
        a_ffz[i] = velocity_ffz(params, x, speed, l, fp1);
        fastest = std::max(fastest, std::max(a_pfz[i], a_ffz[i]));
    }
    if (fastest * dt / dx > kCflLimit * (1.0 + 1e-9)) {
        throw RegimeError("fv_step: CFL number " + std::to_string(fastest * dt / dx) +
                          " exceeds " + std::to_string(kCflLimit));
    }

    // Inflow ghost values.
    const double fill_in = inlet_filling(params, signals, t);
    const double moisture_in = signals.inlet_moisture(t);
    const double temperature_in = signals.inlet_temperature(t);
    const double moisture_couple = state.moisture_pfz.back();
    const double temperature_couple = state.temperature_pfz.back();

    auto upwind = [&](const std::vector<double>& u, const std::vector<double>& a,
                      double ghost, std::size_t i) {
        const double left = (i == 0) ? ghost : u[i - 1];
        return u[i] - dt / dx * a[i] * (u[i] - left);
    };

    FvState next = state;
    next.time = t + dt;
    next.interface_position = l + dt * interface_velocity(params, l, speed, fp1);
    if (!(next.interface_position > 0.0) ||
        !(next.interface_position < params.length)) {
        throw RegimeError("fv_step: interface left (0, L)");
    }

    const double c0 = heat_coupling_coeff(params);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = state.cell_center(i);
        next.fill[i] = upwind(state.fill, a_pfz, fill_in, i);
        next.moisture_pfz[i] = upwind(state.moisture_pfz, a_pfz, moisture_in, i);
        next.moisture_ffz[i] = upwind(state.moisture_ffz, a_ffz, moisture_couple, i);
        const double barrel = signals.barrel_temperature(t, x);
        const double source_p =
            c0 * (state.temperature_pfz[i] - barrel) +
            heat_generation_pfz(params, speed, state.fill[i]);
        const double source_f = c0 * (state.temperature_ffz[i] - barrel) +
                                heat_generation_ffz(params, speed);
        next.temperature_pfz[i] =
            upwind(state.temperature_pfz, a_pfz, temperature_in, i) + dt * source_p;
        next.temperature_ffz[i] =
            upwind(state.temperature_ffz, a_ffz, temperature_couple, i) + dt * source_f;
        if (!(next.fill[i] > 0.0) || !(next.fill[i] < 1.0)) {
            throw RegimeError("fv_step: fill cell left (0, 1) at x=" + std::to_string(x));
        }
    }
    return next;
}

FvHistory fv_solve(const FvState& initial, const OperatingSignals& signals,
                   const PhysicalParams& params, double horizon,
                   const std::vector<double>& output_times) {
    for (double t : output_times) {
        if (t < initial.time - 1e-12 || t > horizon + 1e-12) {
            throw std::invalid_argument("fv_solve: output time outside [t0, horizon]");
        }
    }
    FvHistory history;
    FvState state = initial;
    auto record = [&history](const FvState& s) {
        history.times.push_back(s.time);
        history.interface_position.push_back(s.interface_position);
        history.fill_trace.push_back(s.fill_trace());
    };
    record(state);

    std::vector<double> marks = output_times;
    std::sort(marks.begin(), marks.end());
    std::size_t next_mark = 0;
    while (next_mark < marks.size() && marks[next_mark] <= state.time + 1e-12) {
        history.snapshots.push_back({marks[next_mark], state});
        ++next_mark;
    }

    const double tiny = 1e-12 * std::max(1.0, horizon);
    while (state.time < horizon - tiny) {
        double dt = fv_max_dt(state, signals, params);
        dt = std::min(dt, horizon - state.time);
        if (next_mark < marks.size()) {
            dt = std::min(dt, marks[next_mark] - state.time);
        }
        state = fv_step(state, signals, params, dt);
        record(state);
        while (next_mark < marks.size() && marks[next_mark] <= state.time + tiny) {
            history.snapshots.push_back({marks[next_mark], state});
            ++next_mark;
        }
    }
    return history;
}

FieldError l1_error(const std::vector<double>& xs_a, const std::vector<double>& va,
                    const std::vector<double>& xs_b, const std::vector<double>& vb) {
    constexpr int kQuadPoints = 4096;
    double abs_acc = 0.0, ref_acc = 0.0;
    double prev_d = 0.0, prev_r = 0.0;
    for (int q = 0; q <= kQuadPoints; ++q) {
        const double x = static_cast<double>(q) / kQuadPoints;
        const double d = std::abs(interp_curve(xs_a, va, x) - interp_curve(xs_b, vb, x));
        const double r = std::abs(interp_curve(xs_b, vb, x));
        if (q > 0) {
            abs_acc += 0.5 * (prev_d + d) / kQuadPoints;
            ref_acc += 0.5 * (prev_r + r) / kQuadPoints;
        }
        prev_d = d;
        prev_r = r;
    }
    FieldError err;
    err.absolute = abs_acc;
    err.relative = (ref_acc > 0.0) ? abs_acc / ref_acc : abs_acc;
    return err;
}

FieldError linf_error(const std::vector<double>& ts_a, const std::vector<double>& va,
                      const std::vector<double>& ts_b, const std::vector<double>& vb) {
    constexpr int kSamplePoints = 2048;
    const double t0 = std::max(ts_a.front(), ts_b.front());
    const double t1 = std::min(ts_a.back(), ts_b.back());
    double worst = 0.0, ref = 0.0;
    for (int q = 0; q <= kSamplePoints; ++q) {
        const double t = t0 + (t1 - t0) * static_cast<double>(q) / kSamplePoints;
        worst = std::max(worst, std::abs(interp_curve(ts_a, va, t) -
                                         interp_curve(ts_b, vb, t)));
        ref = std::max(ref, std::abs(interp_curve(ts_b, vb, t)));
    }
    FieldError err;
    err.absolute = worst;
    err.relative = (ref > 0.0) ? worst / ref : worst;
    return err;
}

}  // namespace extrusim
