#include "extrusim/transport_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace extrusim {

namespace {

std::vector<double> uniform_grid(int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        xs[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
    }
    return xs;
}

double trapezoid(const std::vector<double>& xs, const std::vector<double>& vs) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        acc += 0.5 * (vs[i] + vs[i + 1]) * (xs[i + 1] - xs[i]);
    }
    return acc;
}

// Integrating-factor step along a traced path. The source integral
// int e^{c0 (t - sigma)} (-c0 T_b + g) dsigma is rewritten against the
// measure d e^{c0 (t - sigma)} with the smooth factor K = T_b - g / c0
// treated trapezoidally per segment, so constant coefficients integrate
// exactly and the error stays O(h^2) otherwise.
double integrate_source_along(const TracedPath& path, double start_value, double c0,
                              const std::vector<double>& relax_target) {
    const double t = path.s.back();
    double value = std::exp(c0 * (t - path.s.front())) * start_value;
    double prev_weight = std::exp(c0 * (t - path.s.front()));
    for (std::size_t j = 0; j + 1 < path.s.size(); ++j) {
        const double next_weight = std::exp(c0 * (t - path.s[j + 1]));
        value += 0.5 * (relax_target[j] + relax_target[j + 1]) *
                 (next_weight - prev_weight);
        prev_weight = next_weight;
    }
    return value;
}

}  // namespace

// ---------------------------------------------------------------------------
// Filling ratio
// ---------------------------------------------------------------------------

double reconstruct_fp(const InterfaceTrajectory& traj, const OperatingSignals& signals,
                      const PhysicalParams& params, const WindowState& state, double t,
                      double x) {
    const Foot foot =
        trace_foot(Zone::pfz, traj, signals, params, t, x, state.start_time);
    if (foot.is_boundary()) {
        return inlet_filling(params, signals, foot.location);
    }
    return state.fill_profile.value(foot.location);
}

FillPointValues reconstruct_fp_derivatives(const InterfaceTrajectory& traj,
                                           const OperatingSignals& signals,
                                           const PhysicalParams& params,
                                           const WindowState& state, double t, double x) {
    FillPointValues out;
    const auto sens = foot_derivatives(traj, signals, params, t, x, state.start_time);
    out.foot = sens.foot;
    if (sens.foot.is_initial()) {
        const double beta = sens.foot.location;
        out.value = state.fill_profile.value(beta);
        // dbeta/dx carries no x dependence, so the chain rule has no
        // second-derivative term from the foot map.
        out.d1 = state.fill_profile.slope(beta) * sens.d_dx;
        out.d2 = state.fill_profile.curvature(beta) * sens.d_dx * sens.d_dx;
    } else {
        const double tau = sens.foot.location;
        const double ratio = inlet_filling(params, signals, tau);
        const double ratio_dt = inlet_filling_slope(params, signals, tau);
        const double ratio_dtt = inlet_filling_curvature(params, signals, tau);
        const double tau_xx = boundary_foot_curvature(traj, signals, params, t, sens);
        out.value = ratio;
        out.d1 = ratio_dt * sens.d_dx;
        out.d2 = ratio_dtt * sens.d_dx * sens.d_dx + ratio_dt * tau_xx;
    }
    return out;
}

WindowState resample_window_end(const InterfaceTrajectory& traj,
                                const OperatingSignals& signals,
                                const PhysicalParams& params, const WindowState& state,
                                double t_end, int grid_nodes) {
    const auto xs = uniform_grid(grid_nodes);
    std::vector<double> values(xs.size()), slopes(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto v =
            reconstruct_fp_derivatives(traj, signals, params, state, t_end, xs[i]);
        values[i] = v.value;
        slopes[i] = v.d1;
    }
    // The trajectory's own fixed-point value is the anchor for the next
    // window; keep the concatenation exact at x = 1.
    values.back() = traj.fill(t_end);
    WindowState next;
    next.start_time = t_end;
    next.interface_position = traj.position(t_end);
    next.fill_profile = SampledProfile(std::move(values), std::move(slopes));
    return next;
}

// ---------------------------------------------------------------------------
// Moisture / temperature point solves
// ---------------------------------------------------------------------------

PfzPointValues solve_point_pfz(const TransportContext& ctx, double t, double x) {
    PfzPointValues out;
    const double s0 = ctx.state.start_time;
    const auto path = trace_path(Zone::pfz, ctx.traj, ctx.signals, ctx.params, t, x, s0);
    out.foot = path.foot;

    double moisture_start, temperature_start;
    if (path.foot.is_boundary()) {
        const double tau = path.foot.location;
        out.fill = inlet_filling(ctx.params, ctx.signals, tau);
        moisture_start = ctx.signals.inlet_moisture(tau);
        temperature_start = ctx.signals.inlet_temperature(tau);
    } else {
        const double beta = path.foot.location;
        out.fill = ctx.state.fill_profile.value(beta);
        moisture_start = ctx.data.moisture_pfz.value(beta);
        temperature_start = ctx.data.temperature_pfz.value(beta);
    }
    out.moisture = moisture_start;

    // dT/ds = C0 (T - T_b) + g_p along the path; f_p rides the same
    // characteristic, so g_p uses the transported fill value.
    const double c0 = heat_coupling_coeff(ctx.params);
    std::vector<double> target(path.s.size());
    for (std::size_t j = 0; j < path.s.size(); ++j) {
        const double tb = ctx.signals.barrel_temperature(path.s[j], path.xi[j]);
        target[j] = tb - heat_generation_pfz(ctx.params, ctx.signals.speed(path.s[j]),
                                             out.fill) /
                             c0;
    }
    out.temperature = integrate_source_along(path, temperature_start, c0, target);
    return out;
}

FfzPointValues solve_point_ffz(const TransportContext& ctx, double t, double x) {
    FfzPointValues out;
    const double s0 = ctx.state.start_time;
    const auto path = trace_path(Zone::ffz, ctx.traj, ctx.signals, ctx.params, t, x, s0);
    out.foot = path.foot;

    double moisture_start, temperature_start;
    if (path.foot.is_boundary()) {
        // Zone coupling: the FFZ inflow carries the PFZ outlet trace.
        const auto upstream = solve_point_pfz(ctx, path.foot.location, 1.0);
        moisture_start = upstream.moisture;
        temperature_start = upstream.temperature;
    } else {
        const double beta = path.foot.location;
        moisture_start = ctx.data.moisture_ffz.value(beta);
        temperature_start = ctx.data.temperature_ffz.value(beta);
    }
    out.moisture = moisture_start;

    const double c0 = heat_coupling_coeff(ctx.params);
    std::vector<double> target(path.s.size());
    for (std::size_t j = 0; j < path.s.size(); ++j) {
        const double tb = ctx.signals.barrel_temperature(path.s[j], path.xi[j]);
        target[j] =
            tb - heat_generation_ffz(ctx.params, ctx.signals.speed(path.s[j])) / c0;
    }
    out.temperature = integrate_source_along(path, temperature_start, c0, target);
    return out;
}

std::vector<MoistureSlice> solve_moisture(const TransportContext& ctx,
                                          const std::vector<double>& output_times,
                                          int grid_nodes) {
    const auto xs = uniform_grid(grid_nodes);
    std::vector<MoistureSlice> slices;
    slices.reserve(output_times.size());
    for (double t : output_times) {
        MoistureSlice slice;
        slice.time = t;
        slice.pfz.resize(xs.size());
        slice.ffz.resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            slice.pfz[i] = solve_point_pfz(ctx, t, xs[i]).moisture;
            slice.ffz[i] = solve_point_ffz(ctx, t, xs[i]).moisture;
        }
        slices.push_back(std::move(slice));
    }
    return slices;
}

std::vector<TemperatureSlice> solve_temperature(const TransportContext& ctx,
                                                const std::vector<double>& output_times,
                                                int grid_nodes) {
    const auto xs = uniform_grid(grid_nodes);
    std::vector<TemperatureSlice> slices;
    slices.reserve(output_times.size());
    for (double t : output_times) {
        TemperatureSlice slice;
        slice.time = t;
        slice.pfz.resize(xs.size());
        slice.ffz.resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            slice.pfz[i] = solve_point_pfz(ctx, t, xs[i]).temperature;
            slice.ffz[i] = solve_point_ffz(ctx, t, xs[i]).temperature;
        }
        slices.push_back(std::move(slice));
    }
    return slices;
}

// ---------------------------------------------------------------------------
// History assembly
// ---------------------------------------------------------------------------

double total_mass(const TransportContext& ctx, double t, int grid_nodes) {
    const auto xs = uniform_grid(grid_nodes);
    std::vector<double> fill(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fill[i] = reconstruct_fp(ctx.traj, ctx.signals, ctx.params, ctx.state, t, xs[i]);
    }
    const double l = ctx.traj.position(t);
    return ctx.params.density * ctx.params.effective_area *
           (l * trapezoid(xs, fill) + (ctx.params.length - l));
}

SolutionHistory evaluate_history(const TransportContext& ctx,
                                 const std::vector<double>& output_times, int grid_nodes,
                                 bool with_mass_series, double mass_dt) {
    SolutionHistory history;

    const auto& ts = ctx.traj.times();
    history.interface_series.reserve(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
        InterfaceSample sample;
        sample.t = ts[k];
        sample.position = ctx.traj.positions()[k];
        sample.fill = ctx.traj.fills()[k];
        const double speed = ctx.signals.speed(sample.t);
        sample.flow = net_flow_rate(ctx.params, sample.position, speed);
        sample.pressure = pressure_drop(ctx.params, sample.position, speed);
        history.interface_series.push_back(sample);
    }

    const auto xs = uniform_grid(grid_nodes);
    for (double t : output_times) {
        FieldSnapshot snap;
        snap.time = t;
        snap.x = xs;
        const std::size_t n = xs.size();
        snap.fill.resize(n);
        snap.fill_dx.resize(n);
        snap.fill_dxx.resize(n);
        snap.moisture_pfz.resize(n);
        snap.temperature_pfz.resize(n);
        snap.moisture_ffz.resize(n);
        snap.temperature_ffz.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto pfz = solve_point_pfz(ctx, t, xs[i]);
            snap.fill[i] = pfz.fill;
            snap.moisture_pfz[i] = pfz.moisture;
            snap.temperature_pfz[i] = pfz.temperature;
            const auto d = reconstruct_fp_derivatives(ctx.traj, ctx.signals, ctx.params,
                                                      ctx.state, t, xs[i]);
            snap.fill_dx[i] = d.d1;
            snap.fill_dxx[i] = d.d2;
            const auto ffz = solve_point_ffz(ctx, t, xs[i]);
            snap.moisture_ffz[i] = ffz.moisture;
            snap.temperature_ffz[i] = ffz.temperature;
        }
        history.snapshots.push_back(std::move(snap));
    }

    if (with_mass_series) {
        const double t0 = ctx.traj.start_time();
        const double t1 = ctx.traj.end_time();
        const int steps = std::max(2, static_cast<int>(std::round((t1 - t0) / mass_dt)));
        for (int j = 0; j <= steps; ++j) {
            const double t = t0 + (t1 - t0) * static_cast<double>(j) / steps;
            history.mass_times.push_back(t);
            history.mass.push_back(total_mass(ctx, t, grid_nodes));
            const double flow =
                net_flow_rate(ctx.params, ctx.traj.position(t), ctx.signals.speed(t));
            history.net_inflow.push_back(ctx.signals.feed_rate(t) - flow);
        }
    }
    return history;
}

// ---------------------------------------------------------------------------
// Weak residual
// ---------------------------------------------------------------------------

std::vector<TestFunction> polynomial_test_family(double t_scale) {
    if (!(t_scale > 0.0)) {
        throw std::invalid_argument("polynomial_test_family: t_scale must be positive");
    }
    std::vector<TestFunction> family;
    for (int j = 0; j <= 2; ++j) {
        for (int k = 1; k <= 3; ++k) {
            TestFunction f;
            f.phi = [j, k, t_scale](double t, double x) {
                return std::pow(t / t_scale, j) * std::pow(1.0 - x, k);
            };
            f.phi_t = [j, k, t_scale](double t, double x) {
                if (j == 0) return 0.0;
                return j / t_scale * std::pow(t / t_scale, j - 1) * std::pow(1.0 - x, k);
            };
            f.phi_x = [j, k, t_scale](double t, double x) {
                return -k * std::pow(t / t_scale, j) * std::pow(1.0 - x, k - 1);
            };
            family.push_back(std::move(f));
        }
    }
    return family;
}

double weak_residual(const FieldLattice& u,
                     const std::function<double(double, double)>& a,
                     const std::function<double(double, double)>& ax_plus_b,
                     const std::function<double(double, double)>& c,
                     const std::vector<double>& u0, const std::vector<double>& h_inflow,
                     const TestFunction& test) {
    const std::size_t nt = u.times.size();
    const std::size_t nx = u.xs.size();
    if (u.values.size() != nt * nx || u0.size() != nx || h_inflow.size() != nt) {
        throw std::invalid_argument("weak_residual: inconsistent lattice sizes");
    }
    for (std::size_t i = 0; i < nt; ++i) {
        if (std::abs(test.phi(u.times[i], 1.0)) > 1e-12) {
            throw std::invalid_argument("weak_residual: test function must vanish at x=1");
        }
    }
    auto t_weight = [&](std::size_t i) {
        if (nt == 1) return 0.0;
        if (i == 0) return 0.5 * (u.times[1] - u.times[0]);
        if (i == nt - 1) return 0.5 * (u.times[nt - 1] - u.times[nt - 2]);
        return 0.5 * (u.times[i + 1] - u.times[i - 1]);
    };
    auto x_weight = [&](std::size_t j) {
        if (j == 0) return 0.5 * (u.xs[1] - u.xs[0]);
        if (j == nx - 1) return 0.5 * (u.xs[nx - 1] - u.xs[nx - 2]);
        return 0.5 * (u.xs[j + 1] - u.xs[j - 1]);
    };

    double interior = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        const double t = u.times[i];
        const double wt = t_weight(i);
        for (std::size_t j = 0; j < nx; ++j) {
            const double x = u.xs[j];
            const double integrand =
                u.at(i, j) * (test.phi_t(t, x) + a(t, x) * test.phi_x(t, x) +
                              ax_plus_b(t, x) * test.phi(t, x)) +
                c(t, x) * test.phi(t, x);
            interior += wt * x_weight(j) * integrand;
        }
    }

    const double t_end = u.times.back();
    const double t_begin = u.times.front();
    double end_term = 0.0, init_term = 0.0;
    for (std::size_t j = 0; j < nx; ++j) {
        end_term += x_weight(j) * u.at(nt - 1, j) * test.phi(t_end, u.xs[j]);
        init_term += x_weight(j) * u0[j] * test.phi(t_begin, u.xs[j]);
    }
    double boundary_term = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        boundary_term +=
            t_weight(i) * h_inflow[i] * a(u.times[i], 0.0) * test.phi(u.times[i], 0.0);
    }
    return -interior + end_term - init_term - boundary_term;
}

// ---------------------------------------------------------------------------
// Norm estimates
// ---------------------------------------------------------------------------

namespace {

double sup_l2(const std::vector<FieldSnapshot>& snaps,
              std::vector<double> FieldSnapshot::*field) {
    double worst = 0.0;
    for (const auto& s : snaps) {
        const auto& vs = s.*field;
        std::vector<double> sq(vs.size());
        for (std::size_t i = 0; i < vs.size(); ++i) sq[i] = vs[i] * vs[i];
        worst = std::max(worst, std::sqrt(trapezoid(s.x, sq)));
    }
    return worst;
}

double l2_of_profile(const SampledProfile& p) {
    std::vector<double> xs(p.node_count()), sq(p.node_count());
    for (std::size_t i = 0; i < p.node_count(); ++i) {
        xs[i] = p.node(i);
        sq[i] = p.values()[i] * p.values()[i];
    }
    return std::sqrt(trapezoid(xs, sq));
}

double l2_of_signal(const PiecewiseLinearSignal& sig, double t0, double t1) {
    constexpr int kSamples = 2048;
    double acc = 0.0;
    double prev = sig(t0) * sig(t0);
    for (int i = 1; i <= kSamples; ++i) {
        const double t = t0 + (t1 - t0) * static_cast<double>(i) / kSamples;
        const double cur = sig(t) * sig(t);
        acc += 0.5 * (prev + cur) * (t1 - t0) / kSamples;
        prev = cur;
    }
    return std::sqrt(acc);
}

}  // namespace

NormReport estimate_norms(const TransportContext& ctx, const SolutionHistory& history,
                          const EquilibriumPoint& eq, double data_eps, double horizon) {
    NormReport report;
    report.data_eps = data_eps;

    for (const auto& snap : history.snapshots) {
        double dev = 0.0, slope = 0.0;
        for (std::size_t i = 0; i < snap.fill.size(); ++i) {
            dev = std::max(dev, std::abs(snap.fill[i] - eq.filling));
            slope = std::max(slope, std::abs(snap.fill_dx[i]));
        }
        report.fill_dev_w1inf = std::max(report.fill_dev_w1inf, dev + slope);
    }

    double l_dev = 0.0, l_rate = 0.0;
    for (const auto& s : history.interface_series) {
        l_dev = std::max(l_dev, std::abs(s.position - eq.position));
        l_rate = std::max(l_rate, std::abs(interface_velocity(
                                      ctx.params, s.position,
                                      ctx.signals.speed(s.t), s.fill)));
    }
    report.interface_dev_sup = l_dev;
    report.interface_dev_w1inf = l_dev + l_rate;

    report.moisture_pfz_sup_l2 = sup_l2(history.snapshots, &FieldSnapshot::moisture_pfz);
    report.temperature_pfz_sup_l2 =
        sup_l2(history.snapshots, &FieldSnapshot::temperature_pfz);
    report.moisture_ffz_sup_l2 = sup_l2(history.snapshots, &FieldSnapshot::moisture_ffz);
    report.temperature_ffz_sup_l2 =
        sup_l2(history.snapshots, &FieldSnapshot::temperature_ffz);

    const double t0 = ctx.state.start_time;
    const double m0 = l2_of_profile(ctx.data.moisture_pfz);
    const double min_norm = l2_of_signal(ctx.signals.inlet_moisture, t0, horizon);
    const double t0p = l2_of_profile(ctx.data.temperature_pfz);
    const double tin_norm = l2_of_signal(ctx.signals.inlet_temperature, t0, horizon);

    // L2(Q) norm of g_p over the solved lattice and L2(0,T) of g_f.
    double gp_sq = 0.0;
    if (history.snapshots.size() >= 2) {
        for (std::size_t si = 0; si < history.snapshots.size(); ++si) {
            const auto& snap = history.snapshots[si];
            std::vector<double> gp(snap.x.size());
            for (std::size_t i = 0; i < snap.x.size(); ++i) {
                gp[i] = heat_generation_pfz(ctx.params, ctx.signals.speed(snap.time),
                                            snap.fill[i]);
                gp[i] *= gp[i];
            }
            double wt;
            const auto& snaps = history.snapshots;
            if (si == 0) {
                wt = 0.5 * (snaps[1].time - snaps[0].time);
            } else if (si + 1 == snaps.size()) {
                wt = 0.5 * (snaps[si].time - snaps[si - 1].time);
            } else {
                wt = 0.5 * (snaps[si + 1].time - snaps[si - 1].time);
            }
            gp_sq += wt * trapezoid(snap.x, gp);
        }
    }
    const double gp_norm = std::sqrt(gp_sq);
    double gf_sq = 0.0;
    {
        constexpr int kSamples = 2048;
        double prev = std::pow(heat_generation_ffz(ctx.params, ctx.signals.speed(t0)), 2);
        for (int i = 1; i <= kSamples; ++i) {
            const double t = t0 + (horizon - t0) * static_cast<double>(i) / kSamples;
            const double cur =
                std::pow(heat_generation_ffz(ctx.params, ctx.signals.speed(t)), 2);
            gf_sq += 0.5 * (prev + cur) * (horizon - t0) / kSamples;
            prev = cur;
        }
    }
    const double gf_norm = std::sqrt(gf_sq);

    report.moisture_pfz_data = m0 + min_norm;
    report.temperature_pfz_data = t0p + tin_norm + gp_norm;
    report.moisture_ffz_data = m0 + min_norm + l2_of_profile(ctx.data.moisture_ffz);
    report.temperature_ffz_data =
        t0p + tin_norm + l2_of_profile(ctx.data.temperature_ffz) + gf_norm;

    auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
    report.fill_ratio_to_eps = ratio(report.fill_dev_w1inf, data_eps);
    report.interface_ratio_to_eps = ratio(report.interface_dev_sup, data_eps);
    report.moisture_pfz_constant =
        ratio(report.moisture_pfz_sup_l2, report.moisture_pfz_data);
    report.temperature_pfz_constant =
        ratio(report.temperature_pfz_sup_l2, report.temperature_pfz_data);
    report.moisture_ffz_constant =
        ratio(report.moisture_ffz_sup_l2, report.moisture_ffz_data);
    report.temperature_ffz_constant =
        ratio(report.temperature_ffz_sup_l2, report.temperature_ffz_data);
    return report;
}

double h2_deviation_norm(const FieldSnapshot& snap, double center) {
    std::vector<double> dev(snap.x.size()), d1(snap.x.size()), d2(snap.x.size());
    for (std::size_t i = 0; i < snap.x.size(); ++i) {
        dev[i] = (snap.fill[i] - center) * (snap.fill[i] - center);
        d1[i] = snap.fill_dx[i] * snap.fill_dx[i];
        d2[i] = snap.fill_dxx[i] * snap.fill_dxx[i];
    }
    return std::sqrt(trapezoid(snap.x, dev) + trapezoid(snap.x, d1) +
                     trapezoid(snap.x, d2));
}

}  // namespace extrusim
