#include "extrusim/interface_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "extrusim/transport_solver.hpp"

namespace extrusim {

void SolverConfig::validate(const PhysicalParams& params,
                            const EquilibriumPoint& eq) const {
    const double cap = std::min(std::min(eq.position, params.length - eq.position),
                                std::min(eq.filling, 1.0 - eq.filling));
    if (!(regime_radius > 0.0) || !(regime_radius < cap)) {
        throw std::invalid_argument(
            "SolverConfig: regime_radius must satisfy 0 < eps1 < min{l_e, L-l_e, "
            "f_pe, 1-f_pe} = " +
            std::to_string(cap));
    }
    if (!(regime_radius < eq.speed)) {
        throw std::invalid_argument("SolverConfig: regime_radius must stay below N_e");
    }
    if (!(micro_step > 0.0)) throw std::invalid_argument("SolverConfig: micro_step <= 0");
    if (!(fixpoint_tol > 0.0))
        throw std::invalid_argument("SolverConfig: fixpoint_tol <= 0");
    if (max_picard < 1) throw std::invalid_argument("SolverConfig: max_picard < 1");
    if (!(safety > 0.0) || !(safety <= 1.0))
        throw std::invalid_argument("SolverConfig: safety must be in (0, 1]");
    if (grid_nodes < 3) throw std::invalid_argument("SolverConfig: grid_nodes < 3");
}

double norm_F_bound(const PhysicalParams& params, const EquilibriumPoint& eq,
                    double eps1) {
    constexpr int kSamples = 64;
    const double l_lo = 0.0, l_hi = params.length;
    const double n_lo = eq.speed - eps1, n_hi = eq.speed + eps1;
    const double f_lo = std::max(kFillGuard, eq.filling - eps1);
    const double f_hi = std::min(1.0 - kFillGuard, eq.filling + eps1);
    if (!(n_lo > 0.0) || !(f_lo < f_hi)) {
        throw std::invalid_argument("norm_F_bound: degenerate sample box");
    }
    auto midpoint = [](double lo, double hi, int i) {
        return lo + (hi - lo) * (static_cast<double>(i) + 0.5) / kSamples;
    };
    double sup_value = 0.0, sup_dl = 0.0, sup_dn = 0.0, sup_df = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const double l = midpoint(l_lo, l_hi, i);
        for (int j = 0; j < kSamples; ++j) {
            const double n = midpoint(n_lo, n_hi, j);
            for (int k = 0; k < kSamples; ++k) {
                const double f = midpoint(f_lo, f_hi, k);
                sup_value = std::max(sup_value,
                                     std::abs(interface_velocity(params, l, n, f)));
                const auto g = interface_velocity_gradient(params, l, n, f);
                sup_dl = std::max(sup_dl, std::abs(g.d_position));
                sup_dn = std::max(sup_dn, std::abs(g.d_speed));
                sup_df = std::max(sup_df, std::abs(g.d_fill));
            }
        }
    }
    return 1.1 * (sup_value + sup_dl + sup_dn + sup_df);
}

double map2_lipschitz_bound(const PhysicalParams& params, const EquilibriumPoint& eq,
                            double eps1, double profile_deviation, double norm_bound,
                            double delta) {
    const double margin = eq.position - eps1;  // l_e - eps1 > 0
    const double speed_cap = params.pitch * (eq.speed + eps1);
    const double growth = std::exp(delta * norm_bound / margin);
    const double bracket =
        delta * norm_bound * (1.0 + delta * speed_cap / margin) *
            (1.0 / margin + 1.0 / (margin * margin)) +
        delta * speed_cap / (margin * margin);
    return profile_deviation * growth * bracket;
}

double choose_window(const SolverConfig& config, const PhysicalParams& params,
                     const EquilibriumPoint& eq, double profile_deviation,
                     double t_remaining, double norm_bound) {
    if (!(t_remaining > 0.0)) {
        throw RegimeError("choose_window: nonpositive remaining horizon");
    }
    const double eps1 = config.regime_radius;
    const double margin_lo = eq.position - eps1;
    const double margin_hi = params.length - eq.position - eps1;
    // Lower bound on the separatrix crossing time: the transport speed on the
    // unit interval is at most (zeta (N_e + eps1) + ||F||) / (l_e - eps1).
    const double t0_lower =
        margin_lo / (params.pitch * (eq.speed + eps1) + norm_bound);
    double delta = std::min(t0_lower, std::min(margin_lo, margin_hi) / norm_bound);
    // Contraction of the first component: delta ||F|| <= 1/2.
    delta = std::min(delta, 0.5 / norm_bound);
    // Contraction of the second component: bisect the explicit bound to 1/2.
    if (profile_deviation > 0.0 &&
        map2_lipschitz_bound(params, eq, eps1, profile_deviation, norm_bound, delta) >
            0.5) {
        double lo = 0.0, hi = delta;
        for (int it = 0; it < 200 && (hi - lo) > 1e-14 * delta; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (map2_lipschitz_bound(params, eq, eps1, profile_deviation, norm_bound,
                                     mid) > 0.5) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        delta = lo;
    }
    delta *= config.safety;
    if (!(delta > 0.0)) {
        throw RegimeError("choose_window: window size collapsed to zero");
    }
    return std::min(delta, t_remaining);
}

InterfaceTrajectory apply_map(const PhysicalParams& params, const EquilibriumPoint& eq,
                              const SolverConfig& config, const WindowState& state,
                              const InterfaceTrajectory& traj,
                              const OperatingSignals& signals) {
    const auto& ts = traj.times();
    const std::size_t n = ts.size();
    if (std::abs(ts.front() - state.start_time) > 1e-12) {
        throw std::invalid_argument("apply_map: trajectory does not start at the window");
    }
    const double anchor_fill = state.fill_profile.values().back();
    if (std::abs(traj.positions().front() - state.interface_position) > 1e-9 ||
        std::abs(traj.fills().front() - anchor_fill) > 1e-9) {
        throw std::invalid_argument("apply_map: trajectory not anchored at (l0, f0(1))");
    }
    if (traj.sup_distance_to(eq.position, eq.filling) > config.regime_radius + 1e-12) {
        throw std::invalid_argument("apply_map: input leaves the admissible ball");
    }

    // Shared node quantities.
    std::vector<double> drift(n), drift_over_l(n), speed_over_l(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double l = traj.positions()[k];
        const double fp1 = traj.fills()[k];
        const double sp = signals.speed(ts[k]);
        drift[k] = interface_velocity(params, l, sp, fp1);
        drift_over_l[k] = drift[k] / l;
        speed_over_l[k] = params.pitch * sp / l;
    }

    std::vector<double> positions(n), fills(n);
    positions[0] = state.interface_position;
    fills[0] = anchor_fill;

    // Component 1: l0 + int_0^t F, cumulative trapezoid.
    for (std::size_t k = 1; k < n; ++k) {
        positions[k] = positions[k - 1] +
                       0.5 * (drift[k - 1] + drift[k]) * (ts[k] - ts[k - 1]);
    }

    // Component 2: f0(xi(t_w; t_k, 1)) through the closed form, with the
    // cumulative growth A_k = int F/l and outer integral of (zeta N / l) e^A.
    std::vector<double> growth(n);
    growth[0] = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        growth[k] = growth[k - 1] +
                    0.5 * (drift_over_l[k - 1] + drift_over_l[k]) * (ts[k] - ts[k - 1]);
    }
    double outer = 0.0;
    double prev_integrand = speed_over_l[0] * std::exp(growth[0]);
    for (std::size_t k = 1; k < n; ++k) {
        const double cur_integrand = speed_over_l[k] * std::exp(growth[k]);
        outer += 0.5 * (prev_integrand + cur_integrand) * (ts[k] - ts[k - 1]);
        prev_integrand = cur_integrand;
        const double xi = std::exp(growth[k]) - outer;
        fills[k] = state.fill_profile.value(std::clamp(xi, 0.0, 1.0));
    }

    InterfaceTrajectory out(std::vector<double>(ts), std::move(positions),
                            std::move(fills));
    if (out.sup_distance_to(eq.position, eq.filling) > config.regime_radius) {
        throw RegimeError("apply_map: output leaves the admissible ball (radius " +
                          std::to_string(config.regime_radius) + ")");
    }
    return out;
}

InterfaceTrajectory solve_window(const PhysicalParams& params, const EquilibriumPoint& eq,
                                 const SolverConfig& config, const WindowState& state,
                                 const OperatingSignals& signals, double width,
                                 WindowLog* log) {
    if (!(width > 0.0)) throw std::invalid_argument("solve_window: width <= 0");
    const double anchor_gap =
        std::max(std::abs(state.interface_position - eq.position),
                 std::abs(state.fill_profile.values().back() - eq.filling));
    if (anchor_gap > config.regime_radius) {
        throw RegimeError("solve_window: window data leaves the admissible ball "
                          "(deviation " +
                          std::to_string(anchor_gap) + " > radius " +
                          std::to_string(config.regime_radius) + ")");
    }
    const double t0 = state.start_time;
    const double t1 = t0 + width;
    const std::size_t nodes =
        1 + std::max<std::size_t>(
                1, static_cast<std::size_t>(std::ceil(width / config.micro_step - 1e-12)));
    InterfaceTrajectory current = InterfaceTrajectory::constant(
        t0, t1, nodes, state.interface_position, state.fill_profile.values().back());

    WindowLog record;
    record.start_time = t0;
    record.width = width;
    record.profile_deviation = state.fill_profile.w1inf_distance_to(eq.filling);

    double prev_update = -1.0;
    bool converged = false;
    for (int it = 1; it <= config.max_picard; ++it) {
        InterfaceTrajectory next = apply_map(params, eq, config, state, current, signals);
        const double update = next.sup_distance(current);
        if (prev_update > std::max(10.0 * config.fixpoint_tol, 1e-14)) {
            record.ratios.push_back(update / prev_update);
        }
        current = std::move(next);
        record.iterations = it;
        record.final_update = update;
        if (update < config.fixpoint_tol) {
            converged = true;
            break;
        }
        prev_update = update;
    }
    if (!converged) {
        throw RegimeError("solve_window: Picard did not converge in " +
                          std::to_string(config.max_picard) + " iterations (last update " +
                          std::to_string(record.final_update) + ")");
    }
    if (log) *log = record;
    return current;
}

GlobalSolution solve_global(const PhysicalParams& params, const EquilibriumPoint& eq,
                            const SolverConfig& config, const WindowState& initial,
                            const OperatingSignals& signals, double horizon) {
    params.validate();
    config.validate(params, eq);
    if (!(horizon > initial.start_time)) {
        throw std::invalid_argument("solve_global: horizon before start time");
    }
    // Compatibility of inlet and initial data at the starting corner.
    const double corner_gap = std::abs(
        initial.fill_profile.values().front() -
        inlet_filling(params, signals, initial.start_time));
    if (corner_gap > 1e-6) {
        throw RegimeError("solve_global: inlet/initial compatibility violated (gap " +
                          std::to_string(corner_gap) + ")");
    }

    GlobalSolution solution;
    solution.initial_state = initial;
    solution.norm_bound = norm_F_bound(params, eq, config.regime_radius);

    WindowState state = initial;
    const double tiny = 1e-12 * std::max(1.0, horizon);
    std::size_t window_index = 0;
    while (state.start_time < horizon - tiny) {
        const double remaining = horizon - state.start_time;
        const double deviation = state.fill_profile.w1inf_distance_to(eq.filling);
        double width;
        try {
            width = choose_window(config, params, eq, deviation, remaining,
                                  solution.norm_bound);
        } catch (const RegimeError& e) {
            throw RegimeError("solve_global: window " + std::to_string(window_index) +
                              ": " + e.what());
        }
        const double t_end =
            (width >= remaining - tiny) ? horizon : state.start_time + width;

        WindowLog log;
        InterfaceTrajectory window_traj;
        try {
            window_traj = solve_window(params, eq, config, state, signals,
                                       t_end - state.start_time, &log);
        } catch (const RegimeError& e) {
            throw RegimeError("solve_global: window " + std::to_string(window_index) +
                              " starting at t=" + std::to_string(state.start_time) +
                              ": " + e.what());
        }
        solution.windows.push_back(log);
        if (window_index == 0) {
            solution.trajectory = window_traj;
        } else {
            solution.trajectory.append(window_traj);
        }
        state = resample_window_end(window_traj, signals, params, state, t_end,
                                    config.grid_nodes);
        ++window_index;
    }
    return solution;
}

}  // namespace extrusim
