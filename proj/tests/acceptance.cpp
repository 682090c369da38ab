// Acceptance suite: one criterion per invocation (1-9), or "all".
// Each criterion prints a single PASS/FAIL line; the exit code is the number
// of failed criteria.
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "extrusim/interface_solver.hpp"
#include "extrusim/model_core.hpp"
#include "extrusim/presets.hpp"
#include "extrusim/run.hpp"
#include "extrusim/transport_solver.hpp"

using namespace extrusim;

namespace {

struct SolvedScenario {
    Scenario scenario;
    EquilibriumPoint eq;
    WindowState state;
    TransportData data;
    GlobalSolution solution;

    explicit SolvedScenario(Scenario s) : scenario(std::move(s)) {
        eq = scenario.equilibrium();
        state = scenario.initial_window_state();
        data = scenario.transport_data();
        solution = solve_global(scenario.params, eq, scenario.solver, state,
                                scenario.signals, scenario.horizon);
    }
    TransportContext ctx() const {
        return TransportContext{solution.trajectory, scenario.signals, scenario.params,
                                state, data};
    }
};

bool check(bool ok, const char* label, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", label, detail.c_str());
    return ok;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

// --------------------------------------------------------------------------
// 1. Equilibrium stationarity over T = 10 at 1e-10.
// --------------------------------------------------------------------------
bool criterion_1() {
    const SolvedScenario run(make_equilibrium_scenario());
    double l_dev = 0.0;
    for (double l : run.solution.trajectory.positions()) {
        l_dev = std::max(l_dev, std::abs(l - run.eq.position));
    }
    const auto ctx = run.ctx();
    double fill_dev = 0.0;
    for (double t : run.scenario.output_times) {
        for (int i = 0; i <= 512; ++i) {
            const double x = i / 512.0;
            fill_dev = std::max(
                fill_dev, std::abs(reconstruct_fp(ctx.traj, ctx.signals, ctx.params,
                                                  ctx.state, t, x) -
                                   run.eq.filling));
        }
    }
    const bool ok = l_dev <= 1e-10 && fill_dev <= 1e-10;
    return check(ok, "criterion 1 (equilibrium stationarity)",
                 fmt("sup|l - l_e| = %.3e, sup|f_p - f_pe| = %.3e (tol 1e-10)", l_dev,
                     fill_dev));
}

// --------------------------------------------------------------------------
// 2. Contraction certificate on the standard perturbed scenario.
// --------------------------------------------------------------------------
bool criterion_2() {
    const SolvedScenario run(make_perturbed_scenario(0.02));
    double worst_ratio = 0.0;
    int worst_iterations = 0;
    for (const auto& w : run.solution.windows) {
        worst_iterations = std::max(worst_iterations, w.iterations);
        for (double r : w.ratios) worst_ratio = std::max(worst_ratio, r);
    }
    const bool ok = worst_ratio <= 0.55 && worst_iterations <= 40;
    return check(ok, "criterion 2 (contraction certificate)",
                 fmt("%zu windows, max ratio %.4f (tol 0.55), max iterations %d "
                     "(tol 40)",
                     run.solution.windows.size(), worst_ratio, worst_iterations));
}

// --------------------------------------------------------------------------
// 3. Oracle equivalence at dx = 1/400 with first-order shrink at 1/800.
// --------------------------------------------------------------------------
bool criterion_3() {
    const Scenario scenario = make_perturbed_scenario(0.02);
    const auto chr = run_characteristic(scenario);
    const auto coarse = compare_histories(chr.history, run_fv(scenario, 400));
    const auto fine = compare_histories(chr.history, run_fv(scenario, 800));

    const double fields_coarse[] = {coarse.fill_l1, coarse.moisture_pfz_l1,
                                    coarse.temperature_pfz_l1, coarse.moisture_ffz_l1,
                                    coarse.temperature_ffz_l1};
    const double fields_fine[] = {fine.fill_l1, fine.moisture_pfz_l1,
                                  fine.temperature_pfz_l1, fine.moisture_ffz_l1,
                                  fine.temperature_ffz_l1};
    bool ok = coarse.interface_linf <= 0.02;
    double worst_err = coarse.interface_linf, worst_ratio = 1e9, best_ratio = 0.0;
    for (int i = 0; i < 5; ++i) {
        ok = ok && fields_coarse[i] <= 0.02;
        worst_err = std::max(worst_err, fields_coarse[i]);
        const double ratio = fields_coarse[i] / fields_fine[i];
        worst_ratio = std::min(worst_ratio, ratio);
        best_ratio = std::max(best_ratio, ratio);
        ok = ok && ratio >= 1.4 && ratio <= 2.9;
    }
    return check(ok, "criterion 3 (oracle equivalence)",
                 fmt("worst relative error %.4f (tol 0.02), shrink ratios in "
                     "[%.2f, %.2f] (band [1.4, 2.9])",
                     worst_err, worst_ratio, best_ratio));
}

// --------------------------------------------------------------------------
// 4. Deviation norms scale linearly under eps-halving.
// --------------------------------------------------------------------------
bool criterion_4() {
    auto deviations = [](double eps) {
        const SolvedScenario run(make_perturbed_scenario(eps));
        const auto ctx = run.ctx();
        const auto history =
            evaluate_history(ctx, run.scenario.output_times,
                             run.scenario.solver.grid_nodes, false);
        const auto norms = estimate_norms(ctx, history, run.eq, eps,
                                          run.scenario.horizon);
        return std::pair{norms.fill_dev_w1inf, norms.interface_dev_sup};
    };
    const auto [fill_full, l_full] = deviations(0.02);
    const auto [fill_half, l_half] = deviations(0.01);
    const double fill_ratio = fill_full / fill_half;
    const double l_ratio = l_full / l_half;
    const bool ok = fill_ratio >= 1.6 && fill_ratio <= 2.4 && l_ratio >= 1.6 &&
                    l_ratio <= 2.4;
    return check(ok, "criterion 4 (estimate scaling)",
                 fmt("||f_p - f_pe||_W ratio %.3f, sup|l - l_e| ratio %.3f "
                     "(band [1.6, 2.4])",
                     fill_ratio, l_ratio));
}

// --------------------------------------------------------------------------
// 5. Discrete mass balance on the conserving scenario.
// --------------------------------------------------------------------------
bool criterion_5() {
    auto imbalance = [](int grid_nodes, double micro_step, double mass_dt) {
        Scenario scenario = make_perturbed_scenario(0.02);
        scenario.solver.grid_nodes = grid_nodes;
        scenario.solver.micro_step = micro_step;
        const SolvedScenario run(std::move(scenario));
        const auto ctx = run.ctx();
        const int steps = static_cast<int>(std::round(10.0 / mass_dt));
        std::vector<double> mass(static_cast<std::size_t>(steps) + 1);
        for (int j = 0; j <= steps; ++j) {
            mass[static_cast<std::size_t>(j)] =
                total_mass(ctx, mass_dt * j, grid_nodes);
        }
        double worst = 0.0;
        for (int j = 1; j < steps; ++j) {
            const double t = mass_dt * j;
            const double rate =
                (mass[static_cast<std::size_t>(j) + 1] -
                 mass[static_cast<std::size_t>(j) - 1]) /
                (2.0 * mass_dt);
            const double net =
                run.scenario.signals.feed_rate(t) -
                net_flow_rate(run.scenario.params, run.solution.trajectory.position(t),
                              run.scenario.signals.speed(t));
            worst = std::max(worst, std::abs(rate - net));
        }
        return worst;
    };
    const double coarse = imbalance(513, 1.0 / 256.0, 0.25);
    const double fine = imbalance(1025, 1.0 / 512.0, 0.125);
    const bool ok = coarse <= 1e-3 && fine <= 0.6 * coarse;
    return check(ok, "criterion 5 (mass balance)",
                 fmt("imbalance %.3e (tol 1e-3), refined %.3e (<= 0.6x)", coarse,
                     fine));
}

// --------------------------------------------------------------------------
// 6. Weak residual of the solved M_p under the polynomial test family.
// --------------------------------------------------------------------------
double moisture_family_residual(const SolvedScenario& run, double tau_end, int nt,
                                int nx) {
    const auto ctx = run.ctx();
    FieldLattice u;
    u.times.resize(static_cast<std::size_t>(nt));
    u.xs.resize(static_cast<std::size_t>(nx));
    for (int i = 0; i < nt; ++i) {
        u.times[static_cast<std::size_t>(i)] = tau_end * i / (nt - 1.0);
    }
    for (int j = 0; j < nx; ++j) u.xs[static_cast<std::size_t>(j)] = j / (nx - 1.0);
    u.values.resize(static_cast<std::size_t>(nt) * nx);
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < nx; ++j) {
            const auto foot = trace_foot(Zone::pfz, ctx.traj, ctx.signals, ctx.params,
                                         u.times[static_cast<std::size_t>(i)],
                                         u.xs[static_cast<std::size_t>(j)], 0.0);
            u.values[static_cast<std::size_t>(i) * nx + j] =
                foot.is_boundary() ? ctx.signals.inlet_moisture(foot.location)
                                   : ctx.data.moisture_pfz.value(foot.location);
        }
    }
    std::vector<double> u0(static_cast<std::size_t>(nx)), h(static_cast<std::size_t>(nt));
    for (int j = 0; j < nx; ++j) {
        u0[static_cast<std::size_t>(j)] =
            ctx.data.moisture_pfz.value(u.xs[static_cast<std::size_t>(j)]);
    }
    for (int i = 0; i < nt; ++i) {
        h[static_cast<std::size_t>(i)] =
            ctx.signals.inlet_moisture(u.times[static_cast<std::size_t>(i)]);
    }
    const auto& traj = ctx.traj;
    const auto& signals = ctx.signals;
    const auto& params = ctx.params;
    auto a = [&](double t, double x) {
        return zone_velocity(Zone::pfz, traj, signals, params, t, x);
    };
    auto axb = [&](double t, double) {
        return -interface_velocity(params, traj.position(t), signals.speed(t),
                                   traj.fill(t)) /
               traj.position(t);
    };
    auto c = [](double, double) { return 0.0; };
    double worst = 0.0;
    for (const auto& test : polynomial_test_family(tau_end)) {
        worst = std::max(worst, std::abs(weak_residual(u, a, axb, c, u0, h, test)));
    }
    return worst;
}

bool criterion_6() {
    const double tau_end = 2.5;
    Scenario coarse_scn = make_perturbed_scenario(0.02);
    const SolvedScenario coarse_run(std::move(coarse_scn));
    const double coarse = moisture_family_residual(coarse_run, tau_end, 129, 513);

    Scenario fine_scn = make_perturbed_scenario(0.02);
    fine_scn.solver.micro_step /= 2.0;
    const SolvedScenario fine_run(std::move(fine_scn));
    const double fine = moisture_family_residual(fine_run, tau_end, 257, 1025);

    const double ratio = coarse / fine;
    const bool ok = coarse <= 1e-3 && ratio >= 2.5 && ratio <= 6.0;
    return check(ok, "criterion 6 (weak residual)",
                 fmt("family max residual %.3e at n=513 (tol 1e-3), reduction "
                     "%.2fx (band [2.5, 6])",
                     coarse, ratio));
}

// --------------------------------------------------------------------------
// 7. Analytic foot derivatives against finite differences, 200 samples.
// --------------------------------------------------------------------------
bool criterion_7() {
    const SolvedScenario run(make_perturbed_scenario(0.02));
    const auto& traj = run.solution.trajectory;
    const auto& signals = run.scenario.signals;
    const auto& params = run.scenario.params;

    std::mt19937 rng(20240808);
    std::uniform_real_distribution<double> pick_t(0.05, 9.95);
    std::uniform_real_distribution<double> pick_x(0.02, 0.98);
    const double d = 1e-4;
    int accepted = 0;
    double worst = 0.0;
    while (accepted < 200) {
        const double t = pick_t(rng);
        const double x = pick_x(rng);
        const auto center = trace_foot(Zone::pfz, traj, signals, params, t, x, 0.0);
        const auto xp = trace_foot(Zone::pfz, traj, signals, params, t, x + d, 0.0);
        const auto xm = trace_foot(Zone::pfz, traj, signals, params, t, x - d, 0.0);
        const auto tp = trace_foot(Zone::pfz, traj, signals, params, t + d, x, 0.0);
        const auto tm = trace_foot(Zone::pfz, traj, signals, params, t - d, x, 0.0);
        if (xp.kind != center.kind || xm.kind != center.kind ||
            tp.kind != center.kind || tm.kind != center.kind) {
            continue;  // stencil straddles the separatrix
        }
        const auto sens = foot_derivatives(traj, signals, params, t, x, 0.0);
        const double fd_x = (xp.location - xm.location) / (2.0 * d);
        const double fd_t = (tp.location - tm.location) / (2.0 * d);
        worst = std::max(worst, std::abs(sens.d_dx - fd_x) / std::abs(fd_x));
        worst = std::max(worst, std::abs(sens.d_dt - fd_t) / std::abs(fd_t));
        ++accepted;
    }
    const bool ok = worst <= 1e-5;
    return check(ok, "criterion 7 (foot-derivative fidelity)",
                 fmt("200 samples, worst relative mismatch %.3e (tol 1e-5)", worst));
}

// --------------------------------------------------------------------------
// 8. H2-class data: bounded discrete H2 norm, linear eps-scaling, and
//    second-order residual decay of the twice-differentiated system.
// --------------------------------------------------------------------------
struct DifferentiatedLattices {
    FieldLattice first;
    FieldLattice second;
    std::vector<double> first_u0, second_u0;
    std::vector<double> first_h, second_h;
};

DifferentiatedLattices build_differentiated(const SolvedScenario& run, double tau_end,
                                            int nt, int nx) {
    const auto ctx = run.ctx();
    DifferentiatedLattices out;
    auto& u1 = out.first;
    auto& u2 = out.second;
    u1.times.resize(static_cast<std::size_t>(nt));
    u1.xs.resize(static_cast<std::size_t>(nx));
    for (int i = 0; i < nt; ++i) {
        u1.times[static_cast<std::size_t>(i)] = tau_end * i / (nt - 1.0);
    }
    for (int j = 0; j < nx; ++j) u1.xs[static_cast<std::size_t>(j)] = j / (nx - 1.0);
    u2.times = u1.times;
    u2.xs = u1.xs;
    u1.values.resize(static_cast<std::size_t>(nt) * nx);
    u2.values.resize(static_cast<std::size_t>(nt) * nx);
    for (int i = 0; i < nt; ++i) {
        for (int j = 0; j < nx; ++j) {
            const auto v = reconstruct_fp_derivatives(
                ctx.traj, ctx.signals, ctx.params, ctx.state,
                u1.times[static_cast<std::size_t>(i)],
                u1.xs[static_cast<std::size_t>(j)]);
            u1.values[static_cast<std::size_t>(i) * nx + j] = v.d1;
            u2.values[static_cast<std::size_t>(i) * nx + j] = v.d2;
        }
    }
    out.first_u0.resize(static_cast<std::size_t>(nx));
    out.second_u0.resize(static_cast<std::size_t>(nx));
    for (int j = 0; j < nx; ++j) {
        const double x = u1.xs[static_cast<std::size_t>(j)];
        out.first_u0[static_cast<std::size_t>(j)] = ctx.state.fill_profile.slope(x);
        out.second_u0[static_cast<std::size_t>(j)] =
            ctx.state.fill_profile.curvature(x);
    }
    out.first_h.resize(static_cast<std::size_t>(nt));
    out.second_h.resize(static_cast<std::size_t>(nt));
    for (int i = 0; i < nt; ++i) {
        const double t = u1.times[static_cast<std::size_t>(i)];
        const double l = ctx.traj.position(t);
        const double speed = ctx.signals.speed(t);
        const double zn = ctx.params.pitch * speed;
        const double drift =
            interface_velocity(ctx.params, l, speed, ctx.traj.fill(t));
        const double r1 = inlet_filling_slope(ctx.params, ctx.signals, t);
        const double r2 = inlet_filling_curvature(ctx.params, ctx.signals, t);
        out.first_h[static_cast<std::size_t>(i)] = -l / zn * r1;
        // d/dt (l r' / (zeta N)) with l' = F and piecewise-constant N'
        const double inner = (drift * r1 + l * r2) / zn -
                             l * r1 * ctx.params.pitch *
                                 ctx.signals.speed.slope(t) / (zn * zn);
        out.second_h[static_cast<std::size_t>(i)] =
            -l / zn * (drift / zn * r1 - inner);
    }
    return out;
}

double differentiated_residual(const SolvedScenario& run,
                               const DifferentiatedLattices& lat, bool second) {
    const auto ctx = run.ctx();
    const auto& traj = ctx.traj;
    const auto& signals = ctx.signals;
    const auto& params = ctx.params;
    auto a = [&](double t, double x) {
        return zone_velocity(Zone::pfz, traj, signals, params, t, x);
    };
    // alpha_p_x = -F/l; first system has b = F/l, second b = 2F/l.
    auto axb_first = [](double, double) { return 0.0; };
    auto axb_second = [&](double t, double) {
        return interface_velocity(params, traj.position(t), signals.speed(t),
                                  traj.fill(t)) /
               traj.position(t);
    };
    auto c = [](double, double) { return 0.0; };
    const auto& u = second ? lat.second : lat.first;
    const auto& u0 = second ? lat.second_u0 : lat.first_u0;
    const auto& h = second ? lat.second_h : lat.first_h;
    double worst = 0.0;
    for (const auto& test : polynomial_test_family(u.times.back())) {
        if (second) {
            worst = std::max(worst,
                             std::abs(weak_residual(u, a, axb_second, c, u0, h, test)));
        } else {
            worst = std::max(worst,
                             std::abs(weak_residual(u, a, axb_first, c, u0, h, test)));
        }
    }
    return worst;
}

bool criterion_8() {
    const double tau_end = 3.0;
    const SolvedScenario run(make_h2_scenario(0.02));
    const auto ctx = run.ctx();
    const auto history =
        evaluate_history(ctx, run.scenario.output_times, 513, false);
    double sup_h2 = 0.0;
    for (const auto& snap : history.snapshots) {
        sup_h2 = std::max(sup_h2, h2_deviation_norm(snap, run.eq.filling));
    }

    const SolvedScenario half(make_h2_scenario(0.01));
    const auto half_ctx = half.ctx();
    const auto half_history =
        evaluate_history(half_ctx, half.scenario.output_times, 513, false);
    double sup_h2_half = 0.0;
    for (const auto& snap : half_history.snapshots) {
        sup_h2_half = std::max(sup_h2_half, h2_deviation_norm(snap, half.eq.filling));
    }
    const double scaling = sup_h2 / sup_h2_half;

    const auto lat_coarse = build_differentiated(run, tau_end, 65, 129);
    const double res1_coarse = differentiated_residual(run, lat_coarse, false);
    const double res2_coarse = differentiated_residual(run, lat_coarse, true);

    Scenario fine_scn = make_h2_scenario(0.02);
    fine_scn.solver.micro_step /= 2.0;
    const SolvedScenario fine_run(std::move(fine_scn));
    const auto lat_fine = build_differentiated(fine_run, tau_end, 129, 257);
    const double res1_fine = differentiated_residual(fine_run, lat_fine, false);
    const double res2_fine = differentiated_residual(fine_run, lat_fine, true);

    const double ratio1 = res1_coarse / res1_fine;
    const double ratio2 = res2_coarse / res2_fine;
    const bool ok = sup_h2 <= 1.0 && scaling >= 1.6 && scaling <= 2.4 &&
                    ratio1 >= 2.5 && ratio1 <= 6.0 && ratio2 >= 2.5 && ratio2 <= 6.0;
    return check(ok, "criterion 8 (H2-class check)",
                 fmt("sup H2 deviation %.3e (bound 1.0), eps-scaling %.2f "
                     "(band [1.6, 2.4]), residual decay %.2fx / %.2fx "
                     "(band [2.5, 6])",
                     sup_h2, scaling, ratio1, ratio2));
}

// --------------------------------------------------------------------------
// 9. Exact zone coupling at every output time.
// --------------------------------------------------------------------------
bool criterion_9() {
    const SolvedScenario run(make_perturbed_scenario(0.02));
    const auto ctx = run.ctx();
    double worst = 0.0;
    for (double t : run.scenario.output_times) {
        const auto pfz = solve_point_pfz(ctx, t, 1.0);
        const auto ffz = solve_point_ffz(ctx, t, 0.0);
        worst = std::max(worst, std::abs(ffz.moisture - pfz.moisture));
        worst = std::max(worst, std::abs(ffz.temperature - pfz.temperature));
    }
    const bool ok = worst == 0.0;
    return check(ok, "criterion 9 (zone coupling)",
                 fmt("max |M_f(t,0) - M_p(t,1)|, |T_f(t,0) - T_p(t,1)| = %.1e "
                     "(must be exactly 0)",
                     worst));
}

}  // namespace

int main(int argc, char** argv) {
    const std::string which = (argc > 1) ? argv[1] : "all";
    const std::vector<std::function<bool()>> criteria = {
        criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
        criterion_6, criterion_7, criterion_8, criterion_9};
    int failures = 0;
    try {
        if (which == "all") {
            for (const auto& c : criteria) {
                if (!c()) ++failures;
            }
        } else {
            const int index = std::atoi(which.c_str());
            if (index < 1 || index > static_cast<int>(criteria.size())) {
                std::fprintf(stderr, "usage: acceptance [1-9|all]\n");
                return 64;
            }
            if (!criteria[static_cast<std::size_t>(index - 1)]()) ++failures;
        }
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance run aborted: %s\n", e.what());
        return 1;
    }
    return failures;
}
