#ifndef EXTRUSIM_INTERFACE_SOLVER_HPP
#define EXTRUSIM_INTERFACE_SOLVER_HPP

#include <vector>

#include "extrusim/characteristics.hpp"
#include "extrusim/profile.hpp"
#include "extrusim/trajectory.hpp"

namespace extrusim {

/// Knobs of the fixed-point interface solver.
struct SolverConfig {
    double regime_radius = 0.1;      // epsilon_1, radius of the admissible ball
    double micro_step = 1.0 / 256.0; // h, window micro-step
    double fixpoint_tol = 1e-12;     // sup-norm Picard stop
    int max_picard = 40;
    double contraction_slack = 0.1;  // empirical ratios may reach 0.5*(1+slack)
    double safety = 0.9;             // factor on the analytic window bounds
    int grid_nodes = 513;            // reseeded profile resolution

    /// epsilon_1 must satisfy 0 < eps1 < min{l_e, L - l_e, f_pe, 1 - f_pe}
    /// and stay below N_e so the sampled norm box keeps positive speeds.
    void validate(const PhysicalParams& params, const EquilibriumPoint& eq) const;
};

/// Upper estimate of ||F||_{W^{1,inf}}: sum over F and its three partials of
/// the sup over the box (0, L) x (N_e - eps1, N_e + eps1) x (ball of radius
/// eps1 around f_pe), sampled on a 64^3 midpoint grid and inflated by 1.1.
double norm_F_bound(const PhysicalParams& params, const EquilibriumPoint& eq,
                    double eps1);

/// Window size rule:
///   delta = min(T_remaining, safety * min{T0_lb, (l_e - eps1)/||F||,
///               (L - l_e - eps1)/||F||, delta_contraction}),
/// where T0_lb = (l_e - eps1) / (zeta (N_e + eps1) + ||F||) bounds the
/// separatrix crossing time from below and delta_contraction is the largest
/// step keeping both explicit Lipschitz bounds of the map at or below 1/2.
double choose_window(const SolverConfig& config, const PhysicalParams& params,
                     const EquilibriumPoint& eq, double profile_deviation,
                     double t_remaining, double norm_bound);

/// Lipschitz bound of the second map component for a window of width delta
/// (the explicit constant of the contraction estimate; exposed for tests).
double map2_lipschitz_bound(const PhysicalParams& params, const EquilibriumPoint& eq,
                            double eps1, double profile_deviation, double norm_bound,
                            double delta);

/// One application of the contraction map: component 1 integrates the
/// interface ODE right-hand side, component 2 transports the initial profile
/// along the closed-form characteristic through (t, 1). Input and output are
/// sampled on the same nodes and anchored at (l0, f0(1)).
InterfaceTrajectory apply_map(const PhysicalParams& params, const EquilibriumPoint& eq,
                              const SolverConfig& config, const WindowState& state,
                              const InterfaceTrajectory& traj,
                              const OperatingSignals& signals);

/// Per-window convergence record.
struct WindowLog {
    double start_time = 0.0;
    double width = 0.0;
    int iterations = 0;
    std::vector<double> ratios;      // empirical contraction ratios
    double final_update = 0.0;       // sup-norm of the accepted update
    double profile_deviation = 0.0;  // W^{1,inf} deviation of the seed profile
};

/// Picard iteration from the constant initial guess until the sup-norm
/// update drops below fixpoint_tol.
InterfaceTrajectory solve_window(const PhysicalParams& params, const EquilibriumPoint& eq,
                                 const SolverConfig& config, const WindowState& state,
                                 const OperatingSignals& signals, double width,
                                 WindowLog* log = nullptr);

struct GlobalSolution {
    InterfaceTrajectory trajectory;
    std::vector<WindowLog> windows;
    WindowState initial_state;
    double norm_bound = 0.0;
};

/// Marches windows across [start, horizon]; each end-of-window profile is
/// resampled by the characteristic reconstruction and seeds the next window.
GlobalSolution solve_global(const PhysicalParams& params, const EquilibriumPoint& eq,
                            const SolverConfig& config, const WindowState& initial,
                            const OperatingSignals& signals, double horizon);

}  // namespace extrusim

#endif
