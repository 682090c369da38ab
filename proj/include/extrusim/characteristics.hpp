#ifndef EXTRUSIM_CHARACTERISTICS_HPP
#define EXTRUSIM_CHARACTERISTICS_HPP

#include <optional>
#include <vector>

#include "extrusim/model_core.hpp"
#include "extrusim/trajectory.hpp"

namespace extrusim {

enum class Zone { pfz, ffz };

/// Where a backward characteristic leaves the normalized domain: either on
/// the initial line s = s_min at position beta, or on the inflow boundary
/// x = 0 at time tau.
struct Foot {
    enum class Kind { initial, boundary };
    Kind kind = Kind::initial;
    double location = 0.0;  // beta in [0,1] or tau in [s_min, t]

    bool is_initial() const { return kind == Kind::initial; }
    bool is_boundary() const { return kind == Kind::boundary; }
};

/// Backward characteristic through (t, x) sampled at the trace steps,
/// ascending in s from the foot to t.
struct TracedPath {
    Foot foot;
    std::vector<double> s;
    std::vector<double> xi;
};

/// Transport velocity of a zone evaluated on the interpolated trajectory.
/// Raw formula, no positivity check (RK4 stages may probe slightly outside
/// the domain).
double zone_velocity(Zone zone, const InterfaceTrajectory& traj,
                     const OperatingSignals& signals, const PhysicalParams& params,
                     double s, double xi);

/// Trapezoid quadrature of F(l(s), N(s), fp1(s)) / l(s) over [s, t] on the
/// trajectory micro-grid.
double flow_integral(const InterfaceTrajectory& traj, const OperatingSignals& signals,
                     const PhysicalParams& params, double s, double t);

/// Closed-form PFZ characteristic through (t, 1):
///   xi(s; t, 1) = e^{int_s^t F/l} - int_s^t (zeta N / l) e^{int_s^sigma F/l} dsigma,
/// with composite trapezoid quadrature on the micro-grid.
double xi_at_unit_start(const InterfaceTrajectory& traj, const OperatingSignals& signals,
                        const PhysicalParams& params, double s, double t);

/// Traces the backward characteristic through (t, x) with classical RK4 on
/// the trajectory micro-grid (substeps > 1 refines each micro-interval).
/// The inflow crossing is located by bisection on the last step. A path
/// landing exactly on the corner (s_min, 0) counts as InitialFoot(0).
Foot trace_foot(Zone zone, const InterfaceTrajectory& traj,
                const OperatingSignals& signals, const PhysicalParams& params, double t,
                double x, double s_min, int substeps = 1);

/// Same trace but keeps the sampled path for source quadrature.
TracedPath trace_path(Zone zone, const InterfaceTrajectory& traj,
                      const OperatingSignals& signals, const PhysicalParams& params,
                      double t, double x, double s_min, int substeps = 1);

/// Forward characteristic xi(t; s_min, 0) through the domain corner: the
/// separatrix between boundary-determined and initial-data-determined points.
double separatrix_position(const InterfaceTrajectory& traj,
                           const OperatingSignals& signals, const PhysicalParams& params,
                           double t, double s_min, int substeps = 1);

/// First time the separatrix reaches x = 1, or nullopt if beyond the
/// trajectory window.
std::optional<double> separatrix_crossing_time(const InterfaceTrajectory& traj,
                                               const OperatingSignals& signals,
                                               const PhysicalParams& params, double s_min,
                                               int substeps = 1);

/// Analytic partial derivatives of the PFZ foot maps:
///   dbeta/dx = e^{int_{s_min}^t F/l},          dbeta/dt = -alpha_p(x, t) dbeta/dx,
///   dtau/dx  = -(l(tau)/(zeta N(tau))) e^{int_tau^t F/l},
///   dtau/dt  =  (l(tau)/(zeta N(tau))) alpha_p(x, t) e^{int_tau^t F/l}.
struct FootSensitivity {
    Foot foot;
    double d_dt = 0.0;
    double d_dx = 0.0;
};
FootSensitivity foot_derivatives(const InterfaceTrajectory& traj,
                                 const OperatingSignals& signals,
                                 const PhysicalParams& params, double t, double x,
                                 double s_min);

/// Same formulas when the foot is already known (skips the trace).
FootSensitivity foot_sensitivity(const InterfaceTrajectory& traj,
                                 const OperatingSignals& signals,
                                 const PhysicalParams& params, double t, double x,
                                 double s_min, const Foot& foot);

/// d/dx of dtau/dx (needed for second space derivatives of reconstructed
/// fields through the boundary branch).
double boundary_foot_second_derivative(const InterfaceTrajectory& traj,
                                       const OperatingSignals& signals,
                                       const PhysicalParams& params, double t, double x,
                                       double s_min);

/// Same from an already-computed boundary-foot sensitivity (skips the trace).
double boundary_foot_curvature(const InterfaceTrajectory& traj,
                               const OperatingSignals& signals,
                               const PhysicalParams& params, double t,
                               const FootSensitivity& sens);

}  // namespace extrusim

#endif
