#ifndef EXTRUSIM_MODEL_CORE_HPP
#define EXTRUSIM_MODEL_CORE_HPP

#include <stdexcept>

#include "extrusim/params.hpp"
#include "extrusim/signals.hpp"

namespace extrusim {

/// The interface ODE degenerates as the filling ratio at the interface
/// approaches 1; values above 1 - kFillGuard are rejected.
inline constexpr double kFillGuard = 1e-4;

/// Thrown when the data leaves the small-perturbation regime the solver
/// relies on (degenerate denominators, nonpositive transport velocities,
/// inflow ratio outside (0,1), window selection failure).
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Flow rates and interface dynamics
// ---------------------------------------------------------------------------

/// Maximum pumping capacity theta(N) = rho0 * V_eff * N.
double pumping_capacity(const PhysicalParams& p, double speed);

/// Net forward mass flow rate at the die,
/// F_d(l, N) = K_d rho0 V_eff N (L - l) / (B rho0 + K_d (L - l)).
double net_flow_rate(const PhysicalParams& p, double position, double speed);

/// Pressure drop across the fully filled zone,
/// dP = eta rho0 V_eff N (L - l) / (B rho0 + K_d (L - l)),
/// so that F_d = (K_d / eta) dP.
double pressure_drop(const PhysicalParams& p, double position, double speed);

/// Interface velocity F(l, N, fp1) = (F_d - theta(N) fp1) / (rho0 S_eff (1 - fp1)).
/// Rejects fp1 >= 1 - kFillGuard (degenerate denominator).
double interface_velocity(const PhysicalParams& p, double position, double speed,
                          double fill_at_interface);

/// Partial derivatives of F with respect to (l, N, fp1).
struct InterfaceVelocityGradient {
    double d_position;
    double d_speed;
    double d_fill;
};
InterfaceVelocityGradient interface_velocity_gradient(const PhysicalParams& p,
                                                      double position, double speed,
                                                      double fill_at_interface);

/// Equilibrium filling ratio f_pe = F_d(l_e, N_e) / theta(N_e)
///                                = K_d (L - l_e) / (B rho0 + K_d (L - l_e)).
/// Independent of N_e; always in (0, 1) for l_e in (0, L).
double equilibrium_filling(const PhysicalParams& p, double position, double speed);

/// Bundles (l_e, N_e) with the induced f_pe after checking admissibility.
EquilibriumPoint make_equilibrium(const PhysicalParams& p, double position, double speed);

// ---------------------------------------------------------------------------
// Normalized transport velocities
// ---------------------------------------------------------------------------

/// PFZ velocity alpha_p(x) = (zeta N - x F(l, N, fp1)) / l on the normalized
/// domain. Throws RegimeError if nonpositive.
double velocity_pfz(const PhysicalParams& p, double x, double speed, double position,
                    double fill_at_interface);

/// FFZ velocity alpha_f(x) = (zeta F_d / (rho0 V_eff) + (x - 1) F) / (L - l).
/// Throws RegimeError if nonpositive.
double velocity_ffz(const PhysicalParams& p, double x, double speed, double position,
                    double fill_at_interface);

// ---------------------------------------------------------------------------
// Heat sources
// ---------------------------------------------------------------------------

/// Heat exchange coefficient C0 = -zeta S_ech alpha / (rho0 V_eff c0) < 0.
double heat_coupling_coeff(const PhysicalParams& p);

/// Viscous generation g_p = mu_p beta0 eta N^2 / (f_p rho0 V_eff c0).
/// Rejects f_p <= 0.
double heat_generation_pfz(const PhysicalParams& p, double speed, double fill);

/// Viscous generation g_f = mu_f beta0 eta N^2 / (rho0 V_eff c0).
double heat_generation_ffz(const PhysicalParams& p, double speed);

/// PFZ temperature source Omega_p = C0 (T_p - T_b(t,x)) + g_p.
double source_pfz(const PhysicalParams& p, double t, double x, double temperature,
                  double fill, const OperatingSignals& signals);

/// FFZ temperature source Omega_f = C0 (T_f - T_b(t,x)) + g_f.
double source_ffz(const PhysicalParams& p, double t, double x, double temperature,
                  const OperatingSignals& signals);

// ---------------------------------------------------------------------------
// Inflow data
// ---------------------------------------------------------------------------

/// Inlet filling ratio f_p(t, 0) = F_in(t) / theta(N(t)). Must lie in (0, 1);
/// values outside trip a RegimeError.
double inlet_filling(const PhysicalParams& p, const OperatingSignals& signals, double t);

/// Same ratio without the (0,1) range check, for validation reporting.
double inlet_filling_unchecked(const PhysicalParams& p, const OperatingSignals& signals,
                               double t);

/// d/dt of the inlet filling ratio, using one-sided signal slopes.
double inlet_filling_slope(const PhysicalParams& p, const OperatingSignals& signals,
                           double t);

/// d2/dt2 of the inlet filling ratio between breakpoints. With piecewise
/// linear F_in and N this is -2 N' r' / N.
double inlet_filling_curvature(const PhysicalParams& p, const OperatingSignals& signals,
                               double t);

}  // namespace extrusim

#endif
