#ifndef EXTRUSIM_PARAMS_HPP
#define EXTRUSIM_PARAMS_HPP

#include <string>
#include <vector>

namespace extrusim {

/// Constant physical coefficients of the extruder model.
/// Units are consistent but otherwise arbitrary; the default scenarios use
/// a nondimensional set chosen for numerical convenience.
struct PhysicalParams {
    double length = 1.0;            // L, extruder length
    double pitch = 0.1;             // zeta, screw pitch
    double die_coeff = 1.0;         // K_d, die geometric coefficient
    double pressure_coeff = 1.0;    // B, pressure-flow geometric coefficient
    double density = 1.0;           // rho0, melt density
    double effective_volume = 0.1;  // V_eff, volume per pitch
    double effective_area = 1.0;    // S_eff, cross-section area
    double exchange_area = 1.0;     // S_ech, melt-barrel exchange area
    double heat_exchange = 1.0;     // alpha, heat exchange coefficient
    double heat_capacity = 1.0;     // c0, specific heat capacity
    double viscosity = 1.0;         // eta, melt viscosity (constant)
    double visc_heat_pfz = 1.0;     // mu_p
    double visc_heat_ffz = 1.0;     // mu_f
    double visc_heat_coeff = 0.02;  // beta0
    double ambient_pressure = 0.0;  // P0, diagnostic only

    /// All coefficients except the ambient pressure must be strictly positive.
    /// Returns a list of violation messages, empty when valid.
    std::vector<std::string> validation_errors() const;

    /// Throws std::invalid_argument listing every violation.
    void validate() const;

    /// Whether V_eff = zeta * S_eff holds to a relative tolerance.
    /// Only under this geometric relation does the exact global mass balance
    /// dm/dt = F_in - F_d hold.
    bool is_conserving(double rel_tol = 1e-12) const;
};

/// A constant equilibrium (l_e, N_e, f_pe) of the interface ODE.
struct EquilibriumPoint {
    double position = 0.5;  // l_e in (0, L)
    double speed = 1.0;     // N_e > 0
    double filling = 0.0;   // f_pe in (0, 1)
};

}  // namespace extrusim

#endif
