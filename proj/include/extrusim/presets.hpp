#ifndef EXTRUSIM_PRESETS_HPP
#define EXTRUSIM_PRESETS_HPP

#include "extrusim/scenario.hpp"

namespace extrusim {

/// Nondimensional parameter set shared by the bundled scenarios:
/// L = 1, zeta = 0.1, V_eff = zeta * S_eff (conserving geometry),
/// equilibrium at l_e = 0.5, N_e = 1 with f_pe = 1/3.
PhysicalParams standard_params();

/// Exact equilibrium forcing: constant N = N_e, F_in = theta(N_e) f_pe,
/// f_p0 = f_pe, l0 = l_e. The interface and filling ratio are stationary;
/// moisture and temperature data still vary.
Scenario make_equilibrium_scenario(double horizon = 10.0);

/// Fully stationary configuration: equilibrium forcing plus constant
/// moisture and temperatures pinned at the relaxation fixed point, with the
/// FFZ viscous-heat factor tuned so both zones share that fixed point.
Scenario make_stationary_scenario(double horizon = 10.0);

/// Size-eps perturbations of N, F_in, f_p0 and l0 around the equilibrium,
/// flat near t = 0 so the corner compatibility holds exactly.
Scenario make_perturbed_scenario(double eps, double horizon = 10.0);

/// H2-class variant: the inlet ratio is held constant (feed rate exactly
/// proportional to the screw speed), and the initial profile has vanishing
/// slope and curvature at the inlet, so the once- and twice-differentiated
/// corner compatibilities hold as well.
Scenario make_h2_scenario(double eps, double horizon = 10.0);

}  // namespace extrusim

#endif
