#ifndef EXTRUSIM_TRANSPORT_SOLVER_HPP
#define EXTRUSIM_TRANSPORT_SOLVER_HPP

#include <functional>
#include <vector>

#include "extrusim/characteristics.hpp"
#include "extrusim/profile.hpp"
#include "extrusim/trajectory.hpp"

namespace extrusim {

// ---------------------------------------------------------------------------
// Filling-ratio reconstruction
// ---------------------------------------------------------------------------

/// f_p(t, x) from the characteristic formula: inlet ratio at the boundary
/// foot, initial profile at the initial foot. Continuous across the
/// separatrix under the inlet/initial compatibility condition.
double reconstruct_fp(const InterfaceTrajectory& traj, const OperatingSignals& signals,
                      const PhysicalParams& params, const WindowState& state, double t,
                      double x);

struct FillPointValues {
    Foot foot;
    double value = 0.0;
    double d1 = 0.0;  // df_p/dx
    double d2 = 0.0;  // d2f_p/dx2
};

/// Value and first/second space derivatives by the chain rule through the
/// analytic foot derivatives. The second derivative through the initial
/// branch uses that dbeta/dx is x-independent; the boundary branch needs the
/// second boundary-foot derivative and d/dt, d2/dt2 of the inlet ratio.
FillPointValues reconstruct_fp_derivatives(const InterfaceTrajectory& traj,
                                           const OperatingSignals& signals,
                                           const PhysicalParams& params,
                                           const WindowState& state, double t, double x);

/// Samples f_p(t_end, .) on a uniform grid with exact chain-rule slopes; the
/// last node takes the trajectory's own fill value so window concatenation
/// stays anchored. Used to reseed the next solver window.
WindowState resample_window_end(const InterfaceTrajectory& traj,
                                const OperatingSignals& signals,
                                const PhysicalParams& params, const WindowState& state,
                                double t_end, int grid_nodes);

// ---------------------------------------------------------------------------
// Moisture and temperature
// ---------------------------------------------------------------------------

/// Initial profiles of the linear transport unknowns.
struct TransportData {
    SampledProfile moisture_pfz;      // M_p(0, .)
    SampledProfile temperature_pfz;   // T_p(0, .)
    SampledProfile moisture_ffz;      // M_f(0, .)
    SampledProfile temperature_ffz;   // T_f(0, .)
};

/// Everything a field evaluation needs.
struct TransportContext {
    const InterfaceTrajectory& traj;
    const OperatingSignals& signals;
    const PhysicalParams& params;
    const WindowState& state;  // global initial state (fill profile at t = 0)
    const TransportData& data;
};

/// PFZ point solve: one backward trace yields the filling ratio (constant
/// along the path), the moisture value, and the temperature by exact
/// integrating-factor treatment of the source along the traced path.
struct PfzPointValues {
    Foot foot;
    double fill = 0.0;
    double moisture = 0.0;
    double temperature = 0.0;
};
PfzPointValues solve_point_pfz(const TransportContext& ctx, double t, double x);

/// FFZ point solve; boundary feet chain into a PFZ solve at (tau, 1) for the
/// inflow values (zone coupling).
struct FfzPointValues {
    Foot foot;
    double moisture = 0.0;
    double temperature = 0.0;
};
FfzPointValues solve_point_ffz(const TransportContext& ctx, double t, double x);

/// Moisture fields at the requested output times on a uniform grid.
struct MoistureSlice {
    double time;
    std::vector<double> pfz;  // M_p
    std::vector<double> ffz;  // M_f
};
std::vector<MoistureSlice> solve_moisture(const TransportContext& ctx,
                                          const std::vector<double>& output_times,
                                          int grid_nodes);

/// Temperature fields at the requested output times on a uniform grid.
struct TemperatureSlice {
    double time;
    std::vector<double> pfz;  // T_p
    std::vector<double> ffz;  // T_f
};
std::vector<TemperatureSlice> solve_temperature(const TransportContext& ctx,
                                                const std::vector<double>& output_times,
                                                int grid_nodes);

// ---------------------------------------------------------------------------
// Assembled output
// ---------------------------------------------------------------------------

struct FieldSnapshot {
    double time = 0.0;
    std::vector<double> x;
    std::vector<double> fill;             // f_p
    std::vector<double> fill_dx;          // df_p/dx
    std::vector<double> fill_dxx;         // d2f_p/dx2
    std::vector<double> moisture_pfz;     // M_p
    std::vector<double> temperature_pfz;  // T_p
    std::vector<double> moisture_ffz;     // M_f
    std::vector<double> temperature_ffz;  // T_f
};

struct InterfaceSample {
    double t, position, fill, flow, pressure;  // t, l, fp1, F_d, dP
};

struct SolutionHistory {
    std::vector<InterfaceSample> interface_series;  // at trajectory nodes
    std::vector<FieldSnapshot> snapshots;           // at output times
    std::vector<double> mass_times;                 // conserving scenarios only
    std::vector<double> mass;
    std::vector<double> net_inflow;  // F_in - F_d at mass_times
};

SolutionHistory evaluate_history(const TransportContext& ctx,
                                 const std::vector<double>& output_times, int grid_nodes,
                                 bool with_mass_series, double mass_dt = 0.25);

/// Total material mass in normalized coordinates,
/// m(t) = rho0 S_eff (l(t) int_0^1 f_p dx + (L - l(t))).
double total_mass(const TransportContext& ctx, double t, int grid_nodes);

// ---------------------------------------------------------------------------
// Validation functionals
// ---------------------------------------------------------------------------

/// C1 test function vanishing at x = 1.
struct TestFunction {
    std::function<double(double, double)> phi;
    std::function<double(double, double)> phi_t;
    std::function<double(double, double)> phi_x;
};

/// Polynomial family phi_{jk}(t, x) = (t / t_scale)^j (1 - x)^k used by the
/// weak-solution checks, j in {0,1,2}, k in {1,2,3}.
std::vector<TestFunction> polynomial_test_family(double t_scale);

/// Lattice of one solved field u(t_i, x_j), row-major over times x grid.
struct FieldLattice {
    std::vector<double> times;
    std::vector<double> xs;
    std::vector<double> values;  // values[i * xs.size() + j]
    double at(std::size_t i, std::size_t j) const { return values[i * xs.size() + j]; }
};

/// Residual of the weak identity for u_t + a u_x = b u + c on [0, tau] x [0, 1]:
///   -int int ( u [phi_t + a phi_x + (a_x + b) phi] + c phi )
///   + int u(tau) phi(tau) - int u0 phi(0) - int h a(., 0) phi(., 0),
/// evaluated by 2D trapezoid quadrature on the lattice. The test function
/// must vanish at x = 1.
double weak_residual(const FieldLattice& u,
                     const std::function<double(double, double)>& a,
                     const std::function<double(double, double)>& ax_plus_b,
                     const std::function<double(double, double)>& c,
                     const std::vector<double>& u0, const std::vector<double>& h_inflow,
                     const TestFunction& test);

/// Norm estimates and their empirical constants against the data norms.
struct NormReport {
    double fill_dev_w1inf = 0.0;      // ||f_p - f_pe||_{W^{1,inf}}
    double interface_dev_sup = 0.0;   // sup |l - l_e|
    double interface_dev_w1inf = 0.0; // sup |l - l_e| + sup |l'|
    double moisture_pfz_sup_l2 = 0.0;
    double temperature_pfz_sup_l2 = 0.0;
    double moisture_ffz_sup_l2 = 0.0;
    double temperature_ffz_sup_l2 = 0.0;
    double moisture_pfz_data = 0.0;     // ||M0_p|| + ||M_in||
    double temperature_pfz_data = 0.0;  // ||T0_p|| + ||T_in|| + ||g_p||
    double moisture_ffz_data = 0.0;
    double temperature_ffz_data = 0.0;
    double data_eps = 0.0;
    double fill_ratio_to_eps = 0.0;       // fill_dev / eps
    double interface_ratio_to_eps = 0.0;  // interface_dev / eps
    double moisture_pfz_constant = 0.0;   // sup L2 / data, and so on
    double temperature_pfz_constant = 0.0;
    double moisture_ffz_constant = 0.0;
    double temperature_ffz_constant = 0.0;
};

NormReport estimate_norms(const TransportContext& ctx, const SolutionHistory& history,
                          const EquilibriumPoint& eq, double data_eps, double horizon);

/// Discrete H2 norm of the deviation f_p(t, .) - f_pe from snapshot arrays.
double h2_deviation_norm(const FieldSnapshot& snap, double center);

}  // namespace extrusim

#endif
