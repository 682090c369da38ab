#ifndef EXTRUSIM_ORACLE_FV_HPP
#define EXTRUSIM_ORACLE_FV_HPP

#include <cstddef>
#include <vector>

#include "extrusim/model_core.hpp"
#include "extrusim/params.hpp"
#include "extrusim/signals.hpp"

namespace extrusim {

/// Cell-average state of the first-order upwind discretization of the
/// normalized coupled system. Fully independent of the characteristic
/// solver: velocities use the solver's own last-cell f_p trace and the
/// interface ODE is advanced by explicit Euler.
struct FvState {
    double time = 0.0;
    double interface_position = 0.0;
    std::vector<double> fill;             // f_p cell averages (PFZ)
    std::vector<double> moisture_pfz;     // M_p
    std::vector<double> temperature_pfz;  // T_p
    std::vector<double> moisture_ffz;     // M_f
    std::vector<double> temperature_ffz;  // T_f

    std::size_t cells() const { return fill.size(); }
    double spacing() const { return 1.0 / static_cast<double>(cells()); }
    double cell_center(std::size_t i) const {
        return (static_cast<double>(i) + 0.5) * spacing();
    }
    /// The f_p(t, 1) trace the oracle feeds into the velocities.
    double fill_trace() const { return fill.back(); }
};

FvState make_fv_state(const PhysicalParams& params, double l0,
                      const std::vector<double>& fill,
                      const std::vector<double>& moisture_pfz,
                      const std::vector<double>& temperature_pfz,
                      const std::vector<double>& moisture_ffz,
                      const std::vector<double>& temperature_ffz);

/// One upwind step with velocities frozen at (t, cell center), explicit Euler
/// sources and interface update, inflow ghost cells from the boundary data.
/// Throws RegimeError when the CFL number exceeds 0.9.
FvState fv_step(const FvState& state, const OperatingSignals& signals,
                const PhysicalParams& params, double dt);

/// Largest dt with CFL number 0.9 for the current state.
double fv_max_dt(const FvState& state, const OperatingSignals& signals,
                 const PhysicalParams& params);

struct FvSnapshot {
    double time;
    FvState state;
};

struct FvHistory {
    std::vector<double> times;      // every accepted step
    std::vector<double> interface_position;
    std::vector<double> fill_trace;
    std::vector<FvSnapshot> snapshots;  // at requested output times
};

/// Marches to the horizon with CFL-limited steps that land exactly on the
/// requested output times.
FvHistory fv_solve(const FvState& initial, const OperatingSignals& signals,
                   const PhysicalParams& params, double horizon,
                   const std::vector<double>& output_times);

/// L1 error of one field between two piecewise-linear samplings.
struct FieldError {
    double absolute = 0.0;
    double relative = 0.0;
};

/// Sampled curves (grid, values) compared in L1 on a dense quadrature grid;
/// relative error normalizes by the second argument.
FieldError l1_error(const std::vector<double>& xs_a, const std::vector<double>& va,
                    const std::vector<double>& xs_b, const std::vector<double>& vb);

/// L-infinity error between two time series, sampled densely; relative to
/// the sup of the second.
FieldError linf_error(const std::vector<double>& ts_a, const std::vector<double>& va,
                      const std::vector<double>& ts_b, const std::vector<double>& vb);

}  // namespace extrusim

#endif
