#ifndef EXTRUSIM_SCENARIO_HPP
#define EXTRUSIM_SCENARIO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "extrusim/interface_solver.hpp"
#include "extrusim/params.hpp"
#include "extrusim/profile.hpp"
#include "extrusim/signals.hpp"
#include "extrusim/transport_solver.hpp"

namespace extrusim {

/// One validation finding with a stable code and the offending field path.
struct ScenarioIssue {
    std::string code;
    std::string path;
    std::string message;
};

class ScenarioError : public std::runtime_error {
public:
    ScenarioError(std::string what, std::vector<ScenarioIssue> found);
    const std::vector<ScenarioIssue>& issues() const { return issues_; }

private:
    std::vector<ScenarioIssue> issues_;
};

/// A complete run description: physical constants, operating signals as
/// breakpoint tables, initial profiles as node tables on the uniform
/// normalized grid, horizon, output times, and solver overrides.
struct Scenario {
    std::string name = "scenario";
    PhysicalParams params;
    double equilibrium_position = 0.5;  // l_e
    double equilibrium_speed = 1.0;     // N_e
    double horizon = 10.0;
    double initial_interface = 0.5;  // l0
    bool conserving = false;
    bool require_h2 = false;   // also enforce the differentiated compatibility
    double data_scale = 0.0;   // the scenario's perturbation size (reporting)

    OperatingSignals signals;
    std::vector<double> fill0;
    std::vector<double> moisture_pfz0;
    std::vector<double> temperature_pfz0;
    std::vector<double> moisture_ffz0;
    std::vector<double> temperature_ffz0;
    std::vector<double> output_times;

    SolverConfig solver;
    int fv_cells = 400;

    EquilibriumPoint equilibrium() const;
    WindowState initial_window_state() const;
    TransportData transport_data() const;
};

/// All invariant checks; returns every violation, not just the first.
std::vector<ScenarioIssue> validate_scenario(const Scenario& s);

/// Parse + validate. Throws ScenarioError carrying the full issue list.
Scenario load_scenario(const std::string& path);

/// Canonical JSON serialization (deterministic byte output).
std::string serialize_scenario(const Scenario& s);

void save_scenario(const Scenario& s, const std::string& path);

/// Parse from JSON text (same path as load_scenario without the file read).
Scenario parse_scenario(const std::string& text);

}  // namespace extrusim

#endif
