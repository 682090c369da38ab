#ifndef EXTRUSIM_RUN_HPP
#define EXTRUSIM_RUN_HPP

#include <optional>
#include <string>
#include <vector>

#include "extrusim/oracle_fv.hpp"
#include "extrusim/scenario.hpp"
#include "extrusim/transport_solver.hpp"

namespace extrusim {

enum class RunMode { characteristic, fv, both };

/// Per-field comparison between two runs.
struct ComparisonReport {
    double fill_l1 = 0.0;
    double moisture_pfz_l1 = 0.0;
    double temperature_pfz_l1 = 0.0;
    double moisture_ffz_l1 = 0.0;
    double temperature_ffz_l1 = 0.0;
    double interface_linf = 0.0;

    double worst() const;
};

struct RunReport {
    bool success = false;
    std::string failure;
    std::string mode;
    int windows = 0;
    double norm_bound = 0.0;
    double min_window = 0.0;
    int max_iterations = 0;
    double max_ratio = 0.0;
    std::vector<WindowLog> window_logs;
    std::optional<NormReport> norms;
    std::optional<ComparisonReport> oracle_comparison;
};

/// Runs the requested solver(s), writes CSV series/snapshots and report.json
/// under out_dir. Numeric output is printed with 17 significant digits, so
/// identical scenario + config give bit-identical files.
RunReport run_scenario(const Scenario& scenario, RunMode mode,
                       const std::string& out_dir);

/// FV solve of a scenario at a given resolution (oracle entry point).
FvHistory run_fv(const Scenario& scenario, int cells);

/// Characteristic solve + history evaluation (used by run_scenario and the
/// acceptance suite).
struct CharacteristicRun {
    GlobalSolution solution;
    SolutionHistory history;
};
CharacteristicRun run_characteristic(const Scenario& scenario);

/// Field-by-field comparison of a characteristic history against an FV
/// history at matching output times (relative L1 per field, relative Linf
/// for the interface path).
ComparisonReport compare_histories(const SolutionHistory& chr, const FvHistory& fv);

/// Reads two run directories written by run_scenario and compares their
/// series/snapshots.
ComparisonReport compare_run_dirs(const std::string& dir_a, const std::string& dir_b);

std::string report_to_json(const RunReport& report);

}  // namespace extrusim

#endif
