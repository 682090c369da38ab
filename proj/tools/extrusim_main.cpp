#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "extrusim/run.hpp"
#include "extrusim/scenario.hpp"

namespace {

int do_simulate(const std::string& scenario_path, const std::string& mode_name,
                std::string out_dir, int grid, double micro_step) {
    using namespace extrusim;
    if (const char* env = std::getenv("EXTRUSIM_OUT_DIR")) {
        out_dir = env;
    }
    Scenario scenario;
    try {
        scenario = load_scenario(scenario_path);
    } catch (const ScenarioError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
    if (grid > 0) scenario.solver.grid_nodes = grid;
    if (micro_step > 0.0) scenario.solver.micro_step = micro_step;

    RunMode mode = RunMode::characteristic;
    if (mode_name == "fv") mode = RunMode::fv;
    else if (mode_name == "both") mode = RunMode::both;

    const RunReport report = run_scenario(scenario, mode, out_dir);
    if (!report.success) {
        std::cerr << "run failed: " << report.failure << "\n";
        return 2;
    }
    std::cout << "ok: " << report.windows << " window(s), max "
              << report.max_iterations << " Picard iteration(s)";
    if (report.max_ratio > 0.0) {
        std::cout << ", max contraction ratio " << report.max_ratio;
    }
    if (report.oracle_comparison) {
        std::cout << ", worst oracle error " << report.oracle_comparison->worst();
    }
    std::cout << "\noutputs written to " << out_dir << "\n";
    return 0;
}

int do_validate(const std::string& scenario_path) {
    using namespace extrusim;
    try {
        const Scenario s = load_scenario(scenario_path);
        std::cout << "scenario '" << s.name << "' is valid (horizon " << s.horizon
                  << ", " << s.output_times.size() << " output times)\n";
        return 0;
    } catch (const ScenarioError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
}

int do_compare(const std::string& dir_a, const std::string& dir_b) {
    using namespace extrusim;
    try {
        const ComparisonReport r = compare_run_dirs(dir_a, dir_b);
        std::cout << "relative errors (" << dir_a << " vs " << dir_b << "):\n"
                  << "  f_p  L1   " << r.fill_l1 << "\n"
                  << "  M_p  L1   " << r.moisture_pfz_l1 << "\n"
                  << "  T_p  L1   " << r.temperature_pfz_l1 << "\n"
                  << "  M_f  L1   " << r.moisture_ffz_l1 << "\n"
                  << "  T_f  L1   " << r.temperature_ffz_l1 << "\n"
                  << "  l    Linf " << r.interface_linf << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "compare failed: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"extrusim - free-boundary extrusion model simulator"};
    app.require_subcommand(1);

    std::string scenario_path, mode = "characteristic", out_dir = "out";
    int grid = 0;
    double micro_step = 0.0;
    auto* simulate = app.add_subcommand("simulate", "run a scenario");
    simulate->add_option("scenario", scenario_path, "scenario file (.scn)")->required();
    simulate->add_option("--mode", mode, "characteristic|fv|both")
        ->check(CLI::IsMember({"characteristic", "fv", "both"}));
    simulate->add_option("--out", out_dir,
                         "output directory (EXTRUSIM_OUT_DIR overrides)");
    simulate->add_option("--grid", grid, "output grid nodes override");
    simulate->add_option("--micro-step", micro_step, "solver micro-step override");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("scenario", validate_path, "scenario file (.scn)")->required();

    std::string dir_a, dir_b;
    auto* compare = app.add_subcommand("compare", "compare two run directories");
    compare->add_option("runA", dir_a, "first run directory")->required();
    compare->add_option("runB", dir_b, "second run directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) return do_simulate(scenario_path, mode, out_dir, grid, micro_step);
    if (validate->parsed()) return do_validate(validate_path);
    return do_compare(dir_a, dir_b);
}
