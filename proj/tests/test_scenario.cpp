#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "extrusim/presets.hpp"
#include "extrusim/run.hpp"
#include "extrusim/scenario.hpp"

using namespace extrusim;
namespace fs = std::filesystem;

namespace {

std::string fixture(const char* name) {
    return std::string(EXTRUSIM_SOURCE_DIR) + "/scenarios/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
}

bool has_code(const std::vector<ScenarioIssue>& issues, const std::string& code) {
    for (const auto& i : issues) {
        if (i.code == code) return true;
    }
    return false;
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("bundled fixtures load cleanly") {
    for (const char* name : {"equilibrium.scn", "perturbed.scn", "h2class.scn"}) {
        const Scenario s = load_scenario(fixture(name));
        CHECK(validate_scenario(s).empty());
    }
}

TEST_CASE("overfeeding is reported with the offending time") {
    Scenario s = make_perturbed_scenario(0.02);
    // force F_in / theta(N) = 1.2 from t = 4 onward
    const double theta = s.params.density * s.params.effective_volume;
    std::vector<double> ts = s.signals.feed_rate.times();
    std::vector<double> vs = s.signals.feed_rate.values();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] >= 4.0) vs[i] = 1.2 * theta * s.signals.speed(ts[i]);
    }
    s.signals.feed_rate = PiecewiseLinearSignal(ts, vs);
    const auto issues = validate_scenario(s);
    REQUIRE(has_code(issues, "inflow_ratio_range"));
    bool names_time = false;
    for (const auto& i : issues) {
        if (i.code == "inflow_ratio_range" &&
            i.message.find("t=4") != std::string::npos) {
            names_time = true;
        }
    }
    CHECK(names_time);
}

TEST_CASE("validation reports every violation, each with its own code") {
    Scenario s = make_perturbed_scenario(0.02);
    s.initial_interface = 1.7;                        // outside (0, L)
    s.output_times.push_back(99.0);                   // beyond the horizon
    s.fill0[10] = 1.4;                                // outside (0, 1)
    s.solver.regime_radius = 0.9;                     // violates the radius cap
    const auto issues = validate_scenario(s);
    CHECK(issues.size() >= 4);
    CHECK(has_code(issues, "interface_initial_range"));
    CHECK(has_code(issues, "output_times_range"));
    CHECK(has_code(issues, "fill_profile_range"));
    CHECK(has_code(issues, "solver_config"));
    Scenario unsorted = make_perturbed_scenario(0.02);
    std::swap(unsorted.output_times[1], unsorted.output_times[2]);
    CHECK(has_code(validate_scenario(unsorted), "output_times_order"));
}

TEST_CASE("corner compatibility violations are flagged") {
    Scenario s = make_perturbed_scenario(0.02);
    s.fill0.front() += 1e-4;
    CHECK(has_code(validate_scenario(s), "compatibility"));
    Scenario h2 = make_h2_scenario(0.02);
    for (std::size_t i = 0; i < h2.fill0.size(); ++i) {
        const double x = static_cast<double>(i) / (h2.fill0.size() - 1);
        h2.fill0[i] += 0.01 * x;  // nonzero inlet slope breaks the H2 corner
    }
    CHECK(has_code(validate_scenario(h2), "compatibility_h2"));
}

TEST_CASE("conserving flag checks the geometric identity") {
    Scenario s = make_perturbed_scenario(0.02);
    s.params.effective_volume = 0.11;  // != pitch * S_eff
    CHECK(has_code(validate_scenario(s), "conserving_geometry"));
}

TEST_CASE("parse errors carry the parse_error code") {
    CHECK_THROWS_AS((void)parse_scenario("{ not json"), ScenarioError);
    try {
        (void)parse_scenario("{\"horizon\": 1.0}");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        REQUIRE_FALSE(e.issues().empty());
        CHECK(e.issues().front().code == "parse_error");
    }
}

TEST_CASE("serialization round trip is byte identical") {
    const Scenario a = load_scenario(fixture("perturbed.scn"));
    const std::string once = serialize_scenario(a);
    const Scenario b = parse_scenario(once);
    const std::string twice = serialize_scenario(b);
    CHECK(once == twice);
}

TEST_CASE("identical runs produce bit-identical outputs") {
    Scenario s = make_perturbed_scenario(0.02, 1.0);
    s.output_times = {0.0, 0.5, 1.0};
    s.solver.grid_nodes = 65;
    const std::string dir_a = "out_det_a", dir_b = "out_det_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    const auto ra = run_scenario(s, RunMode::characteristic, dir_a);
    const auto rb = run_scenario(s, RunMode::characteristic, dir_b);
    REQUIRE(ra.success);
    REQUIRE(rb.success);
    for (const char* name :
         {"interface.csv", "snapshot_000.csv", "snapshot_001.csv", "snapshot_002.csv",
          "mass.csv", "report.json"}) {
        CHECK(slurp(dir_a + "/" + std::string(name)) ==
              slurp(dir_b + "/" + std::string(name)));
    }
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("both solvers agree to rounding on the stationary scenario") {
    Scenario s = make_stationary_scenario(1.5);
    s.output_times = {0.0, 0.75, 1.5};
    s.solver.grid_nodes = 129;
    s.fv_cells = 128;
    const std::string dir = "out_both";
    fs::remove_all(dir);
    const auto report = run_scenario(s, RunMode::both, dir);
    REQUIRE(report.success);
    REQUIRE(report.oracle_comparison.has_value());
    CHECK(report.oracle_comparison->interface_linf < 1e-8);
    CHECK(report.oracle_comparison->fill_l1 < 1e-8);
    CHECK(report.oracle_comparison->moisture_pfz_l1 < 1e-8);
    // comparing the written directories reproduces the in-memory numbers
    const auto disk = compare_run_dirs(dir, dir);
    CHECK(disk.worst() == 0.0);
    fs::remove_all(dir);
}

TEST_CASE("run reports surface regime failures with context") {
    Scenario s = make_perturbed_scenario(0.02, 1.0);
    s.solver.max_picard = 1;
    s.solver.fixpoint_tol = 1e-16;
    const std::string dir = "out_fail";
    fs::remove_all(dir);
    const auto report = run_scenario(s, RunMode::characteristic, dir);
    CHECK_FALSE(report.success);
    CHECK(report.failure.find("window") != std::string::npos);
    fs::remove_all(dir);
}

}  // TEST_SUITE
