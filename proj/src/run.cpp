#include "extrusim/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "extrusim/interface_solver.hpp"
#include "extrusim/model_core.hpp"

namespace extrusim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& columns) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << header << "\n";
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out << ",";
            out << format_double(columns[c][r]);
        }
        out << "\n";
    }
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    const std::vector<double>& column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return columns[i];
        }
        throw std::runtime_error("csv column not found: " + name);
    }
};

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.header.push_back(cell);
    table.columns.resize(table.header.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::size_t c = 0;
        while (std::getline(ls, cell, ',') && c < table.columns.size()) {
            table.columns[c++].push_back(std::stod(cell));
        }
    }
    return table;
}

std::string snapshot_name(const std::string& prefix, std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%03zu.csv", prefix.c_str(), index);
    return buf;
}

void write_history(const std::string& dir, const std::string& prefix,
                   const SolutionHistory& history) {
    {
        std::vector<std::vector<double>> cols(5);
        for (const auto& s : history.interface_series) {
            cols[0].push_back(s.t);
            cols[1].push_back(s.position);
            cols[2].push_back(s.fill);
            cols[3].push_back(s.flow);
            cols[4].push_back(s.pressure);
        }
        write_csv(dir + "/" + prefix + "interface.csv", "t,l,fp1,Fd,dP", cols);
    }
    for (std::size_t i = 0; i < history.snapshots.size(); ++i) {
        const auto& snap = history.snapshots[i];
        write_csv(dir + "/" + snapshot_name(prefix + "snapshot", i),
                  "x,f_p,M_p,T_p,M_f,T_f",
                  {snap.x, snap.fill, snap.moisture_pfz, snap.temperature_pfz,
                   snap.moisture_ffz, snap.temperature_ffz});
    }
    if (!history.mass_times.empty()) {
        write_csv(dir + "/" + prefix + "mass.csv", "t,m,net_inflow",
                  {history.mass_times, history.mass, history.net_inflow});
    }
}

SolutionHistory fv_to_history(const Scenario& scenario, const FvHistory& fv) {
    SolutionHistory history;
    for (std::size_t k = 0; k < fv.times.size(); ++k) {
        InterfaceSample s;
        s.t = fv.times[k];
        s.position = fv.interface_position[k];
        s.fill = fv.fill_trace[k];
        const double speed = scenario.signals.speed(s.t);
        s.flow = net_flow_rate(scenario.params, s.position, speed);
        s.pressure = pressure_drop(scenario.params, s.position, speed);
        history.interface_series.push_back(s);
    }
    for (const auto& snap : fv.snapshots) {
        FieldSnapshot f;
        f.time = snap.time;
        const auto& st = snap.state;
        f.x.resize(st.cells());
        for (std::size_t i = 0; i < st.cells(); ++i) f.x[i] = st.cell_center(i);
        f.fill = st.fill;
        f.moisture_pfz = st.moisture_pfz;
        f.temperature_pfz = st.temperature_pfz;
        f.moisture_ffz = st.moisture_ffz;
        f.temperature_ffz = st.temperature_ffz;
        history.snapshots.push_back(std::move(f));
    }
    return history;
}

}  // namespace

double ComparisonReport::worst() const {
    return std::max({fill_l1, moisture_pfz_l1, temperature_pfz_l1, moisture_ffz_l1,
                     temperature_ffz_l1, interface_linf});
}

CharacteristicRun run_characteristic(const Scenario& scenario) {
    CharacteristicRun out;
    const auto eq = scenario.equilibrium();
    out.solution = solve_global(scenario.params, eq, scenario.solver,
                                scenario.initial_window_state(), scenario.signals,
                                scenario.horizon);
    const auto data = scenario.transport_data();
    const auto state = scenario.initial_window_state();
    TransportContext ctx{out.solution.trajectory, scenario.signals, scenario.params,
                         state, data};
    out.history = evaluate_history(ctx, scenario.output_times, scenario.solver.grid_nodes,
                                   scenario.conserving);
    return out;
}

FvHistory run_fv(const Scenario& scenario, int cells) {
    const auto sample_cells = [cells](const std::vector<double>& nodes) {
        SampledProfile p(nodes);
        std::vector<double> v(static_cast<std::size_t>(cells));
        for (int i = 0; i < cells; ++i) {
            v[static_cast<std::size_t>(i)] =
                p.value((static_cast<double>(i) + 0.5) / cells);
        }
        return v;
    };
    FvState initial = make_fv_state(
        scenario.params, scenario.initial_interface, sample_cells(scenario.fill0),
        sample_cells(scenario.moisture_pfz0), sample_cells(scenario.temperature_pfz0),
        sample_cells(scenario.moisture_ffz0), sample_cells(scenario.temperature_ffz0));
    return fv_solve(initial, scenario.signals, scenario.params, scenario.horizon,
                    scenario.output_times);
}

ComparisonReport compare_histories(const SolutionHistory& chr, const FvHistory& fv) {
    ComparisonReport report;
    const std::size_t n = std::min(chr.snapshots.size(), fv.snapshots.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = chr.snapshots[i];
        const auto& st = fv.snapshots[i].state;
        std::vector<double> xb(st.cells());
        for (std::size_t k = 0; k < st.cells(); ++k) xb[k] = st.cell_center(k);
        report.fill_l1 =
            std::max(report.fill_l1, l1_error(a.x, a.fill, xb, st.fill).relative);
        report.moisture_pfz_l1 = std::max(
            report.moisture_pfz_l1,
            l1_error(a.x, a.moisture_pfz, xb, st.moisture_pfz).relative);
        report.temperature_pfz_l1 = std::max(
            report.temperature_pfz_l1,
            l1_error(a.x, a.temperature_pfz, xb, st.temperature_pfz).relative);
        report.moisture_ffz_l1 = std::max(
            report.moisture_ffz_l1,
            l1_error(a.x, a.moisture_ffz, xb, st.moisture_ffz).relative);
        report.temperature_ffz_l1 = std::max(
            report.temperature_ffz_l1,
            l1_error(a.x, a.temperature_ffz, xb, st.temperature_ffz).relative);
    }
    std::vector<double> ta, la;
    for (const auto& s : chr.interface_series) {
        ta.push_back(s.t);
        la.push_back(s.position);
    }
    report.interface_linf = linf_error(ta, la, fv.times, fv.interface_position).relative;
    return report;
}

ComparisonReport compare_run_dirs(const std::string& dir_a, const std::string& dir_b) {
    auto pick_prefix = [](const std::string& dir) -> std::string {
        if (fs::exists(dir + "/interface.csv")) return "";
        if (fs::exists(dir + "/fv_interface.csv")) return "fv_";
        throw std::runtime_error("no interface series found under " + dir);
    };
    const std::string pa = pick_prefix(dir_a);
    const std::string pb = pick_prefix(dir_b);

    ComparisonReport report;
    const auto ia = read_csv(dir_a + "/" + pa + "interface.csv");
    const auto ib = read_csv(dir_b + "/" + pb + "interface.csv");
    report.interface_linf =
        linf_error(ia.column("t"), ia.column("l"), ib.column("t"), ib.column("l"))
            .relative;

    for (std::size_t i = 0;; ++i) {
        const std::string fa = dir_a + "/" + snapshot_name(pa + "snapshot", i);
        const std::string fb = dir_b + "/" + snapshot_name(pb + "snapshot", i);
        if (!fs::exists(fa) || !fs::exists(fb)) break;
        const auto a = read_csv(fa);
        const auto b = read_csv(fb);
        auto update = [&](double& slot, const char* col) {
            slot = std::max(slot, l1_error(a.column("x"), a.column(col), b.column("x"),
                                           b.column(col))
                                      .relative);
        };
        update(report.fill_l1, "f_p");
        update(report.moisture_pfz_l1, "M_p");
        update(report.temperature_pfz_l1, "T_p");
        update(report.moisture_ffz_l1, "M_f");
        update(report.temperature_ffz_l1, "T_f");
    }
    return report;
}

std::string report_to_json(const RunReport& report) {
    json j;
    j["success"] = report.success;
    j["failure"] = report.failure;
    j["mode"] = report.mode;
    j["windows"] = report.windows;
    j["norm_bound"] = report.norm_bound;
    j["min_window"] = report.min_window;
    j["max_iterations"] = report.max_iterations;
    j["max_contraction_ratio"] = report.max_ratio;
    json wins = json::array();
    for (const auto& w : report.window_logs) {
        wins.push_back({{"start", w.start_time},
                        {"width", w.width},
                        {"iterations", w.iterations},
                        {"ratios", w.ratios},
                        {"final_update", w.final_update},
                        {"profile_deviation", w.profile_deviation}});
    }
    j["window_logs"] = wins;
    if (report.norms) {
        const auto& n = *report.norms;
        j["norms"] = {{"fill_dev_w1inf", n.fill_dev_w1inf},
                      {"interface_dev_sup", n.interface_dev_sup},
                      {"interface_dev_w1inf", n.interface_dev_w1inf},
                      {"moisture_pfz_sup_l2", n.moisture_pfz_sup_l2},
                      {"temperature_pfz_sup_l2", n.temperature_pfz_sup_l2},
                      {"moisture_ffz_sup_l2", n.moisture_ffz_sup_l2},
                      {"temperature_ffz_sup_l2", n.temperature_ffz_sup_l2},
                      {"moisture_pfz_constant", n.moisture_pfz_constant},
                      {"temperature_pfz_constant", n.temperature_pfz_constant},
                      {"moisture_ffz_constant", n.moisture_ffz_constant},
                      {"temperature_ffz_constant", n.temperature_ffz_constant},
                      {"fill_ratio_to_eps", n.fill_ratio_to_eps},
                      {"interface_ratio_to_eps", n.interface_ratio_to_eps},
                      {"data_eps", n.data_eps}};
    }
    if (report.oracle_comparison) {
        const auto& c = *report.oracle_comparison;
        j["oracle_comparison"] = {{"fill_l1", c.fill_l1},
                                  {"moisture_pfz_l1", c.moisture_pfz_l1},
                                  {"temperature_pfz_l1", c.temperature_pfz_l1},
                                  {"moisture_ffz_l1", c.moisture_ffz_l1},
                                  {"temperature_ffz_l1", c.temperature_ffz_l1},
                                  {"interface_linf", c.interface_linf}};
    }
    return j.dump(2) + "\n";
}

RunReport run_scenario(const Scenario& scenario, RunMode mode,
                       const std::string& out_dir) {
    fs::create_directories(out_dir);
    RunReport report;
    report.mode = (mode == RunMode::characteristic) ? "characteristic"
                  : (mode == RunMode::fv)           ? "fv"
                                                    : "both";
    try {
        std::optional<CharacteristicRun> chr;
        if (mode != RunMode::fv) {
            chr = run_characteristic(scenario);
            write_history(out_dir, "", chr->history);
            report.windows = static_cast<int>(chr->solution.windows.size());
            report.norm_bound = chr->solution.norm_bound;
            report.window_logs = chr->solution.windows;
            report.min_window = chr->solution.windows.empty()
                                    ? 0.0
                                    : chr->solution.windows.front().width;
            for (const auto& w : chr->solution.windows) {
                report.min_window = std::min(report.min_window, w.width);
                report.max_iterations = std::max(report.max_iterations, w.iterations);
                for (double r : w.ratios) report.max_ratio = std::max(report.max_ratio, r);
            }
            const auto data = scenario.transport_data();
            const auto state = scenario.initial_window_state();
            TransportContext ctx{chr->solution.trajectory, scenario.signals,
                                 scenario.params, state, data};
            report.norms = estimate_norms(ctx, chr->history, scenario.equilibrium(),
                                          scenario.data_scale, scenario.horizon);
        }
        if (mode != RunMode::characteristic) {
            const auto fv = run_fv(scenario, scenario.fv_cells);
            write_history(out_dir, "fv_", fv_to_history(scenario, fv));
            if (chr) {
                report.oracle_comparison = compare_histories(chr->history, fv);
            }
        }
        report.success = true;
    } catch (const std::exception& e) {
        report.success = false;
        report.failure = e.what();
    }
    std::ofstream out(out_dir + "/report.json", std::ios::binary);
    out << report_to_json(report);
    return report;
}

}  // namespace extrusim
