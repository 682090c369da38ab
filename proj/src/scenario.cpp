#include "extrusim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "extrusim/model_core.hpp"

namespace extrusim {

using nlohmann::json;

namespace {

constexpr double kCompatibilityTol = 1e-8;
constexpr double kCompatibilityH2Tol = 1e-6;

json signal_to_json(const PiecewiseLinearSignal& s) {
    return json{{"times", s.times()}, {"values", s.values()}};
}

json table_to_json(const BilinearTable& t) {
    return json{
        {"times", t.times()}, {"positions", t.positions()}, {"values", t.values()}};
}

}  // namespace

ScenarioError::ScenarioError(std::string what, std::vector<ScenarioIssue> found)
    : std::runtime_error(std::move(what)), issues_(std::move(found)) {}

EquilibriumPoint Scenario::equilibrium() const {
    return make_equilibrium(params, equilibrium_position, equilibrium_speed);
}

WindowState Scenario::initial_window_state() const {
    WindowState state;
    state.start_time = 0.0;
    state.interface_position = initial_interface;
    state.fill_profile = SampledProfile(fill0);
    return state;
}

TransportData Scenario::transport_data() const {
    TransportData data;
    data.moisture_pfz = SampledProfile(moisture_pfz0);
    data.temperature_pfz = SampledProfile(temperature_pfz0);
    data.moisture_ffz = SampledProfile(moisture_ffz0);
    data.temperature_ffz = SampledProfile(temperature_ffz0);
    return data;
}

std::vector<ScenarioIssue> validate_scenario(const Scenario& s) {
    std::vector<ScenarioIssue> issues;
    auto add = [&issues](std::string code, std::string path, std::string message) {
        issues.push_back({std::move(code), std::move(path), std::move(message)});
    };

    for (const auto& msg : s.params.validation_errors()) {
        add("params_positive", "params", msg);
    }
    if (!issues.empty()) return issues;  // later checks need sane parameters

    if (!(s.equilibrium_position > 0.0) || !(s.equilibrium_position < s.params.length)) {
        add("equilibrium_range", "equilibrium.position",
            "l_e must lie in (0, L), got " + std::to_string(s.equilibrium_position));
    }
    if (!(s.equilibrium_speed > 0.0)) {
        add("equilibrium_range", "equilibrium.speed", "N_e must be positive");
    }
    if (!(s.horizon > 0.0)) {
        add("horizon_positive", "horizon", "horizon must be positive");
    }
    if (!(s.initial_interface > 0.0) || !(s.initial_interface < s.params.length)) {
        add("interface_initial_range", "initial_interface",
            "l0 must lie in (0, L), got " + std::to_string(s.initial_interface));
    }
    if (s.conserving && !s.params.is_conserving()) {
        add("conserving_geometry", "conserving",
            "scenario declares conserving but V_eff != pitch * S_eff (" +
                std::to_string(s.params.effective_volume) + " vs " +
                std::to_string(s.params.pitch * s.params.effective_area) + ")");
    }

    // Screw speed must stay positive: piecewise linear, so breakpoint values
    // are enough.
    if (!(s.signals.speed.min_value() > 0.0)) {
        add("speed_positive", "signals.speed", "N(t) must stay strictly positive");
    } else {
        // Inflow ratio in (0, 1): the ratio of two linear pieces is monotone
        // between breakpoints, so check the union of breakpoints and the
        // horizon ends.
        std::vector<double> probe_times{0.0, s.horizon};
        for (double t : s.signals.feed_rate.times()) {
            if (t >= 0.0 && t <= s.horizon) probe_times.push_back(t);
        }
        for (double t : s.signals.speed.times()) {
            if (t >= 0.0 && t <= s.horizon) probe_times.push_back(t);
        }
        std::sort(probe_times.begin(), probe_times.end());
        for (double t : probe_times) {
            const double ratio = inlet_filling_unchecked(s.params, s.signals, t);
            if (!(ratio > 0.0) || !(ratio < 1.0)) {
                add("inflow_ratio_range", "signals.feed_rate",
                    "F_in/theta(N) = " + std::to_string(ratio) + " outside (0,1) at t=" +
                        std::to_string(t));
                break;
            }
        }
    }

    auto check_profile = [&](const std::vector<double>& v, const char* path) {
        if (v.size() < 2) {
            add("profile_nodes", path, "node table needs at least two entries");
            return false;
        }
        for (double value : v) {
            if (!std::isfinite(value)) {
                add("profile_finite", path, "node table holds a non-finite value");
                return false;
            }
        }
        return true;
    };
    const bool fill_ok = check_profile(s.fill0, "initial_fields.fill");
    check_profile(s.moisture_pfz0, "initial_fields.moisture_pfz");
    check_profile(s.temperature_pfz0, "initial_fields.temperature_pfz");
    check_profile(s.moisture_ffz0, "initial_fields.moisture_ffz");
    check_profile(s.temperature_ffz0, "initial_fields.temperature_ffz");

    if (fill_ok) {
        for (double v : s.fill0) {
            if (!(v > 0.0) || !(v < 1.0)) {
                add("fill_profile_range", "initial_fields.fill",
                    "initial filling ratio " + std::to_string(v) + " outside (0,1)");
                break;
            }
        }
    }

    if (s.output_times.empty()) {
        add("output_times_range", "output_times", "at least one output time required");
    }
    for (double t : s.output_times) {
        if (t < 0.0 || t > s.horizon) {
            add("output_times_range", "output_times",
                "output time " + std::to_string(t) + " outside [0, horizon]");
            break;
        }
    }
    for (std::size_t i = 0; i + 1 < s.output_times.size(); ++i) {
        if (!(s.output_times[i] < s.output_times[i + 1])) {
            add("output_times_order", "output_times",
                "output times must be strictly increasing");
            break;
        }
    }
    if (s.fv_cells < 4) {
        add("fv_cells_range", "fv.cells", "oracle needs at least 4 cells");
    }

    try {
        s.solver.validate(s.params, s.equilibrium());
    } catch (const std::exception& e) {
        add("solver_config", "solver", e.what());
    }

    // Compatibility of inlet and initial data at the corner (0, 0).
    if (fill_ok && s.signals.speed.min_value() > 0.0) {
        const double ratio0 = inlet_filling_unchecked(s.params, s.signals, 0.0);
        const double gap = std::abs(ratio0 - s.fill0.front());
        if (gap > kCompatibilityTol) {
            add("compatibility", "initial_fields.fill",
                "inlet ratio and f_p0(0) differ by " + std::to_string(gap) +
                    " at the corner (tolerance 1e-8)");
        }
        if (s.require_h2) {
            const double dx = 1.0 / static_cast<double>(s.fill0.size() - 1);
            const double profile_slope0 = (s.fill0[1] - s.fill0[0]) / dx;
            const double ratio_slope0 = inlet_filling_slope(s.params, s.signals, 0.0);
            const double lhs = profile_slope0 +
                               s.initial_interface /
                                   (s.params.pitch * s.signals.speed(0.0)) * ratio_slope0;
            if (std::abs(lhs) > kCompatibilityH2Tol) {
                add("compatibility_h2", "initial_fields.fill",
                    "differentiated corner compatibility violated by " +
                        std::to_string(lhs));
            }
        }
    }
    return issues;
}

namespace {

PiecewiseLinearSignal parse_signal(const json& j, const std::string& path,
                                   std::vector<ScenarioIssue>& issues) {
    try {
        return PiecewiseLinearSignal(j.at("times").get<std::vector<double>>(),
                                     j.at("values").get<std::vector<double>>());
    } catch (const std::exception& e) {
        issues.push_back({"signal_invalid", path, e.what()});
        return PiecewiseLinearSignal({0.0}, {1.0});
    }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    std::vector<ScenarioIssue> issues;
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ScenarioError(std::string("scenario parse error: ") + e.what(),
                            {{"parse_error", "", e.what()}});
    }

    Scenario s;
    try {
        s.name = j.value("name", std::string("scenario"));
        const auto& p = j.at("params");
        s.params.length = p.at("length").get<double>();
        s.params.pitch = p.at("pitch").get<double>();
        s.params.die_coeff = p.at("die_coeff").get<double>();
        s.params.pressure_coeff = p.at("pressure_coeff").get<double>();
        s.params.density = p.at("density").get<double>();
        s.params.effective_volume = p.at("effective_volume").get<double>();
        s.params.effective_area = p.at("effective_area").get<double>();
        s.params.exchange_area = p.at("exchange_area").get<double>();
        s.params.heat_exchange = p.at("heat_exchange").get<double>();
        s.params.heat_capacity = p.at("heat_capacity").get<double>();
        s.params.viscosity = p.at("viscosity").get<double>();
        s.params.visc_heat_pfz = p.at("visc_heat_pfz").get<double>();
        s.params.visc_heat_ffz = p.at("visc_heat_ffz").get<double>();
        s.params.visc_heat_coeff = p.at("visc_heat_coeff").get<double>();
        s.params.ambient_pressure = p.value("ambient_pressure", 0.0);

        s.equilibrium_position = j.at("equilibrium").at("position").get<double>();
        s.equilibrium_speed = j.at("equilibrium").at("speed").get<double>();
        s.horizon = j.at("horizon").get<double>();
        s.initial_interface = j.at("initial_interface").get<double>();
        s.conserving = j.value("conserving", false);
        s.require_h2 = j.value("require_h2", false);
        s.data_scale = j.value("data_scale", 0.0);

        const auto& sig = j.at("signals");
        s.signals.speed = parse_signal(sig.at("speed"), "signals.speed", issues);
        s.signals.feed_rate =
            parse_signal(sig.at("feed_rate"), "signals.feed_rate", issues);
        s.signals.inlet_moisture =
            parse_signal(sig.at("inlet_moisture"), "signals.inlet_moisture", issues);
        s.signals.inlet_temperature = parse_signal(sig.at("inlet_temperature"),
                                                   "signals.inlet_temperature", issues);
        const auto& tb = sig.at("barrel_temperature");
        try {
            s.signals.barrel_temperature =
                BilinearTable(tb.at("times").get<std::vector<double>>(),
                              tb.at("positions").get<std::vector<double>>(),
                              tb.at("values").get<std::vector<double>>());
        } catch (const std::exception& e) {
            issues.push_back({"signal_invalid", "signals.barrel_temperature", e.what()});
        }

        const auto& init = j.at("initial_fields");
        s.fill0 = init.at("fill").get<std::vector<double>>();
        s.moisture_pfz0 = init.at("moisture_pfz").get<std::vector<double>>();
        s.temperature_pfz0 = init.at("temperature_pfz").get<std::vector<double>>();
        s.moisture_ffz0 = init.at("moisture_ffz").get<std::vector<double>>();
        s.temperature_ffz0 = init.at("temperature_ffz").get<std::vector<double>>();

        s.output_times = j.at("output_times").get<std::vector<double>>();

        if (j.contains("solver")) {
            const auto& cfg = j.at("solver");
            s.solver.regime_radius = cfg.value("regime_radius", s.solver.regime_radius);
            s.solver.micro_step = cfg.value("micro_step", s.solver.micro_step);
            s.solver.fixpoint_tol = cfg.value("fixpoint_tol", s.solver.fixpoint_tol);
            s.solver.max_picard = cfg.value("max_picard", s.solver.max_picard);
            s.solver.contraction_slack =
                cfg.value("contraction_slack", s.solver.contraction_slack);
            s.solver.safety = cfg.value("safety", s.solver.safety);
            s.solver.grid_nodes = cfg.value("grid_nodes", s.solver.grid_nodes);
        }
        if (j.contains("fv")) {
            s.fv_cells = j.at("fv").value("cells", s.fv_cells);
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        issues.push_back({"parse_error", "", e.what()});
        throw ScenarioError(std::string("scenario parse error: ") + e.what(), issues);
    }

    auto found = validate_scenario(s);
    issues.insert(issues.end(), found.begin(), found.end());
    if (!issues.empty()) {
        std::ostringstream oss;
        oss << "scenario validation failed with " << issues.size() << " issue(s):";
        for (const auto& issue : issues) {
            oss << "\n  [" << issue.code << "] " << issue.path << ": " << issue.message;
        }
        throw ScenarioError(oss.str(), issues);
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError("cannot open scenario file: " + path,
                            {{"parse_error", path, "cannot open file"}});
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
    json j;
    j["name"] = s.name;
    j["params"] = {{"length", s.params.length},
                   {"pitch", s.params.pitch},
                   {"die_coeff", s.params.die_coeff},
                   {"pressure_coeff", s.params.pressure_coeff},
                   {"density", s.params.density},
                   {"effective_volume", s.params.effective_volume},
                   {"effective_area", s.params.effective_area},
                   {"exchange_area", s.params.exchange_area},
                   {"heat_exchange", s.params.heat_exchange},
                   {"heat_capacity", s.params.heat_capacity},
                   {"viscosity", s.params.viscosity},
                   {"visc_heat_pfz", s.params.visc_heat_pfz},
                   {"visc_heat_ffz", s.params.visc_heat_ffz},
                   {"visc_heat_coeff", s.params.visc_heat_coeff},
                   {"ambient_pressure", s.params.ambient_pressure}};
    j["equilibrium"] = {{"position", s.equilibrium_position},
                        {"speed", s.equilibrium_speed}};
    j["horizon"] = s.horizon;
    j["initial_interface"] = s.initial_interface;
    j["conserving"] = s.conserving;
    j["require_h2"] = s.require_h2;
    j["data_scale"] = s.data_scale;
    j["signals"] = {{"speed", signal_to_json(s.signals.speed)},
                    {"feed_rate", signal_to_json(s.signals.feed_rate)},
                    {"inlet_moisture", signal_to_json(s.signals.inlet_moisture)},
                    {"inlet_temperature", signal_to_json(s.signals.inlet_temperature)},
                    {"barrel_temperature", table_to_json(s.signals.barrel_temperature)}};
    j["initial_fields"] = {{"fill", s.fill0},
                           {"moisture_pfz", s.moisture_pfz0},
                           {"temperature_pfz", s.temperature_pfz0},
                           {"moisture_ffz", s.moisture_ffz0},
                           {"temperature_ffz", s.temperature_ffz0}};
    j["output_times"] = s.output_times;
    j["solver"] = {{"regime_radius", s.solver.regime_radius},
                   {"micro_step", s.solver.micro_step},
                   {"fixpoint_tol", s.solver.fixpoint_tol},
                   {"max_picard", s.solver.max_picard},
                   {"contraction_slack", s.solver.contraction_slack},
                   {"safety", s.solver.safety},
                   {"grid_nodes", s.solver.grid_nodes}};
    j["fv"] = {{"cells", s.fv_cells}};
    return j.dump(2) + "\n";
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write scenario file: " + path);
    }
    out << serialize_scenario(s);
}

}  // namespace extrusim
