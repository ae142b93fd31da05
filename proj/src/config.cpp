#include "gapsol/config.hpp"

#include "gapsol/spectrum.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace gapsol {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
    if (!obj.is_object())
        throw ConfigError("config: '" + where + "' must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("config: unknown key '" + where + "." + it.key() + "'");
    }
}

double get_number(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key))
        throw ConfigError("config: missing required field '" + where + "." + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError("config: '" + where + "." + key + "' must be a number");
    return v.get<double>();
}

double get_number_or(const json& obj, const std::string& where, const std::string& key,
                     double fallback) {
    if (!obj.contains(key)) return fallback;
    return get_number(obj, where, key);
}

// Accepts a number or the string "inf".
double get_lifetime(const json& obj, const std::string& where, const std::string& key,
                    double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (v.is_string()) {
        if (v.get<std::string>() == "inf")
            return std::numeric_limits<double>::infinity();
        throw ConfigError("config: '" + where + "." + key + "' must be a number or \"inf\"");
    }
    if (!v.is_number())
        throw ConfigError("config: '" + where + "." + key + "' must be a number or \"inf\"");
    return v.get<double>();
}

std::string get_string_or(const json& obj, const std::string& where, const std::string& key,
                          const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string())
        throw ConfigError("config: '" + where + "." + key + "' must be a string");
    return v.get<std::string>();
}

bool get_bool_or(const json& obj, const std::string& where, const std::string& key,
                 bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean())
        throw ConfigError("config: '" + where + "." + key + "' must be a boolean");
    return v.get<bool>();
}

long get_integer_or(const json& obj, const std::string& where, const std::string& key,
                    long fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ConfigError("config: '" + where + "." + key + "' must be an integer");
    return v.get<long>();
}

std::vector<double> get_number_list(const json& obj, const std::string& where,
                                    const std::string& key) {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    const json& v = obj.at(key);
    if (!v.is_array())
        throw ConfigError("config: '" + where + "." + key + "' must be an array of numbers");
    for (const auto& x : v) {
        if (!x.is_number())
            throw ConfigError("config: '" + where + "." + key + "' must contain only numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

void check_range_arg(const json& args, const std::string& where, const std::string& key) {
    if (!args.contains(key)) return;
    const json& v = args.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError("config: '" + where + "." + key + "' must be [lo, hi]");
    if (!(v[0].get<double>() < v[1].get<double>()))
        throw ConfigError("config: '" + where + "." + key + "' must have lo < hi");
}

// Per-op argument schema: name -> allowed keys beyond op/name.
const std::map<std::string, std::set<std::string>>& op_schemas() {
    static const std::map<std::string, std::set<std::string>> schemas = {
        {"envelope", {"snapshot_ps", "probe_xi", "xi_range", "t_range_fs"}},
        {"cycle_number", {"snapshot_ps", "probe_xi", "xi_range", "t_range_fs", "vg"}},
        {"spectrum", {"snapshot_ps", "probe_xi", "xi_range", "window", "gate"}},
        {"group_velocity", {"t1_ps", "t2_ps", "xi_range", "threshold"}},
        {"pulse_area", {"snapshot_ps", "probe_xi", "xi_range", "t_range_fs", "vg"}},
        {"fit_soliton", {"snapshot_ps", "probe_xi", "search_xi", "search_t_fs", "vg_seed"}},
        {"detect_lobes", {"snapshot_ps", "xi_range", "threshold"}},
        {"inversion_stats", {"snapshot_ps"}},
        {"shape_correlation", {"t1_ps", "t2_ps", "xi_range"}},
    };
    return schemas;
}

AnalysisRequest parse_analysis_entry(const json& entry, std::size_t index) {
    const std::string where = "analysis[" + std::to_string(index) + "]";
    if (!entry.is_object())
        throw ConfigError("config: " + where + " must be an object");
    if (!entry.contains("op") || !entry.at("op").is_string())
        throw ConfigError("config: " + where + " needs a string 'op'");

    AnalysisRequest req;
    req.op = entry.at("op").get<std::string>();
    const auto& schemas = op_schemas();
    auto it = schemas.find(req.op);
    if (it == schemas.end())
        throw ConfigError("config: " + where + " has unknown op '" + req.op + "'");

    std::set<std::string> allowed = it->second;
    allowed.insert("op");
    allowed.insert("name");
    check_keys(entry, where, allowed);

    req.name = get_string_or(entry, where, "name", req.op + "_" + std::to_string(index));
    req.args = entry;
    req.args.erase("op");
    req.args.erase("name");

    // Source checks shared by ops that read one snapshot or one probe.
    const bool has_snap = req.args.contains("snapshot_ps");
    const bool has_probe = req.args.contains("probe_xi");
    if (it->second.count("snapshot_ps") && it->second.count("probe_xi")) {
        if (has_snap == has_probe)
            throw ConfigError("config: " + where +
                              " needs exactly one of snapshot_ps / probe_xi");
    } else if (it->second.count("snapshot_ps") && !has_snap) {
        throw ConfigError("config: " + where + " needs snapshot_ps");
    }
    if (req.op == "group_velocity" || req.op == "shape_correlation") {
        get_number(req.args, where, "t1_ps");
        get_number(req.args, where, "t2_ps");
    }
    if (req.op == "spectrum" && req.args.contains("gate")) {
        const json& g = req.args.at("gate");
        const bool ok = (g.is_string() && g.get<std::string>() == "auto") ||
                        (g.is_array() && g.size() == 2 && g[0].is_number() && g[1].is_number());
        if (!ok)
            throw ConfigError("config: " + where + ".gate must be \"auto\" or [t0_fs, t1_fs]");
    }
    if (req.op == "spectrum")
        parse_window(get_string_or(req.args, where, "window", "hann"));
    check_range_arg(req.args, where, "xi_range");
    check_range_arg(req.args, where, "t_range_fs");
    check_range_arg(req.args, where, "search_xi");
    check_range_arg(req.args, where, "search_t_fs");
    return req;
}

} // namespace

ExperimentConfig parse_config_json(const json& j) {
    check_keys(j, "<root>",
               {"grid", "medium", "pulse", "relaxation", "stepper", "schedule", "t_end_ps",
                "analysis", "output"});

    ExperimentConfig cfg;
    SimulationConfig& sim = cfg.sim;

    if (!j.contains("grid"))
        throw ConfigError("config: missing required section 'grid'");
    const json& grid = j.at("grid");
    check_keys(grid, "grid", {"dxi", "courant", "xi_min", "xi_max"});
    sim.dxi = get_number_or(grid, "grid", "dxi", 1.0 / 400.0);
    sim.courant = get_number_or(grid, "grid", "courant", 0.5);
    sim.xi_min = get_number(grid, "grid", "xi_min");
    sim.xi_max = get_number(grid, "grid", "xi_max");

    if (!j.contains("medium"))
        throw ConfigError("config: missing required section 'medium'");
    const json& med = j.at("medium");
    check_keys(med, "medium", {"d", "delta", "L", "xi_start"});
    sim.medium.d = get_number(med, "medium", "d");
    if (sim.medium.d > 0.0) {
        sim.medium.delta = get_number(med, "medium", "delta");
        sim.medium.length = get_number(med, "medium", "L");
    } else {
        sim.medium.delta = get_number_or(med, "medium", "delta", 0.25);
        sim.medium.length = get_number_or(med, "medium", "L", 0.0);
    }
    sim.medium.xi_start = get_number_or(med, "medium", "xi_start", 0.0);

    const json pulse = j.contains("pulse") ? j.at("pulse") : json::object();
    check_keys(pulse, "pulse", {"omega0", "Omega0", "tau_p_fs", "xi0", "truncation_tol"});
    sim.pulse.omega0 = get_number_or(pulse, "pulse", "omega0", 2.3);
    sim.pulse.rabi0 = get_number_or(pulse, "pulse", "Omega0", 1.4);
    sim.pulse.tau_p_fs = get_number_or(pulse, "pulse", "tau_p_fs", 5.0);
    sim.pulse.truncation_tol = get_number_or(pulse, "pulse", "truncation_tol", 1e-6);
    if (pulse.contains("xi0"))
        sim.xi0 = get_number(pulse, "pulse", "xi0");

    const json relax = j.contains("relaxation") ? j.at("relaxation") : json::object();
    check_keys(relax, "relaxation", {"T1_fs", "T2_fs"});
    sim.relax.T1_fs = get_lifetime(relax, "relaxation", "T1_fs",
                                   std::numeric_limits<double>::infinity());
    sim.relax.T2_fs = get_lifetime(relax, "relaxation", "T2_fs",
                                   std::numeric_limits<double>::infinity());

    const json stepper = j.contains("stepper") ? j.at("stepper") : json::object();
    check_keys(stepper, "stepper", {"scheme", "boundary"});
    sim.stepper.scheme = parse_scheme(get_string_or(stepper, "stepper", "scheme", "bloch-rk4"));
    sim.stepper.boundary =
        parse_boundary(get_string_or(stepper, "stepper", "boundary", "mur1"));

    const json sched = j.contains("schedule") ? j.at("schedule") : json::object();
    check_keys(sched, "schedule",
               {"snapshot_times_ps", "probe_positions_xi", "trace_conserved",
                "spectrum_probe_stride", "trace_stride"});
    sim.schedule.snapshot_times_ps = get_number_list(sched, "schedule", "snapshot_times_ps");
    sim.schedule.probe_positions_xi = get_number_list(sched, "schedule", "probe_positions_xi");
    sim.schedule.trace_conserved = get_bool_or(sched, "schedule", "trace_conserved", false);
    sim.schedule.spectrum_probe_stride =
        get_integer_or(sched, "schedule", "spectrum_probe_stride", 1);
    sim.schedule.trace_stride = get_integer_or(sched, "schedule", "trace_stride", 1);

    if (!j.contains("t_end_ps"))
        throw ConfigError("config: missing required field 't_end_ps'");
    if (!j.at("t_end_ps").is_number())
        throw ConfigError("config: 't_end_ps' must be a number");
    sim.t_end_ps = j.at("t_end_ps").get<double>();

    if (j.contains("analysis")) {
        const json& an = j.at("analysis");
        if (!an.is_array())
            throw ConfigError("config: 'analysis' must be an array");
        for (std::size_t i = 0; i < an.size(); ++i)
            cfg.analysis.push_back(parse_analysis_entry(an[i], i));
    }

    const json out = j.contains("output") ? j.at("output") : json::object();
    check_keys(out, "output", {"dir", "binary_snapshots"});
    cfg.output.dir = get_string_or(out, "output", "dir", "");
    cfg.output.binary_snapshots = get_bool_or(out, "output", "binary_snapshots", false);

    validate_config(cfg);
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into line/column for the message.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream msg;
        msg << "config: parse error in " << path.string() << " at line " << line
            << ", column " << col << ": " << e.what();
        throw ConfigError(msg.str());
    }
    return parse_config_json(j);
}

void validate_config(const ExperimentConfig& cfg) {
    ResolvedSetup setup = resolve_setup(cfg.sim); // grid, profile, pulse/xi0 checks
    // Pulse placement and field arrays.
    std::vector<double> E, H;
    init_pulse(setup.grid, setup.pulse, cfg.sim.medium, E, H);

    // Schedule bounds (run() re-checks; failing early gives parse-time errors).
    for (double t_ps : cfg.sim.schedule.snapshot_times_ps) {
        if (t_ps < 0.0 || t_ps > cfg.sim.t_end_ps + 1e-12)
            throw ConfigError("config: snapshot time " + std::to_string(t_ps) +
                              " ps is outside the run duration");
    }
    for (double xi : cfg.sim.schedule.probe_positions_xi) {
        if (!setup.grid.contains(xi))
            throw ConfigError("config: probe position xi = " + std::to_string(xi) +
                              " is outside the grid");
    }
    if (cfg.sim.schedule.spectrum_probe_stride < 1)
        throw ConfigError("config: schedule.spectrum_probe_stride must be >= 1");
    if (cfg.sim.schedule.trace_stride < 1)
        throw ConfigError("config: schedule.trace_stride must be >= 1");
}

json serialize_config(const ExperimentConfig& cfg) {
    const SimulationConfig& sim = cfg.sim;
    json j;
    j["grid"] = {{"dxi", sim.dxi},
                 {"courant", sim.courant},
                 {"xi_min", sim.xi_min},
                 {"xi_max", sim.xi_max}};
    j["medium"] = {{"d", sim.medium.d},
                   {"delta", sim.medium.delta},
                   {"L", sim.medium.length},
                   {"xi_start", sim.medium.xi_start}};
    json pulse = {{"omega0", sim.pulse.omega0},
                  {"Omega0", sim.pulse.rabi0},
                  {"tau_p_fs", sim.pulse.tau_p_fs},
                  {"truncation_tol", sim.pulse.truncation_tol}};
    if (sim.xi0) pulse["xi0"] = *sim.xi0;
    j["pulse"] = pulse;
    json relax;
    if (std::isinf(sim.relax.T1_fs))
        relax["T1_fs"] = "inf";
    else
        relax["T1_fs"] = sim.relax.T1_fs;
    if (std::isinf(sim.relax.T2_fs))
        relax["T2_fs"] = "inf";
    else
        relax["T2_fs"] = sim.relax.T2_fs;
    j["relaxation"] = relax;
    j["stepper"] = {{"scheme", scheme_name(sim.stepper.scheme)},
                    {"boundary", boundary_name(sim.stepper.boundary)}};
    j["schedule"] = {{"snapshot_times_ps", sim.schedule.snapshot_times_ps},
                     {"probe_positions_xi", sim.schedule.probe_positions_xi},
                     {"trace_conserved", sim.schedule.trace_conserved},
                     {"spectrum_probe_stride", sim.schedule.spectrum_probe_stride},
                     {"trace_stride", sim.schedule.trace_stride}};
    j["t_end_ps"] = sim.t_end_ps;
    json an = json::array();
    for (const auto& req : cfg.analysis) {
        json entry = req.args;
        entry["op"] = req.op;
        entry["name"] = req.name;
        an.push_back(entry);
    }
    j["analysis"] = an;
    j["output"] = {{"dir", cfg.output.dir}, {"binary_snapshots", cfg.output.binary_snapshots}};
    return j;
}

bool config_equal(const ExperimentConfig& a, const ExperimentConfig& b) {
    return serialize_config(a) == serialize_config(b);
}

} // namespace gapsol
