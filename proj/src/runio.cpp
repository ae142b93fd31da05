#include "gapsol/runio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "gapsol/binfile.hpp"
#include "gapsol/checksum.hpp"
#include "gapsol/fit.hpp"
#include "gapsol/metrics.hpp"
#include "gapsol/spectrum.hpp"

namespace gapsol {

using nlohmann::json;

namespace {

std::string fmt_fixed(double x, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
    return std::string(buf);
}

std::string snapshot_filename(double requested_ps) {
    return "snap_t" + fmt_fixed(requested_ps, 4) + "ps.csv";
}

std::string probe_filename(double xi_requested) {
    return "probe_xi" + fmt_fixed(xi_requested, 4) + ".csv";
}

std::optional<Range> range_arg(const json& args, const std::string& key) {
    if (!args.contains(key)) return std::nullopt;
    return Range{args.at(key)[0].get<double>(), args.at(key)[1].get<double>()};
}

// Time windows are configured in fs; analysis works in T = t * omega0.
std::optional<Range> t_range_arg(const json& args, const std::string& key, double omega0) {
    auto r = range_arg(args, key);
    if (!r) return std::nullopt;
    return Range{r->lo * omega0, r->hi * omega0};
}

Envelope source_envelope(const RunRecord& rec, const json& args) {
    if (args.contains("snapshot_ps"))
        return envelope_space(rec, args.at("snapshot_ps").get<double>(),
                              range_arg(args, "xi_range"));
    return envelope_time(rec, args.at("probe_xi").get<double>(),
                         t_range_arg(args, "t_range_fs", rec.pulse.omega0));
}

json lobes_json(const std::vector<Lobe>& lobes) {
    json out = json::array();
    for (const auto& l : lobes)
        out.push_back({{"position", l.position}, {"peak", l.peak}, {"fwhm", l.fwhm}});
    return out;
}

} // namespace

json execute_analyses(const RunRecord& rec, const std::vector<AnalysisRequest>& requests,
                      std::vector<std::pair<std::string, CsvTable>>& extra_csvs) {
    json metrics = json::object();
    for (const auto& req : requests) {
        const json& args = req.args;
        json out;

        if (req.op == "envelope") {
            Envelope env = source_envelope(rec, args);
            const bool space = env.axis == EnvelopeAxis::SpaceAtFixedT;
            CsvTable table;
            table.header = {space ? "xi" : "t_fs", "amplitude"};
            for (std::size_t i = 0; i < env.samples.size(); ++i) {
                const double coord =
                    space ? env.coordinates[i] : env.coordinates[i] / rec.pulse.omega0;
                table.rows.push_back({coord, env.samples[i]});
            }
            extra_csvs.emplace_back(req.name + ".csv", std::move(table));
            const PeakInfo pk = envelope_peak(env);
            out["peak_coordinate"] = space ? pk.position : pk.position / rec.pulse.omega0;
            out["peak_value"] = pk.value;
            const double fwhm = intensity_fwhm(env);
            out["fwhm"] = space ? fwhm : fwhm / rec.pulse.omega0;
            out["axis"] = space ? "space" : "time";
        } else if (req.op == "cycle_number") {
            Envelope env = source_envelope(rec, args);
            const double vg = args.contains("vg") ? args.at("vg").get<double>() : 1.0;
            out["value"] = cycle_number(env, vg);
            out["axis"] = env.axis == EnvelopeAxis::SpaceAtFixedT ? "space" : "time";
        } else if (req.op == "spectrum") {
            const SpectrumWindow window =
                parse_window(args.contains("window") ? args.at("window").get<std::string>()
                                                     : "hann");
            Spectrum spec;
            if (args.contains("probe_xi")) {
                std::optional<Range> gate;
                if (args.contains("gate")) {
                    if (args.at("gate").is_string())
                        gate = auto_reflected_gate(rec);
                    else
                        gate = t_range_arg(args, "gate", rec.pulse.omega0);
                }
                spec = spectrum_probe(rec, args.at("probe_xi").get<double>(), window, gate);
            } else {
                spec = spectrum_snapshot(rec, args.at("snapshot_ps").get<double>(), window,
                                         range_arg(args, "xi_range"));
            }
            CsvTable table;
            table.header = {"omega_over_omega0", "power"};
            for (std::size_t k = 0; k < spec.frequencies.size(); ++k)
                table.rows.push_back({spec.frequencies[k], spec.power[k]});
            extra_csvs.emplace_back(req.name + ".csv", std::move(table));
            out["peak_omega_over_omega0"] = spec.peak_frequency();
            out["bin_width"] = spec.bin_width();
            if (spec.gate_T)
                out["gate_fs"] = {spec.gate_T->lo / rec.pulse.omega0,
                                  spec.gate_T->hi / rec.pulse.omega0};
            out["csv"] = req.name + ".csv";
        } else if (req.op == "group_velocity") {
            auto res = group_velocity(rec, args.at("t1_ps").get<double>(),
                                      args.at("t2_ps").get<double>(), range_arg(args, "xi_range"),
                                      args.contains("threshold")
                                          ? args.at("threshold").get<double>()
                                          : 0.1);
            out["value"] = res.vg;
            out["split"] = res.split;
            json lobes = json::array();
            for (const auto& l : res.lobes)
                lobes.push_back(
                    {{"label", l.label}, {"vg", l.vg}, {"xi1", l.xi1}, {"xi2", l.xi2}});
            out["lobes"] = lobes;
        } else if (req.op == "pulse_area") {
            Envelope env = source_envelope(rec, args);
            const double vg = args.contains("vg") ? args.at("vg").get<double>() : 1.0;
            const double area = pulse_area(env, rec.pulse.rabi0, rec.pulse.omega0, vg);
            out["value"] = area;
            out["over_pi"] = area / M_PI;
        } else if (req.op == "fit_soliton") {
            FitRequest freq;
            if (args.contains("snapshot_ps")) {
                freq.axis = EnvelopeAxis::SpaceAtFixedT;
                freq.snapshot_ps = args.at("snapshot_ps").get<double>();
                freq.search_range = range_arg(args, "search_xi");
            } else {
                freq.axis = EnvelopeAxis::TimeAtFixedXi;
                freq.probe_xi = args.at("probe_xi").get<double>();
                freq.search_range = t_range_arg(args, "search_t_fs", rec.pulse.omega0);
            }
            if (args.contains("vg_seed"))
                freq.vg_seed = args.at("vg_seed").get<double>();
            const SolitonFit fit = fit_soliton(rec, freq);
            out["vg"] = fit.vg;
            out["tau"] = fit.tau;
            out["center"] = fit.center;
            out["phi"] = fit.phi;
            out["phi_over_pi"] = fit.phi / M_PI;
            out["amplitude_scale"] = fit.amplitude_scale;
            out["rms_residual"] = fit.rms_residual;
            out["converged"] = fit.converged;
            out["axis"] = freq.axis == EnvelopeAxis::SpaceAtFixedT ? "space" : "time";
        } else if (req.op == "detect_lobes") {
            Envelope env = envelope_space(rec, args.at("snapshot_ps").get<double>(),
                                          range_arg(args, "xi_range"));
            const double thr =
                args.contains("threshold") ? args.at("threshold").get<double>() : 0.1;
            auto lobes = detect_lobes(env, thr);
            out["count"] = lobes.size();
            out["lobes"] = lobes_json(lobes);
            CsvTable table;
            table.header = {"position", "peak", "fwhm"};
            for (const auto& l : lobes) table.rows.push_back({l.position, l.peak, l.fwhm});
            extra_csvs.emplace_back(req.name + ".csv", std::move(table));
            out["csv"] = req.name + ".csv";
        } else if (req.op == "inversion_stats") {
            auto stats = inversion_stats(rec, args.at("snapshot_ps").get<double>());
            out["n_layers"] = stats.layers.size();
            out["n_inverted"] = stats.inverted_layers.size();
            out["global_max_w"] = stats.global_max_w;
            out["mean_w_spread"] = stats.mean_w_spread;
            out["inverted_layers"] = stats.inverted_layers;
            CsvTable table;
            table.header = {"layer", "xi_begin", "mean_w", "max_w"};
            for (const auto& ls : stats.layers)
                table.rows.push_back({double(ls.layer), ls.xi_begin, ls.mean_w, ls.max_w});
            extra_csvs.emplace_back(req.name + ".csv", std::move(table));
            out["csv"] = req.name + ".csv";
        } else if (req.op == "shape_correlation") {
            out["value"] = shape_correlation(rec, args.at("t1_ps").get<double>(),
                                             args.at("t2_ps").get<double>(),
                                             range_arg(args, "xi_range"));
        } else {
            throw ConfigError("analysis: unknown op '" + req.op + "'");
        }
        metrics[req.name] = std::move(out);
    }
    return metrics;
}

RunOutputs write_run_outputs(const RunRecord& rec, const ExperimentConfig& cfg,
                             const std::filesystem::path& dir, double wall_clock_s) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);

    RunOutputs out;
    out.dir = dir;

    json manifest;
    manifest["config"] = serialize_config(cfg);
    manifest["code_version"] = kCodeVersion;
    manifest["n_cells"] = rec.grid.n_cells;
    manifest["n_steps"] = rec.n_steps;
    manifest["resolved_xi0"] = rec.pulse.xi0;
    manifest["wall_clock_s"] = wall_clock_s;

    json snap_meta = json::array();
    for (const auto& snap : rec.snapshots) {
        const std::string name = snapshot_filename(snap.requested_ps);
        CsvTable table;
        table.header = {"xi", "E", "w"};
        table.rows.reserve(snap.E.size());
        for (long i = 0; i < rec.grid.n_cells; ++i)
            table.rows.push_back(
                {rec.grid.node_xi(i), snap.E[size_t(i)], snap.w[size_t(i)]});
        write_csv(dir / name, table);
        out.files.push_back(name);
        if (cfg.output.binary_snapshots) {
            std::vector<double> flat;
            flat.reserve(3 * snap.E.size());
            for (long i = 0; i < rec.grid.n_cells; ++i) flat.push_back(rec.grid.node_xi(i));
            flat.insert(flat.end(), snap.E.begin(), snap.E.end());
            flat.insert(flat.end(), snap.w.begin(), snap.w.end());
            const std::string bin_name = name.substr(0, name.size() - 4) + ".bin";
            write_bin(dir / bin_name, flat);
            out.files.push_back(bin_name);
        }
        snap_meta.push_back({{"file", name},
                             {"requested_ps", snap.requested_ps},
                             {"T", snap.T},
                             {"step", snap.step}});
    }
    manifest["snapshots"] = snap_meta;

    json probe_meta = json::array();
    for (const auto& probe : rec.probes) {
        const std::string name = probe_filename(probe.xi_requested);
        CsvTable table;
        table.header = {"t_fs", "E"};
        table.rows.reserve(probe.E.size());
        for (std::size_t k = 0; k < probe.E.size(); ++k)
            table.rows.push_back(
                {double(k) * probe.sample_dT / rec.pulse.omega0, probe.E[k]});
        write_csv(dir / name, table);
        out.files.push_back(name);
        probe_meta.push_back({{"file", name},
                              {"xi_requested", probe.xi_requested},
                              {"xi_actual", probe.xi_actual},
                              {"node", probe.node},
                              {"stride", probe.stride}});
    }
    manifest["probes"] = probe_meta;

    if (!rec.conserved.empty()) {
        CsvTable table;
        table.header = {"T", "em_energy", "bloch_norm_max_dev"};
        for (const auto& c : rec.conserved)
            table.rows.push_back({c.T, c.em_energy, c.bloch_norm_max_dev});
        write_csv(dir / "conserved.csv", table);
        out.files.push_back("conserved.csv");
    }

    std::vector<std::pair<std::string, CsvTable>> extra_csvs;
    json metrics = execute_analyses(rec, cfg.analysis, extra_csvs);
    for (auto& [name, table] : extra_csvs) {
        write_csv(dir / name, table);
        out.files.push_back(name);
    }

    json energy = {{"initial_total", rec.energy.initial_total},
                   {"final_left", rec.energy.final_left},
                   {"final_inside", rec.energy.final_inside},
                   {"final_right", rec.energy.final_right},
                   {"final_total", rec.energy.final_total},
                   {"transmitted_fraction", rec.energy.transmitted_fraction}};

    out.results["metrics"] = metrics;
    out.results["energy"] = energy;
    out.results["n_steps"] = rec.n_steps;
    out.results["resolved_xi0"] = rec.pulse.xi0;
    out.results["code_version"] = kCodeVersion;
    {
        std::ofstream rf(dir / "results.json", std::ios::binary);
        rf << out.results.dump(2) << '\n';
    }
    out.files.push_back("results.json");

    manifest["energy"] = energy;
    json checksums = json::object();
    for (const auto& name : out.files)
        checksums[name] = checksum_file(dir / name);
    manifest["files"] = checksums;
    {
        std::ofstream mf(dir / "manifest.json", std::ios::binary);
        mf << manifest.dump(2) << '\n';
    }
    return out;
}

namespace {

json load_manifest_checked(const std::filesystem::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in)
        throw IntegrityError("run dir: missing manifest " + manifest_path.string());
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::parse_error& e) {
        throw IntegrityError("run dir: corrupt manifest: " + std::string(e.what()));
    }
    for (auto it = manifest.at("files").begin(); it != manifest.at("files").end(); ++it) {
        const auto path = dir / it.key();
        if (!std::filesystem::exists(path))
            throw IntegrityError("run dir: missing file " + path.string());
        const std::string actual = checksum_file(path);
        if (actual != it.value().get<std::string>())
            throw IntegrityError("run dir: checksum mismatch for " + path.string() +
                                 " (expected " + it.value().get<std::string>() + ", got " +
                                 actual + ")");
    }
    return manifest;
}

} // namespace

bool run_dir_valid(const std::filesystem::path& dir) {
    try {
        load_manifest_checked(dir);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

RunRecord load_run_record(const std::filesystem::path& dir) {
    const json manifest = load_manifest_checked(dir);
    const ExperimentConfig cfg = parse_config_json(manifest.at("config"));
    ResolvedSetup setup = resolve_setup(cfg.sim);

    RunRecord rec;
    rec.grid = setup.grid;
    rec.medium = cfg.sim.medium;
    rec.profile = setup.profile;
    rec.pulse = setup.pulse;
    rec.relax = cfg.sim.relax;
    rec.stepper = cfg.sim.stepper;
    rec.schedule = cfg.sim.schedule;
    rec.t_end_ps = cfg.sim.t_end_ps;
    rec.n_steps = manifest.at("n_steps").get<long>();

    for (const auto& meta : manifest.at("snapshots")) {
        Snapshot snap;
        snap.requested_ps = meta.at("requested_ps").get<double>();
        snap.T = meta.at("T").get<double>();
        snap.step = meta.at("step").get<long>();
        CsvTable table = read_csv(dir / meta.at("file").get<std::string>());
        const std::size_t e_col = table.column("E");
        const std::size_t w_col = table.column("w");
        snap.E.reserve(table.rows.size());
        snap.w.reserve(table.rows.size());
        for (const auto& row : table.rows) {
            snap.E.push_back(row[e_col]);
            snap.w.push_back(row[w_col]);
        }
        if (long(snap.E.size()) != rec.grid.n_cells)
            throw IntegrityError("run dir: snapshot length does not match the grid");
        rec.snapshots.push_back(std::move(snap));
    }

    for (const auto& meta : manifest.at("probes")) {
        ProbeSeries probe;
        probe.xi_requested = meta.at("xi_requested").get<double>();
        probe.xi_actual = meta.at("xi_actual").get<double>();
        probe.node = meta.at("node").get<long>();
        probe.stride = meta.at("stride").get<long>();
        probe.sample_dT = double(probe.stride) * rec.grid.dT;
        CsvTable table = read_csv(dir / meta.at("file").get<std::string>());
        const std::size_t e_col = table.column("E");
        probe.E.reserve(table.rows.size());
        for (const auto& row : table.rows) probe.E.push_back(row[e_col]);
        rec.probes.push_back(std::move(probe));
    }

    if (manifest.contains("energy")) {
        const json& e = manifest.at("energy");
        rec.energy.initial_total = e.at("initial_total").get<double>();
        rec.energy.final_left = e.at("final_left").get<double>();
        rec.energy.final_inside = e.at("final_inside").get<double>();
        rec.energy.final_right = e.at("final_right").get<double>();
        rec.energy.final_total = e.at("final_total").get<double>();
        rec.energy.transmitted_fraction = e.at("transmitted_fraction").get<double>();
    }
    return rec;
}

} // namespace gapsol
