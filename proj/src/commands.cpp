#include "gapsol/commands.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "gapsol/csv.hpp"
#include "gapsol/runio.hpp"

namespace gapsol {

using nlohmann::json;

namespace {

std::filesystem::path resolve_out_dir(const std::optional<std::string>& out_dir,
                                      const ExperimentConfig& cfg,
                                      const std::filesystem::path& config_path) {
    if (out_dir) return *out_dir;
    if (!cfg.output.dir.empty()) return cfg.output.dir;
    return std::filesystem::path("runs") / config_path.stem();
}

ProgressFn make_progress(bool quiet) {
    if (quiet) return nullptr;
    return [](long step, long n_steps) {
        std::fprintf(stderr, "\r  step %ld / %ld (%ld%%)", step, n_steps,
                     n_steps > 0 ? 100 * step / n_steps : 100);
        if (step == n_steps) std::fprintf(stderr, "\n");
        std::fflush(stderr);
    };
}

json load_json_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(std::string(what) + ": cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(what) + ": parse error in " + path.string() + ": " +
                          e.what());
    }
}

// Flattens numeric analysis results into (column, value) pairs for sweep rows.
std::vector<std::pair<std::string, double>> flatten_metrics(const json& results) {
    std::vector<std::pair<std::string, double>> out;
    if (!results.contains("metrics")) return out;
    for (auto it = results.at("metrics").begin(); it != results.at("metrics").end(); ++it) {
        std::vector<std::string> keys;
        for (auto f = it.value().begin(); f != it.value().end(); ++f)
            if (f.value().is_number()) keys.push_back(f.key());
        std::sort(keys.begin(), keys.end());
        for (const auto& k : keys) {
            const std::string col = k == "value" ? it.key() : it.key() + "." + k;
            out.emplace_back(col, it.value().at(k).get<double>());
        }
    }
    if (results.contains("energy"))
        out.emplace_back("transmitted_energy_fraction",
                         results.at("energy").at("transmitted_fraction").get<double>());
    return out;
}

json* navigate(json& root, const std::string& dotted_path) {
    json* node = &root;
    std::stringstream ss(dotted_path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    if (parts.empty()) return nullptr;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        node = &(*node)[parts[i]];
    }
    return &(*node)[parts.back()];
}

} // namespace

SweepAxis parse_axis_spec(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= spec.size())
        throw ConfigError("sweep: axis spec must look like field.path=v1,v2,...");
    SweepAxis axis;
    axis.field_path = spec.substr(0, eq);
    std::stringstream ss(spec.substr(eq + 1));
    std::string tok;
    while (std::getline(ss, tok, ','))
        axis.values.push_back(parse_double(tok));
    if (axis.values.empty())
        throw ConfigError("sweep: axis needs at least one value");
    return axis;
}

int cmd_run(const std::filesystem::path& config_path,
            const std::optional<std::string>& out_dir, bool quiet) {
    try {
        const ExperimentConfig cfg = parse_config(config_path);
        const auto dir = resolve_out_dir(out_dir, cfg, config_path);
        if (!quiet)
            std::fprintf(stderr, "run: %s -> %s\n", config_path.string().c_str(),
                         dir.string().c_str());

        const auto t0 = std::chrono::steady_clock::now();
        RunRecord rec = run(cfg.sim, make_progress(quiet));
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        RunOutputs outputs = write_run_outputs(rec, cfg, dir, wall);
        if (!quiet)
            std::fprintf(stderr, "run: wrote %zu files in %.1f s\n", outputs.files.size(),
                         wall);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

int cmd_analyze(const std::filesystem::path& run_dir,
                const std::filesystem::path& spec_path, bool quiet) {
    try {
        const json spec = load_json_file(spec_path, "analyze");
        if (!spec.is_object() || !spec.contains("analysis") || !spec.at("analysis").is_array())
            throw ConfigError("analyze: spec must be an object with an 'analysis' array");
        std::vector<AnalysisRequest> requests;
        // Reuse the config-side validation by parsing each entry verbatim.
        json probe_cfg = json::object();
        const json& an = spec.at("analysis");
        for (std::size_t i = 0; i < an.size(); ++i) {
            json entry = an[i];
            if (!entry.is_object() || !entry.contains("op"))
                throw ConfigError("analyze: analysis entries need an 'op'");
            AnalysisRequest req;
            req.op = entry.at("op").get<std::string>();
            req.name = entry.contains("name") ? entry.at("name").get<std::string>()
                                              : req.op + "_" + std::to_string(i);
            entry.erase("op");
            if (entry.contains("name")) entry.erase("name");
            req.args = entry;
            requests.push_back(std::move(req));
        }

        RunRecord rec = load_run_record(run_dir);
        std::vector<std::pair<std::string, CsvTable>> extra_csvs;
        json metrics = execute_analyses(rec, requests, extra_csvs);
        for (const auto& [name, table] : extra_csvs)
            write_csv(run_dir / name, table);

        json results;
        results["metrics"] = metrics;
        results["code_version"] = kCodeVersion;
        std::ofstream rf(run_dir / "analysis_results.json", std::ios::binary);
        rf << results.dump(2) << '\n';
        if (!quiet)
            std::fprintf(stderr, "analyze: wrote analysis_results.json and %zu CSVs\n",
                         extra_csvs.size());
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

int cmd_sweep(const std::filesystem::path& config_path, const SweepAxis& axis,
              const std::optional<SweepAxis>& axis2,
              const std::optional<std::string>& out_dir, bool quiet, int threads) {
    try {
        const json base = load_json_file(config_path, "sweep");
        { // template must itself be valid
            parse_config_json(base);
        }

        std::filesystem::path dir = out_dir ? std::filesystem::path(*out_dir)
                                            : std::filesystem::path("runs") /
                                                  (config_path.stem().string() + "_sweep");
        std::filesystem::create_directories(dir);

        struct Point {
            std::vector<double> axis_values;
            std::filesystem::path dir;
            bool ok = false;
            json results;
        };
        std::vector<Point> points;
        const std::size_t n2 = axis2 ? axis2->values.size() : 1;
        for (std::size_t i = 0; i < axis.values.size(); ++i) {
            for (std::size_t k = 0; k < n2; ++k) {
                Point p;
                p.axis_values.push_back(axis.values[i]);
                if (axis2) p.axis_values.push_back(axis2->values[k]);
                char label[64];
                std::snprintf(label, sizeof(label), "point_%03zu", points.size());
                p.dir = dir / label;
                points.push_back(std::move(p));
            }
        }

        auto run_point = [&](Point& point) {
            json cfg_json = base;
            json* leaf = navigate(cfg_json, axis.field_path);
            if (!leaf) throw ConfigError("sweep: bad axis path " + axis.field_path);
            *leaf = point.axis_values[0];
            if (axis2) {
                json* leaf2 = navigate(cfg_json, axis2->field_path);
                if (!leaf2) throw ConfigError("sweep: bad axis path " + axis2->field_path);
                *leaf2 = point.axis_values[1];
            }
            try {
                // Skip points whose outputs already exist and verify.
                if (run_dir_valid(point.dir)) {
                    std::ifstream rf(point.dir / "results.json");
                    if (rf) {
                        point.results = json::parse(rf);
                        point.ok = true;
                        if (!quiet)
                            std::fprintf(stderr, "sweep: %s cached\n",
                                         point.dir.string().c_str());
                        return;
                    }
                }
                const ExperimentConfig cfg = parse_config_json(cfg_json);
                const auto t0 = std::chrono::steady_clock::now();
                RunRecord rec = run(cfg.sim, nullptr);
                const double wall =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
                RunOutputs outputs = write_run_outputs(rec, cfg, point.dir, wall);
                point.results = outputs.results;
                point.ok = true;
                if (!quiet)
                    std::fprintf(stderr, "sweep: %s done (%.1f s)\n",
                                 point.dir.string().c_str(), wall);
            } catch (const std::exception& e) {
                point.ok = false;
                std::fprintf(stderr, "sweep: %s failed: %s\n", point.dir.string().c_str(),
                             e.what());
            }
        };

        // Points share nothing and write to distinct directories, so they may
        // run concurrently; the aggregate below keeps axis order regardless.
        if (threads > 1 && points.size() > 1) {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> workers;
            const std::size_t n_workers =
                std::min<std::size_t>(std::size_t(threads), points.size());
            for (std::size_t t = 0; t < n_workers; ++t) {
                workers.emplace_back([&] {
                    for (;;) {
                        const std::size_t idx = next.fetch_add(1);
                        if (idx >= points.size()) return;
                        run_point(points[idx]);
                    }
                });
            }
            for (auto& w : workers) w.join();
        } else {
            for (auto& point : points) run_point(point);
        }

        // Column set from the first successful point keeps rows aligned.
        std::vector<std::string> metric_cols;
        for (const auto& point : points) {
            if (!point.ok) continue;
            for (const auto& [col, _] : flatten_metrics(point.results))
                metric_cols.push_back(col);
            break;
        }

        std::ofstream agg(dir / "sweep.csv", std::ios::binary);
        agg << "point," << axis.field_path;
        if (axis2) agg << ',' << axis2->field_path;
        agg << ",status";
        for (const auto& col : metric_cols) agg << ',' << col;
        agg << '\n';
        for (std::size_t idx = 0; idx < points.size(); ++idx) {
            const auto& point = points[idx];
            agg << idx << ',' << format_double(point.axis_values[0]);
            if (axis2) agg << ',' << format_double(point.axis_values[1]);
            agg << ',' << (point.ok ? "ok" : "failed");
            std::vector<std::pair<std::string, double>> flat;
            if (point.ok) flat = flatten_metrics(point.results);
            for (const auto& col : metric_cols) {
                agg << ',';
                for (const auto& [name, value] : flat) {
                    if (name == col) {
                        agg << format_double(value);
                        break;
                    }
                }
            }
            agg << '\n';
        }
        if (!quiet)
            std::fprintf(stderr, "sweep: wrote %s\n", (dir / "sweep.csv").string().c_str());

        bool any_ok = false;
        for (const auto& point : points) any_ok |= point.ok;
        return any_ok ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

} // namespace gapsol
