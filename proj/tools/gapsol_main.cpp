// gapsol command-line driver: run / sweep / analyze.
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gapsol/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"gapsol: 1D Maxwell-Bloch FDTD for few-cycle gap solitons"};
    app.require_subcommand(1);
    app.fallthrough();

    int threads = 0;
    bool quiet = false;
    app.add_option("--threads", threads, "concurrent sweep points (single runs step serially)");
    app.add_flag("--quiet", quiet, "suppress progress output");

    std::string run_config;
    std::optional<std::string> run_out;
    auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
    run_cmd->add_option("config", run_config, "experiment config JSON")->required();
    std::string run_out_str;
    auto* run_out_opt = run_cmd->add_option("--out", run_out_str, "output directory");

    std::string sweep_config, axis_spec, axis2_spec;
    std::string sweep_out_str;
    auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
    sweep_cmd->add_option("config", sweep_config, "template config JSON")->required();
    sweep_cmd->add_option("--axis", axis_spec, "axis spec, e.g. medium.d=0.1,0.2,0.4")
        ->required();
    auto* axis2_opt = sweep_cmd->add_option("--axis2", axis2_spec, "second axis spec");
    auto* sweep_out_opt = sweep_cmd->add_option("--out", sweep_out_str, "output directory");

    std::string analyze_dir, analyze_spec;
    auto* analyze_cmd = app.add_subcommand("analyze", "re-run analyses on a stored run");
    analyze_cmd->add_option("run_dir", analyze_dir, "run directory with a manifest")
        ->required();
    analyze_cmd->add_option("--spec", analyze_spec, "analysis spec JSON")->required();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        std::optional<std::string> out;
        if (run_out_opt->count()) out = run_out_str;
        return gapsol::cmd_run(run_config, out, quiet);
    }
    if (sweep_cmd->parsed()) {
        try {
            gapsol::SweepAxis axis = gapsol::parse_axis_spec(axis_spec);
            std::optional<gapsol::SweepAxis> axis2;
            if (axis2_opt->count()) axis2 = gapsol::parse_axis_spec(axis2_spec);
            std::optional<std::string> out;
            if (sweep_out_opt->count()) out = sweep_out_str;
            return gapsol::cmd_sweep(sweep_config, axis, axis2, out, quiet, threads);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 1;
        }
    }
    if (analyze_cmd->parsed())
        return gapsol::cmd_analyze(analyze_dir, analyze_spec, quiet);
    return 1;
}
