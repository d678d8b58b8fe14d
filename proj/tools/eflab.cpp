// Command-line front end: scenario-driven integrations, classifications,
// theorem checks, IC-grid scans, and the built-in acceptance corpus.
//
// Exit codes: 0 all items passed; 1 any item or criterion failed;
// 2 configuration error.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eflab/eflab.hpp"

namespace {

struct CliOptions {
    std::string scenario_path;
    std::optional<std::string> out_path;
    std::optional<std::string> format;
    std::optional<double> rtol;
    std::optional<double> atol;
    std::optional<double> t_end;
    int jobs = 1;
    long seed = 0;  // reserved; all computations are deterministic
};

void add_common_options(CLI::App* cmd, CliOptions& opts, bool scenario_required) {
    auto* sc = cmd->add_option("--scenario", opts.scenario_path, "scenario file path");
    if (scenario_required) sc->required();
    cmd->add_option("--out", opts.out_path, "output file path (default: stdout)");
    cmd->add_option("--format", opts.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--rtol", opts.rtol, "override relative tolerance");
    cmd->add_option("--atol", opts.atol, "override absolute tolerance");
    cmd->add_option("--t-end", opts.t_end, "override integration end time");
    cmd->add_option("--jobs", opts.jobs, "parallel workers for IC scans")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opts.seed, "reserved, unused: runs are deterministic");
}

int run_command(eflab::ScenarioKind kind, const CliOptions& opts) {
    using namespace eflab;

    ScenarioConfig cfg;
    if (!opts.scenario_path.empty()) {
        cfg = parse_scenario(opts.scenario_path);
        if (cfg.kind != kind)
            throw ConfigError(std::string("scenario kind '") + to_string(cfg.kind) +
                              "' does not match subcommand '" + to_string(kind) + "'");
    } else {
        cfg.kind = kind;  // corpus runs without a scenario file
    }

    if (opts.rtol) cfg.controls.rtol = *opts.rtol;
    if (opts.atol) cfg.controls.atol = *opts.atol;
    if (opts.t_end) {
        if (!cfg.problem)
            throw ConfigError("--t-end given but the scenario has no [problem] section");
        cfg.problem->t_end = *opts.t_end;
    }
    if (opts.out_path) cfg.out_path = *opts.out_path;
    if (opts.format) cfg.out_format = *opts.format;
    if (cfg.out_format == "csv" && cfg.kind != ScenarioKind::Integrate)
        throw ConfigError("format = csv is only available for trajectory exports (integrate)");

    const auto t_start = std::chrono::steady_clock::now();
    RunReport report = run_scenario(cfg, opts.jobs);
    const auto elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    const std::string payload =
        cfg.out_format == "csv" ? report.csv : render_json(report.document);

    if (!cfg.out_path.empty()) {
        write_text_file(cfg.out_path, payload);
        std::cout << report.summary << "\n" << std::flush;
    } else if (kind == ScenarioKind::Corpus) {
        std::cout << report.summary << "\n" << std::flush;
    } else {
        std::cout << payload << std::flush;
        std::cerr << report.summary << "\n";
    }
    std::fprintf(stderr, "completed in %.3f s\n", elapsed);
    return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for n-th order Emden-Fowler asymptotics"};
    app.set_version_flag("--version", std::string(eflab::kToolVersion));
    app.require_subcommand(1);

    CliOptions opts;
    struct Sub {
        const char* name;
        const char* desc;
        eflab::ScenarioKind kind;
        bool scenario_required;
    };
    const Sub subs[] = {
        {"integrate", "integrate an initial-value problem", eflab::ScenarioKind::Integrate, true},
        {"classify", "classify a sampled function from CSV", eflab::ScenarioKind::Classify, true},
        {"verify", "run theorem checks for an equation", eflab::ScenarioKind::Verify, true},
        {"scan", "IC-grid scan: exclusion + dichotomy", eflab::ScenarioKind::Scan, true},
        {"corpus", "run the built-in acceptance corpus", eflab::ScenarioKind::Corpus, false},
    };
    for (const auto& s : subs) {
        auto* cmd = app.add_subcommand(s.name, s.desc);
        add_common_options(cmd, opts, s.scenario_required);
        cmd->callback([kind = s.kind, &opts]() {
            // propagated to main through the exception-free exit-code path
            int code = run_command(kind, opts);
            if (code != 0) throw CLI::RuntimeError(code);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const eflab::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
