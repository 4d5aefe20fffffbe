// sbdecoh.cpp - command-line experiment runner

#include <fstream>
#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include <sbdecoh/cli/commands.hpp>

namespace cli = sbdecoh::cli;

int main(int argc, char** argv) {
    CLI::App app{"Coherent-product decoherence of spin-boson registers"};
    app.require_subcommand(1);
    std::string config_path, out_path;
    unsigned threads = 1;
    const std::pair<const char*, const char*> subcommands[] = {
        {"free-decay", "single-qubit coherence trace without pulses (CSV)"},
        {"gamma0", "stationary-start pair dissipative factor (JSON)"},
        {"bangbang", "coherence traces under pulse trains (CSV)"},
        {"sweep", "read-out coherence against pulse frequency at fixed total time (CSV)"},
        {"dfs-report", "decoherence-free condition report for a register (JSON)"},
        {"oracle", "truncated-Fock check of eta for a few discrete modes (JSON)"},
    };
    for (const auto& [name, about] : subcommands) {
        auto* sub = app.add_subcommand(name, about);
        sub->add_option("--config", config_path, "INI experiment config")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_path, "output file (default: stdout)");
        sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cli::kConfigError;
    }
    const std::string name = app.get_subcommands().front()->get_name();

    cli::CommandResult r;
    try {
        r = cli::run_command(name, cli::Config::load(config_path), threads);
    } catch (const cli::ConfigError& e) {
        r = {cli::kConfigError, "", e.what()};
    }
    if (r.exit_code != cli::kOk && r.exit_code != cli::kUnconverged) {
        std::cerr << "error: " << r.error << '\n';
        return r.exit_code;
    }
    if (!r.error.empty()) std::cerr << "warning: " << r.error << '\n';
    if (out_path.empty()) {
        std::cout << r.output;
    } else {
        std::ofstream os(out_path, std::ios::binary);
        if (!(os << r.output)) {
            std::cerr << "error: cannot write " << out_path << '\n';
            return cli::kConfigError;
        }
    }
    return r.exit_code;
}
