#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "pv/harness.hpp"

namespace {

void add_common_flags(CLI::App* cmd, pv::ExperimentConfig& cfg) {
    cmd->add_option("--n", cfg.n, "function arity / block size");
    cmd->add_option("--t", cfg.t, "number of heavy characters");
    cmd->add_option("--k", cfg.k, "junta size / amplification parameter");
    cmd->add_option("--L", cfg.L, "design family size");
    cmd->add_option("--eps", cfg.eps, "accuracy parameter");
    cmd->add_option("--delta", cfg.delta, "confidence parameter");
    cmd->add_option("--trials", cfg.trials, "number of trials");
    cmd->add_option("--seed", cfg.seed, "master seed");
    cmd->add_option("--function", cfg.function, "target function descriptor");
    cmd->add_option("--prover", cfg.prover, "prover strategy");
    cmd->add_option("--out", cfg.out, "output path prefix for JSON/CSV reports");
    cmd->add_option("--erm-constant", cfg.erm_constant, "uniform-convergence constant C");
    cmd->add_option("--min-rate", cfg.min_rate, "acceptance-rate gate");
}

int execute(const pv::ExperimentConfig& cfg) {
    pv::AggregateReport report = pv::run_experiment(cfg);
    pv::write_report_files(report);
    std::printf("%s\n", report.to_json().c_str());
    return report.gate_passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interactive-proof learning protocols: experiment runner"};
    app.require_subcommand(1);

    const char* kinds[] = {"glstar",          "verify-fourier-mq", "verify-fourier-re",
                           "estimate-distance", "verify-junta",      "nw-marginal-test",
                           "nw-weak-learner",   "verify-erm",        "verify-erm-semi"};
    pv::ExperimentConfig cfg;
    for (const char* kind : kinds) {
        CLI::App* cmd = app.add_subcommand(kind, std::string("run the ") + kind + " experiment");
        add_common_flags(cmd, cfg);
        cmd->callback([&cfg, kind] { cfg.kind = kind; });
    }

    std::string config_path;
    CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("config", config_path, "key = value config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) cfg = pv::parse_config_file(config_path);
        return execute(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
