#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Matrix-weighted consensus: verify, synthesize, simulate and analyze neighbor graphs"};
    app.require_subcommand(1);

    mwcons::CommandOptions opts;
    std::string scenario;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t steps = 0;
    double tol = 0.0;

    auto add_common = [&](CLI::App* cmd, bool needs_scenario) {
        auto* s = cmd->add_option("--scenario", scenario, "Scenario JSON file");
        if (needs_scenario) {
            s->required()->check(CLI::ExistingFile);
        }
        cmd->add_option("--out", out, "Directory for output files");
        cmd->add_option("--seed", seed, "Seed for random initial states");
        cmd->add_option("--steps", steps, "Override the scenario's step count");
        cmd->add_option("--tol", tol, "Relative rank tolerance for the verifier")->check(CLI::PositiveNumber);
    };

    auto* verify = app.add_subcommand("verify", "Check well-configuration; exit 0 if well-configured, 2 if not");
    auto* synth = app.add_subcommand("synth", "Synthesize verified weights from an ear decomposition");
    auto* run = app.add_subcommand("run", "Simulate the scenario's algorithm and write trajectory + summary");
    auto* analyze = app.add_subcommand("analyze", "Spectral report of the round update matrix");
    auto* counter = app.add_subcommand("counterexample", "Run the bundled well-configured non-converging instance");
    for (auto* cmd : {verify, synth, run, analyze}) {
        add_common(cmd, true);
    }
    add_common(counter, false);

    CLI11_PARSE(app, argc, argv);

    auto* chosen = app.get_subcommands().front();
    if (!scenario.empty()) {
        opts.scenario = scenario;
    }
    if (!out.empty()) {
        opts.out = out;
    }
    if (chosen->count("--seed") > 0) {
        opts.seed = seed;
    }
    if (chosen->count("--steps") > 0) {
        opts.steps = steps;
    }
    if (chosen->count("--tol") > 0) {
        opts.tol = tol;
    }

    if (chosen == verify) {
        return mwcons::cmd_verify(opts, std::cout, std::cerr);
    }
    if (chosen == synth) {
        return mwcons::cmd_synth(opts, std::cout, std::cerr);
    }
    if (chosen == run) {
        return mwcons::cmd_run(opts, std::cout, std::cerr);
    }
    if (chosen == analyze) {
        return mwcons::cmd_analyze(opts, std::cout, std::cerr);
    }
    return mwcons::cmd_counterexample(opts, std::cout, std::cerr);
}
