#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace mwcons {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kError = 1,
    /// verify: the weighted graph is not well-configured.
    kNotWellConfigured = 2,
};

struct CommandOptions {
    std::optional<std::filesystem::path> scenario;
    /// Output directory; overrides the scenario's output.dir.
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> steps;
    /// Relative rank tolerance for the verifier.
    std::optional<double> tol;
};

int cmd_verify(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_synth(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_analyze(const CommandOptions& opts, std::ostream& out, std::ostream& err);
/// verify + analyze + run on the bundled counterexample scenario.
int cmd_counterexample(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace mwcons
