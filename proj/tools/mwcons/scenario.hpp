#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mwc/ear.hpp"
#include "mwc/graph.hpp"
#include "mwc/simulator.hpp"
#include "mwc/wellconfig.hpp"

namespace mwcons {

inline constexpr int kSchemaVersion = 1;

struct SynthesisSpec {
    mwc::KernelMode mode = mwc::KernelMode::nonzero;
    bool symmetric = false;
    /// "auto", "pair_cycle", or a path to a decomposition JSON file.
    std::string decomposition = "auto";
};

struct WeightsSpec {
    enum class Source { explicit_matrices, identity, synthesize, file };
    Source source = Source::identity;
    std::vector<mwc::Matrix> matrices;  // canonical arc order
    SynthesisSpec synthesis;
    std::filesystem::path file;
};

struct AlgorithmSpec {
    mwc::Algorithm name = mwc::Algorithm::fixed_step;
    std::size_t steps = 100;
    mwc::StepsizeSchedule stepsize;
    std::optional<mwc::Schedule> schedule;
    bool project_init = false;
    bool stop_at_consensus = false;
};

struct InitialStateSpec {
    enum class Source { explicit_values, random, consensus };
    Source source = Source::random;
    mwc::Vector values;  // explicit: stacked m*n; consensus: n
    std::optional<std::uint64_t> seed;
    double scale = 1.0;
};

struct Scenario {
    std::string name;
    /// Directory relative paths inside the scenario resolve against.
    std::filesystem::path base_dir;
    mwc::DirectedGraph graph;
    int n = 0;
    WeightsSpec weights;
    std::optional<AlgorithmSpec> algorithm;
    std::optional<InitialStateSpec> initial_state;
    std::optional<std::filesystem::path> output_dir;
};

/// Throws mwc::ParseError naming the offending line (syntax) or JSON path
/// (content) for malformed scenarios, including unknown keys.
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);

/// Weighted neighbor graph described by the scenario. Synthesized weights are
/// verified before they are returned; `decomposition` receives the ear
/// decomposition used, if any.
mwc::WeightedNeighborGraph resolve_weights(const Scenario& s, mwc::EarDecomposition* decomposition = nullptr);

/// x(0) stacked agent-major. Random states draw each entry uniformly from
/// [-scale, scale) with mt19937_64; `seed_override` replaces the scenario seed.
/// Throws mwc::InvalidArgument when randomness is requested without a seed.
mwc::Vector resolve_initial_state(const Scenario& s, std::optional<std::uint64_t> seed_override = std::nullopt);

/// The bundled three-agent counterexample scenario.
std::string_view counterexample_scenario_text();

}  // namespace mwcons
