#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "mwc/ear.hpp"
#include "mwc/graph.hpp"
#include "mwc/simulator.hpp"
#include "mwc/spectral.hpp"
#include "mwc/wellconfig.hpp"

namespace mwc {

// File formats. Vertices are 1-based in every file and 0-based in memory.
// Parse failures throw ParseError with the line (and column, for JSON) of
// the offending input.

/// Graph text: header "m d" (vertex count, arc count), then d lines "j i",
/// one per arc from j to i. Blank lines and lines starting with '#' are
/// skipped.
DirectedGraph parse_graph_text(std::string_view text);
std::string format_graph_text(const DirectedGraph& g);

/// {"m": m, "n": n, "arcs": [{"j": j, "i": i, "C": [[...], ...]}, ...]}
WeightedNeighborGraph parse_weights_json(std::string_view text);
std::string format_weights_json(const WeightedNeighborGraph& w);

/// {"symmetric": bool, "ears": [{"kind": "cycle"|"path", "arcs": [[j, i], ...]}]}
EarDecomposition parse_decomposition_json(std::string_view text);
std::string format_decomposition_json(const EarDecomposition& d);

/// {"well_configured", "kernel_dim", "witness"?: [[x_1], ..., [x_m]]}
std::string format_verify_json(const WellConfigReport& r, int n);

std::string format_spectral_json(const SpectralReport& r);

/// {"algorithm", "steps_run", "final_consensus_error", "final_residual",
///  "converged", "spectral": {"ones", "zeros", "inside_unit", "outside"}}
std::string format_summary_json(Algorithm a, const Trajectory& t, const std::optional<SpectralReport>& spectral);

/// Header "t,agent,comp_1,...,comp_n"; one row per round and agent, agents
/// 1-based, values in shortest round-trip form.
void write_trajectory_csv(std::ostream& out, const Trajectory& t);

/// Shortest decimal that reads back to the same double.
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace mwc
