#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mwc/graph.hpp"

namespace mwc {

enum class EarKind { cycle, path };

/// One ear in traversal order. For a symmetric ear the forward traversal
/// v0 -> v1 -> ... -> vk is followed by the reverse arcs vk -> ... -> v0, so
/// `arcs` always lists every arc the ear owns.
struct Ear {
    EarKind kind = EarKind::cycle;
    std::vector<Arc> arcs;

    std::size_t arc_count() const { return arcs.size(); }
    /// Number of two-length cycles {(a,b),(b,a)} covered by the ear.
    std::size_t pair_count() const { return arcs.size() / 2; }

    friend bool operator==(const Ear&, const Ear&) = default;
};

struct EarDecomposition {
    std::vector<Ear> ears;
    bool symmetric = false;

    /// Length l(E) of ear i: arc count, or two-length-cycle count when the
    /// decomposition is symmetric.
    std::size_t ear_length(std::size_t i) const;
    std::size_t max_ear_length() const;

    friend bool operator==(const EarDecomposition&, const EarDecomposition&) = default;
};

/// Vertex sequence visited by an ear's forward traversal. Cycles repeat the
/// start vertex at the end.
std::vector<int> ear_vertices(const Ear& ear, bool symmetric);

/// Deterministic ear decomposition of a strongly connected graph: the shortest
/// cycle through vertex 0 first, then, scanning arcs in canonical order, the
/// shortest attachment through unvisited vertices for the first unused arc
/// leaving the visited set. Throws InvalidArgument unless g is strongly
/// connected with m >= 2.
EarDecomposition ear_decomposition(const DirectedGraph& g);

/// Symmetric ear decomposition of a symmetric 2-connected graph. Throws
/// InvalidArgument otherwise.
EarDecomposition symmetric_ear_decomposition(const DirectedGraph& g);

/// Ordinary ear decomposition of a symmetric strongly connected graph with
/// every ear of length at most two: a BFS tree's two-length cycles, then the
/// remaining arcs one by one as single-arc paths.
EarDecomposition pair_cycle_decomposition(const DirectedGraph& g);

/// First structural defect of `d` as a decomposition of `g`, or nullopt if it
/// is a valid (symmetric, if flagged) ear decomposition.
std::optional<std::string> find_ear_decomposition_defect(const DirectedGraph& g,
                                                         const EarDecomposition& d);

inline bool is_valid_ear_decomposition(const DirectedGraph& g, const EarDecomposition& d) {
    return !find_ear_decomposition_defect(g, d).has_value();
}

/// Caps for the exhaustive chi search.
struct ChiLimits {
    int max_vertices = 8;
    std::size_t max_arcs = 16;
};

/// chi(g) = min over all ear decompositions of the longest ear (arc count),
/// computed by exhaustive search with memoization over used-arc sets. Throws
/// InvalidArgument for graphs that are not strongly connected and
/// EnumerationInfeasible when `limits` are exceeded.
int chi(const DirectedGraph& g, const ChiLimits& limits = {});

}  // namespace mwc
