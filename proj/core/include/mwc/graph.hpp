#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mwc {

/// Arc (tail, head): agent `tail` is a neighbor of agent `head` and sends it
/// a signal. Vertices are 0-based inside the library.
struct Arc {
    int tail = 0;
    int head = 0;

    friend bool operator==(const Arc&, const Arc&) = default;
};

/// Agent-major order: by head ascending, then tail ascending.
inline bool canonical_less(const Arc& a, const Arc& b) {
    return a.head != b.head ? a.head < b.head : a.tail < b.tail;
}

/// Simple directed graph without self-arcs. Arcs are stored in canonical
/// (agent-major) order, so arc index k is the same everywhere a per-arc
/// quantity is laid out (incidence columns, weight blocks, files).
class DirectedGraph {
public:
    DirectedGraph() = default;

    /// Throws InvalidArgument on m < 1, out-of-range endpoints, self-arcs or
    /// duplicate arcs.
    DirectedGraph(int vertex_count, std::vector<Arc> arcs);

    int vertex_count() const { return vertex_count_; }
    std::size_t arc_count() const { return arcs_.size(); }
    std::span<const Arc> arcs() const { return arcs_; }
    const Arc& arc(std::size_t k) const { return arcs_.at(k); }

    std::optional<std::size_t> arc_index(int tail, int head) const;
    bool has_arc(int tail, int head) const { return arc_index(tail, head).has_value(); }

    /// Tails of the arcs entering `v`, ascending. These are agent v's neighbors.
    std::span<const int> in_neighbors(int v) const;
    std::span<const int> out_neighbors(int v) const;
    int in_degree(int v) const { return static_cast<int>(in_neighbors(v).size()); }
    int out_degree(int v) const { return static_cast<int>(out_neighbors(v).size()); }

    /// Same vertex set, without the listed arcs.
    DirectedGraph without(std::span<const Arc> removed) const;

    friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
        return a.vertex_count_ == b.vertex_count_ && a.arcs_ == b.arcs_;
    }

private:
    int vertex_count_ = 0;
    std::vector<Arc> arcs_;
    std::vector<std::vector<int>> in_;
    std::vector<std::vector<int>> out_;
};

// Common shapes, 0-based.
DirectedGraph make_directed_cycle(int m);
DirectedGraph make_directed_path(int m);
/// Both orientations of every listed undirected edge.
DirectedGraph make_symmetric(int m, std::span<const std::pair<int, int>> edges);
DirectedGraph make_complete_symmetric(int m);

bool is_weakly_connected(const DirectedGraph& g);
bool is_strongly_connected(const DirectedGraph& g);
/// True when some vertex reaches every other along directed paths.
bool is_rooted(const DirectedGraph& g);
bool is_symmetric(const DirectedGraph& g);
/// Symmetric graph that stays strongly connected after removing any single
/// two-length cycle. Throws InvalidArgument for non-symmetric input.
bool is_2_connected(const DirectedGraph& g);
/// Every vertex has exactly one in- and one out-arc and the graph is one cycle.
bool is_directed_cycle(const DirectedGraph& g);
/// True when every arc of `sub` is an arc of `g` and both have the same vertices.
bool is_spanning_subgraph(const DirectedGraph& g, const DirectedGraph& sub);

/// m x d; column k has +1 at the head and -1 at the tail of arc k.
Eigen::MatrixXd incidence_matrix(const DirectedGraph& g);

/// m x d, indexed by g's arcs; columns of arcs missing from `sub` are zero.
/// Throws InvalidArgument when sub is not a spanning subgraph of g.
Eigen::MatrixXd spanning_incidence_matrix(const DirectedGraph& g, const DirectedGraph& sub);

/// m x d with +1 at the head of each arc only. Used to stack per-agent
/// updates that act on the receiving agent.
Eigen::MatrixXd head_indicator_matrix(const DirectedGraph& g);

}  // namespace mwc
