#include "mwc/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "mwc/error.hpp"

namespace mwc {

namespace {

std::string arc_text(const Arc& a) {
    return "(" + std::to_string(a.tail + 1) + "," + std::to_string(a.head + 1) + ")";
}

std::vector<bool> reachable_from(const DirectedGraph& g, int source, bool forward) {
    std::vector<bool> seen(static_cast<std::size_t>(g.vertex_count()), false);
    std::deque<int> queue{source};
    seen[static_cast<std::size_t>(source)] = true;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int w : forward ? g.out_neighbors(v) : g.in_neighbors(v)) {
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = true;
                queue.push_back(w);
            }
        }
    }
    return seen;
}

bool all_true(const std::vector<bool>& v) {
    return std::all_of(v.begin(), v.end(), [](bool b) { return b; });
}

}  // namespace

DirectedGraph::DirectedGraph(int vertex_count, std::vector<Arc> arcs)
    : vertex_count_(vertex_count), arcs_(std::move(arcs)) {
    if (vertex_count_ < 1) {
        throw InvalidArgument("graph needs at least one vertex");
    }
    for (const Arc& a : arcs_) {
        if (a.tail < 0 || a.tail >= vertex_count_ || a.head < 0 || a.head >= vertex_count_) {
            throw InvalidArgument("arc " + arc_text(a) + " references a vertex outside 1.." +
                                  std::to_string(vertex_count_));
        }
        if (a.tail == a.head) {
            throw InvalidArgument("self-arc " + arc_text(a) + " is not allowed");
        }
    }
    std::sort(arcs_.begin(), arcs_.end(), canonical_less);
    const auto dup = std::adjacent_find(arcs_.begin(), arcs_.end());
    if (dup != arcs_.end()) {
        throw InvalidArgument("duplicate arc " + arc_text(*dup));
    }

    in_.resize(static_cast<std::size_t>(vertex_count_));
    out_.resize(static_cast<std::size_t>(vertex_count_));
    for (const Arc& a : arcs_) {
        in_[static_cast<std::size_t>(a.head)].push_back(a.tail);
        out_[static_cast<std::size_t>(a.tail)].push_back(a.head);
    }
    for (auto& o : out_) {
        std::sort(o.begin(), o.end());
    }
}

std::optional<std::size_t> DirectedGraph::arc_index(int tail, int head) const {
    const Arc key{tail, head};
    const auto it = std::lower_bound(arcs_.begin(), arcs_.end(), key, canonical_less);
    if (it == arcs_.end() || *it != key) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - arcs_.begin());
}

std::span<const int> DirectedGraph::in_neighbors(int v) const {
    return in_.at(static_cast<std::size_t>(v));
}

std::span<const int> DirectedGraph::out_neighbors(int v) const {
    return out_.at(static_cast<std::size_t>(v));
}

DirectedGraph DirectedGraph::without(std::span<const Arc> removed) const {
    std::vector<Arc> kept;
    kept.reserve(arcs_.size());
    for (const Arc& a : arcs_) {
        if (std::find(removed.begin(), removed.end(), a) == removed.end()) {
            kept.push_back(a);
        }
    }
    return DirectedGraph(vertex_count_, std::move(kept));
}

DirectedGraph make_directed_cycle(int m) {
    std::vector<Arc> arcs;
    for (int v = 0; v < m; ++v) {
        arcs.push_back({v, (v + 1) % m});
    }
    return DirectedGraph(m, std::move(arcs));
}

DirectedGraph make_directed_path(int m) {
    std::vector<Arc> arcs;
    for (int v = 0; v + 1 < m; ++v) {
        arcs.push_back({v, v + 1});
    }
    return DirectedGraph(m, std::move(arcs));
}

DirectedGraph make_symmetric(int m, std::span<const std::pair<int, int>> edges) {
    std::vector<Arc> arcs;
    for (const auto& [a, b] : edges) {
        arcs.push_back({a, b});
        arcs.push_back({b, a});
    }
    return DirectedGraph(m, std::move(arcs));
}

DirectedGraph make_complete_symmetric(int m) {
    std::vector<Arc> arcs;
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            if (a != b) {
                arcs.push_back({a, b});
            }
        }
    }
    return DirectedGraph(m, std::move(arcs));
}

bool is_weakly_connected(const DirectedGraph& g) {
    const auto m = static_cast<std::size_t>(g.vertex_count());
    std::vector<bool> seen(m, false);
    std::deque<int> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (auto nbrs : {g.out_neighbors(v), g.in_neighbors(v)}) {
            for (int w : nbrs) {
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    return all_true(seen);
}

bool is_strongly_connected(const DirectedGraph& g) {
    return all_true(reachable_from(g, 0, true)) && all_true(reachable_from(g, 0, false));
}

bool is_rooted(const DirectedGraph& g) {
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (all_true(reachable_from(g, v, true))) {
            return true;
        }
    }
    return false;
}

bool is_symmetric(const DirectedGraph& g) {
    return std::all_of(g.arcs().begin(), g.arcs().end(),
                       [&](const Arc& a) { return g.has_arc(a.head, a.tail); });
}

bool is_2_connected(const DirectedGraph& g) {
    if (!is_symmetric(g)) {
        throw InvalidArgument("2-connectivity is defined for symmetric graphs only");
    }
    if (!is_strongly_connected(g)) {
        return false;
    }
    for (const Arc& a : g.arcs()) {
        if (a.tail > a.head) {
            continue;
        }
        const Arc pair[] = {a, Arc{a.head, a.tail}};
        if (!is_strongly_connected(g.without(pair))) {
            return false;
        }
    }
    return true;
}

bool is_directed_cycle(const DirectedGraph& g) {
    if (g.vertex_count() < 2) {
        return false;
    }
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (g.in_degree(v) != 1 || g.out_degree(v) != 1) {
            return false;
        }
    }
    return is_strongly_connected(g);
}

bool is_spanning_subgraph(const DirectedGraph& g, const DirectedGraph& sub) {
    if (g.vertex_count() != sub.vertex_count()) {
        return false;
    }
    return std::all_of(sub.arcs().begin(), sub.arcs().end(),
                       [&](const Arc& a) { return g.has_arc(a.tail, a.head); });
}

Eigen::MatrixXd incidence_matrix(const DirectedGraph& g) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(g.vertex_count(), static_cast<Eigen::Index>(g.arc_count()));
    for (std::size_t k = 0; k < g.arc_count(); ++k) {
        const Arc& a = g.arc(k);
        j(a.head, static_cast<Eigen::Index>(k)) = 1.0;
        j(a.tail, static_cast<Eigen::Index>(k)) = -1.0;
    }
    return j;
}

Eigen::MatrixXd spanning_incidence_matrix(const DirectedGraph& g, const DirectedGraph& sub) {
    if (!is_spanning_subgraph(g, sub)) {
        throw InvalidArgument("subgraph is not a spanning subgraph of the neighbor graph");
    }
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(g.vertex_count(), static_cast<Eigen::Index>(g.arc_count()));
    for (std::size_t k = 0; k < g.arc_count(); ++k) {
        const Arc& a = g.arc(k);
        if (sub.has_arc(a.tail, a.head)) {
            j(a.head, static_cast<Eigen::Index>(k)) = 1.0;
            j(a.tail, static_cast<Eigen::Index>(k)) = -1.0;
        }
    }
    return j;
}

Eigen::MatrixXd head_indicator_matrix(const DirectedGraph& g) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(g.vertex_count(), static_cast<Eigen::Index>(g.arc_count()));
    for (std::size_t k = 0; k < g.arc_count(); ++k) {
        h(g.arc(k).head, static_cast<Eigen::Index>(k)) = 1.0;
    }
    return h;
}

}  // namespace mwc
