#include "mwc/ear.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "mwc/error.hpp"

namespace mwc {

namespace {

std::string vtx(int v) { return std::to_string(v + 1); }

std::span<const Arc> forward_arcs(const Ear& ear, bool symmetric) {
    std::span<const Arc> all = ear.arcs;
    return symmetric ? all.first(all.size() / 2) : all;
}

Ear make_ear(const std::vector<int>& seq, bool symmetric) {
    Ear ear;
    ear.kind = seq.front() == seq.back() ? EarKind::cycle : EarKind::path;
    for (std::size_t t = 0; t + 1 < seq.size(); ++t) {
        ear.arcs.push_back({seq[t], seq[t + 1]});
    }
    if (symmetric) {
        for (std::size_t t = seq.size() - 1; t > 0; --t) {
            ear.arcs.push_back({seq[t], seq[t - 1]});
        }
    }
    return ear;
}

// Shortest walk start -> ... -> some vertex accepted by `is_target`, moving
// only through vertices rejected by it. `skip_first` names a neighbor of
// `start` that may not be used as the first step (the edge we came in on).
template <typename Target>
std::vector<int> shortest_attachment(const DirectedGraph& g, int start, Target is_target, int skip_first) {
    const auto m = static_cast<std::size_t>(g.vertex_count());
    std::vector<int> parent(m, -1);
    std::vector<bool> seen(m, false);
    std::deque<int> queue{start};
    seen[static_cast<std::size_t>(start)] = true;
    while (!queue.empty()) {
        const int x = queue.front();
        queue.pop_front();
        for (int w : g.out_neighbors(x)) {
            if (x == start && w == skip_first) {
                continue;
            }
            if (is_target(w)) {
                std::vector<int> seq{w, x};
                for (int p = parent[static_cast<std::size_t>(x)]; p != -1; p = parent[static_cast<std::size_t>(p)]) {
                    seq.push_back(p);
                }
                std::reverse(seq.begin(), seq.end());
                return seq;
            }
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = true;
                parent[static_cast<std::size_t>(w)] = x;
                queue.push_back(w);
            }
        }
    }
    return {};
}

struct Builder {
    const DirectedGraph& g;
    bool symmetric;
    std::vector<bool> used;
    std::vector<bool> visited;
    EarDecomposition result;

    Builder(const DirectedGraph& graph, bool sym)
        : g(graph),
          symmetric(sym),
          used(graph.arc_count(), false),
          visited(static_cast<std::size_t>(graph.vertex_count()), false) {
        result.symmetric = sym;
    }

    void add(const std::vector<int>& seq) {
        Ear ear = make_ear(seq, symmetric);
        for (const Arc& a : ear.arcs) {
            used[*g.arc_index(a.tail, a.head)] = true;
        }
        for (int v : seq) {
            visited[static_cast<std::size_t>(v)] = true;
        }
        result.ears.push_back(std::move(ear));
    }

    std::optional<Arc> next_open_arc() const {
        for (std::size_t k = 0; k < g.arc_count(); ++k) {
            const Arc& a = g.arc(k);
            if (!used[k] && visited[static_cast<std::size_t>(a.tail)]) {
                return a;
            }
        }
        return std::nullopt;
    }

    void attach_all() {
        while (auto open = next_open_arc()) {
            const int u = open->tail;
            const int v = open->head;
            if (visited[static_cast<std::size_t>(v)]) {
                add({u, v});
                continue;
            }
            auto rest = shortest_attachment(
                g, v, [&](int w) { return visited[static_cast<std::size_t>(w)]; }, symmetric ? u : -1);
            if (rest.empty()) {
                throw InvalidArgument("arc (" + vtx(u) + "," + vtx(v) + ") cannot be attached as an ear");
            }
            rest.insert(rest.begin(), u);
            add(rest);
        }
    }
};

std::optional<std::string> check_ear_shape(const DirectedGraph& g, const Ear& ear, bool symmetric,
                                           std::size_t index) {
    const std::string where = "ear " + std::to_string(index) + ": ";
    if (ear.arcs.empty()) {
        return where + "no arcs";
    }
    for (const Arc& a : ear.arcs) {
        if (!g.has_arc(a.tail, a.head)) {
            return where + "arc (" + vtx(a.tail) + "," + vtx(a.head) + ") is not in the graph";
        }
    }
    if (symmetric) {
        if (ear.arcs.size() % 2 != 0) {
            return where + "symmetric ear with an odd arc count";
        }
        const auto fwd = forward_arcs(ear, true);
        for (std::size_t t = 0; t < fwd.size(); ++t) {
            const Arc& back = ear.arcs[ear.arcs.size() - 1 - t];
            if (back.tail != fwd[t].head || back.head != fwd[t].tail) {
                return where + "reverse half does not mirror the forward traversal";
            }
        }
    }
    const auto fwd = forward_arcs(ear, symmetric);
    for (std::size_t t = 0; t + 1 < fwd.size(); ++t) {
        if (fwd[t].head != fwd[t + 1].tail) {
            return where + "arcs do not chain head-to-tail";
        }
    }
    const std::vector<int> seq = ear_vertices(ear, symmetric);
    const bool closed = seq.front() == seq.back();
    if (closed != (ear.kind == EarKind::cycle)) {
        return where + (closed ? "closed traversal labelled as a path" : "open traversal labelled as a cycle");
    }
    std::vector<int> distinct(seq.begin(), closed ? seq.end() - 1 : seq.end());
    std::sort(distinct.begin(), distinct.end());
    if (std::adjacent_find(distinct.begin(), distinct.end()) != distinct.end()) {
        return where + "traversal repeats a vertex";
    }
    if (closed && symmetric && fwd.size() < 3) {
        return where + "symmetric cycle needs at least three two-length cycles";
    }
    return std::nullopt;
}

}  // namespace

std::size_t EarDecomposition::ear_length(std::size_t i) const {
    const Ear& ear = ears.at(i);
    return symmetric ? ear.pair_count() : ear.arc_count();
}

std::size_t EarDecomposition::max_ear_length() const {
    std::size_t best = 0;
    for (std::size_t i = 0; i < ears.size(); ++i) {
        best = std::max(best, ear_length(i));
    }
    return best;
}

std::vector<int> ear_vertices(const Ear& ear, bool symmetric) {
    const auto fwd = forward_arcs(ear, symmetric);
    std::vector<int> seq;
    if (fwd.empty()) {
        return seq;
    }
    seq.push_back(fwd.front().tail);
    for (const Arc& a : fwd) {
        seq.push_back(a.head);
    }
    return seq;
}

EarDecomposition ear_decomposition(const DirectedGraph& g) {
    if (g.vertex_count() < 2 || !is_strongly_connected(g)) {
        throw InvalidArgument("an ear decomposition exists only for strongly connected graphs with at least two vertices");
    }
    Builder b(g, false);
    const int root = 0;
    auto cycle = shortest_attachment(g, root, [&](int w) { return w == root; }, -1);
    b.add(cycle);
    b.attach_all();
    return std::move(b.result);
}

EarDecomposition symmetric_ear_decomposition(const DirectedGraph& g) {
    if (!is_symmetric(g)) {
        throw InvalidArgument("symmetric ear decomposition needs a symmetric graph");
    }
    if (g.vertex_count() < 2 || !is_2_connected(g)) {
        throw InvalidArgument("a symmetric ear decomposition exists only for 2-connected symmetric graphs");
    }
    Builder b(g, true);
    const int root = 0;
    const int first = g.out_neighbors(root).front();
    auto back = shortest_attachment(g, first, [&](int w) { return w == root; }, root);
    back.insert(back.begin(), root);
    b.add(back);
    b.attach_all();
    return std::move(b.result);
}

EarDecomposition pair_cycle_decomposition(const DirectedGraph& g) {
    if (!is_symmetric(g) || g.vertex_count() < 2 || !is_strongly_connected(g)) {
        throw InvalidArgument("pair-cycle decomposition needs a symmetric strongly connected graph");
    }
    EarDecomposition d;
    std::vector<bool> used(g.arc_count(), false);
    std::vector<bool> visited(static_cast<std::size_t>(g.vertex_count()), false);
    std::deque<int> queue{0};
    visited[0] = true;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : g.out_neighbors(u)) {
            if (visited[static_cast<std::size_t>(v)]) {
                continue;
            }
            visited[static_cast<std::size_t>(v)] = true;
            queue.push_back(v);
            d.ears.push_back(Ear{EarKind::cycle, {{u, v}, {v, u}}});
            used[*g.arc_index(u, v)] = true;
            used[*g.arc_index(v, u)] = true;
        }
    }
    for (std::size_t k = 0; k < g.arc_count(); ++k) {
        if (!used[k]) {
            d.ears.push_back(Ear{EarKind::path, {g.arc(k)}});
        }
    }
    return d;
}

std::optional<std::string> find_ear_decomposition_defect(const DirectedGraph& g, const EarDecomposition& d) {
    if (d.ears.empty()) {
        return "decomposition has no ears";
    }
    std::vector<int> owner(g.arc_count(), -1);
    std::set<int> seen_vertices;
    for (std::size_t i = 0; i < d.ears.size(); ++i) {
        const Ear& ear = d.ears[i];
        if (auto defect = check_ear_shape(g, ear, d.symmetric, i)) {
            return defect;
        }
        for (const Arc& a : ear.arcs) {
            auto& o = owner[*g.arc_index(a.tail, a.head)];
            if (o != -1) {
                return "arc (" + vtx(a.tail) + "," + vtx(a.head) + ") belongs to ears " + std::to_string(o) +
                       " and " + std::to_string(i);
            }
            o = static_cast<int>(i);
        }
        const std::vector<int> seq = ear_vertices(ear, d.symmetric);
        const std::string where = "ear " + std::to_string(i) + ": ";
        if (i == 0) {
            if (ear.kind != EarKind::cycle) {
                return std::string("ear 0 must be a cycle");
            }
        } else {
            std::vector<int> common;
            for (std::size_t t = 0; t < seq.size(); ++t) {
                if (ear.kind == EarKind::cycle && t + 1 == seq.size()) {
                    break;
                }
                if (seen_vertices.count(seq[t]) != 0) {
                    common.push_back(seq[t]);
                }
            }
            if (ear.kind == EarKind::cycle && common.size() != 1) {
                return where + "cycle shares " + std::to_string(common.size()) +
                       " vertices with earlier ears, expected exactly one";
            }
            if (ear.kind == EarKind::path) {
                const bool ends_only = common.size() == 2 && seen_vertices.count(seq.front()) != 0 &&
                                       seen_vertices.count(seq.back()) != 0;
                if (!ends_only) {
                    return where + "path must meet earlier ears exactly at its two end-vertices";
                }
            }
        }
        seen_vertices.insert(seq.begin(), seq.end());
    }
    for (std::size_t k = 0; k < g.arc_count(); ++k) {
        if (owner[k] == -1) {
            const Arc& a = g.arc(k);
            return "arc (" + vtx(a.tail) + "," + vtx(a.head) + ") is not covered by any ear";
        }
    }
    return std::nullopt;
}

}  // namespace mwc
