#include <algorithm>
#include <cstdint>
#include <limits>
#include <unordered_map>

#include "mwc/ear.hpp"
#include "mwc/error.hpp"

namespace mwc {

namespace {

using Mask = std::uint64_t;
constexpr int kUnreachable = std::numeric_limits<int>::max();

class ChiSearch {
public:
    explicit ChiSearch(const DirectedGraph& g) : g_(g), full_(g.arc_count() == 64 ? ~Mask{0} : (Mask{1} << g.arc_count()) - 1) {}

    int run() {
        int best = kUnreachable;
        for (const auto& [cycle, length] : initial_cycles()) {
            if (length >= best) {
                continue;
            }
            best = std::min(best, std::max(length, remaining(cycle)));
        }
        return best;
    }

private:
    struct Candidate {
        Mask arcs;
        int length;
    };

    Mask bit(int tail, int head) const { return Mask{1} << *g_.arc_index(tail, head); }

    std::vector<bool> visited_vertices(Mask used) const {
        std::vector<bool> visited(static_cast<std::size_t>(g_.vertex_count()), false);
        for (std::size_t k = 0; k < g_.arc_count(); ++k) {
            if ((used >> k) & 1U) {
                visited[static_cast<std::size_t>(g_.arc(k).tail)] = true;
                visited[static_cast<std::size_t>(g_.arc(k).head)] = true;
            }
        }
        return visited;
    }

    // Every simple directed cycle, each listed once (rooted at its smallest vertex).
    std::vector<Candidate> initial_cycles() const {
        std::vector<Candidate> out;
        const auto m = static_cast<std::size_t>(g_.vertex_count());
        for (int s = 0; s < g_.vertex_count(); ++s) {
            std::vector<bool> on_path(m, false);
            on_path[static_cast<std::size_t>(s)] = true;
            cycles_from(s, s, 0, 0, on_path, out);
        }
        return out;
    }

    void cycles_from(int s, int x, Mask arcs, int length, std::vector<bool>& on_path,
                     std::vector<Candidate>& out) const {
        for (int w : g_.out_neighbors(x)) {
            if (w == s) {
                out.push_back({arcs | bit(x, w), length + 1});
            } else if (w > s && !on_path[static_cast<std::size_t>(w)]) {
                on_path[static_cast<std::size_t>(w)] = true;
                cycles_from(s, w, arcs | bit(x, w), length + 1, on_path, out);
                on_path[static_cast<std::size_t>(w)] = false;
            }
        }
    }

    // Ears that may follow a partial decomposition owning `used`.
    std::vector<Candidate> next_ears(Mask used) const {
        const std::vector<bool> visited = visited_vertices(used);
        std::vector<Candidate> out;
        std::vector<bool> on_path(visited.size(), false);
        for (int u = 0; u < g_.vertex_count(); ++u) {
            if (!visited[static_cast<std::size_t>(u)]) {
                continue;
            }
            for (int v : g_.out_neighbors(u)) {
                const Mask first = bit(u, v);
                if (used & first) {
                    continue;
                }
                if (visited[static_cast<std::size_t>(v)]) {
                    out.push_back({first, 1});
                    continue;
                }
                on_path[static_cast<std::size_t>(v)] = true;
                extend(v, first, 1, visited, on_path, out);
                on_path[static_cast<std::size_t>(v)] = false;
            }
        }
        return out;
    }

    void extend(int x, Mask arcs, int length, const std::vector<bool>& visited, std::vector<bool>& on_path,
                std::vector<Candidate>& out) const {
        for (int w : g_.out_neighbors(x)) {
            const Mask step = arcs | bit(x, w);
            if (visited[static_cast<std::size_t>(w)]) {
                out.push_back({step, length + 1});
            } else if (!on_path[static_cast<std::size_t>(w)]) {
                on_path[static_cast<std::size_t>(w)] = true;
                extend(w, step, length + 1, visited, on_path, out);
                on_path[static_cast<std::size_t>(w)] = false;
            }
        }
    }

    // Min over completions of the longest remaining ear.
    int remaining(Mask used) {
        if (used == full_) {
            return 0;
        }
        if (auto it = memo_.find(used); it != memo_.end()) {
            return it->second;
        }
        int best = kUnreachable;
        auto candidates = next_ears(used);
        std::sort(candidates.begin(), candidates.end(),
                  [](const Candidate& a, const Candidate& b) { return a.length < b.length; });
        for (const Candidate& c : candidates) {
            if (c.length >= best) {
                break;
            }
            const int rest = remaining(used | c.arcs);
            if (rest != kUnreachable) {
                best = std::min(best, std::max(c.length, rest));
            }
        }
        memo_.emplace(used, best);
        return best;
    }

    const DirectedGraph& g_;
    Mask full_;
    std::unordered_map<Mask, int> memo_;
};

}  // namespace

int chi(const DirectedGraph& g, const ChiLimits& limits) {
    if (g.vertex_count() < 2 || !is_strongly_connected(g)) {
        throw InvalidArgument("chi is defined for strongly connected graphs with at least two vertices");
    }
    if (g.vertex_count() > limits.max_vertices || g.arc_count() > limits.max_arcs || g.arc_count() > 64) {
        throw EnumerationInfeasible("enumeration infeasible: graph has " + std::to_string(g.vertex_count()) +
                                    " vertices and " + std::to_string(g.arc_count()) +
                                    " arcs, cap is " + std::to_string(limits.max_vertices) + " vertices / " +
                                    std::to_string(limits.max_arcs) + " arcs");
    }
    const int value = ChiSearch(g).run();
    if (value == kUnreachable) {
        throw Error("no ear decomposition found for a strongly connected graph");
    }
    return value;
}

}  // namespace mwc
