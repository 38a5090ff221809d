#include "scenario.hpp"

#include <algorithm>
#include <random>

#include <nlohmann/json.hpp>

#include "mwc/error.hpp"
#include "mwc/io.hpp"

namespace mwcons {

namespace {

using nlohmann::json;
using mwc::ParseError;

[[noreturn]] void fail(const std::string& where, const std::string& msg) { throw ParseError(where + ": " + msg); }

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    if (!obj.is_object()) {
        fail(where, "expected an object");
    }
    for (const auto& [k, _] : obj.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* allowed) { return k == allowed; })) {
            fail(where, "unknown key \"" + k + "\"");
        }
    }
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const char* key, const std::string& where) {
    const json* v = find(obj, key);
    if (v == nullptr) {
        fail(where, std::string("missing key \"") + key + "\"");
    }
    return *v;
}

/// Exactly one of `keys` present; returns its name.
std::string exactly_one(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    std::string found;
    for (const char* k : keys) {
        if (obj.contains(k)) {
            if (!found.empty()) {
                fail(where, "\"" + found + "\" and \"" + k + "\" are mutually exclusive");
            }
            found = k;
        }
    }
    if (found.empty()) {
        std::string names;
        for (const char* k : keys) {
            names += names.empty() ? std::string("\"") + k + "\"" : std::string(", \"") + k + "\"";
        }
        fail(where, "needs one of " + names);
    }
    return found;
}

int integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) {
        fail(where, "expected an integer");
    }
    return v.get<int>();
}

std::size_t count(const json& v, const std::string& where) {
    if (!v.is_number_unsigned()) {
        fail(where, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) {
        fail(where, "expected a number");
    }
    return v.get<double>();
}

bool boolean(const json& v, const std::string& where) {
    if (!v.is_boolean()) {
        fail(where, "expected true or false");
    }
    return v.get<bool>();
}

std::string string(const json& v, const std::string& where) {
    if (!v.is_string()) {
        fail(where, "expected a string");
    }
    return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
    if (!v.is_array()) {
        fail(where, "expected a list of numbers");
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        out.push_back(number(v[k], where + "/" + std::to_string(k)));
    }
    return out;
}

std::vector<mwc::Arc> arc_list(const json& v, int m, bool both_ways, const std::string& where) {
    if (!v.is_array()) {
        fail(where, "expected a list of [j, i] pairs");
    }
    std::vector<mwc::Arc> arcs;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const std::string w = where + "/" + std::to_string(k);
        if (!v[k].is_array() || v[k].size() != 2) {
            fail(w, "expected [j, i]");
        }
        const int j = integer(v[k][0], w + "/0");
        const int i = integer(v[k][1], w + "/1");
        if (j < 1 || j > m || i < 1 || i > m) {
            fail(w, "vertex outside 1.." + std::to_string(m));
        }
        arcs.push_back({j - 1, i - 1});
        if (both_ways) {
            arcs.push_back({i - 1, j - 1});
        }
    }
    return arcs;
}

mwc::DirectedGraph make_graph(int m, std::vector<mwc::Arc> arcs, const std::string& where) {
    try {
        return mwc::DirectedGraph(m, std::move(arcs));
    } catch (const mwc::InvalidArgument& e) {
        fail(where, e.what());
    }
}

/// {"m", "arcs"} or {"m", "edges"} (each edge listed once, both arcs added).
mwc::DirectedGraph inline_graph(const json& v, int m, const std::string& where) {
    const std::string key = exactly_one(v, {"arcs", "edges"}, where);
    return make_graph(m, arc_list(v[key], m, key == "edges", where + "/" + key), where);
}

mwc::DirectedGraph parse_graph(const json& v, const std::filesystem::path& base, const std::string& where) {
    only_keys(v, {"m", "arcs", "edges", "file"}, where);
    if (const json* file = find(v, "file")) {
        if (v.size() != 1) {
            fail(where, "\"file\" excludes inline graph keys");
        }
        const auto path = base / string(*file, where + "/file");
        try {
            return mwc::parse_graph_text(mwc::read_text_file(path));
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ": " + e.what());
        }
    }
    const int m = integer(require(v, "m", where), where + "/m");
    if (m < 1) {
        fail(where + "/m", "must be positive");
    }
    return inline_graph(v, m, where);
}

mwc::Matrix parse_matrix(const json& v, int n, const std::string& where) {
    if (!v.is_array()) {
        fail(where, "expected a list of rows");
    }
    mwc::Matrix c(static_cast<Eigen::Index>(v.size()), n);
    for (std::size_t r = 0; r < v.size(); ++r) {
        const std::vector<double> row = numbers(v[r], where + "/" + std::to_string(r));
        if (row.size() != static_cast<std::size_t>(n)) {
            fail(where + "/" + std::to_string(r), "expected " + std::to_string(n) + " entries");
        }
        for (int k = 0; k < n; ++k) {
            c(static_cast<Eigen::Index>(r), k) = row[static_cast<std::size_t>(k)];
        }
    }
    return c;
}

WeightsSpec parse_weights(const json& v, const mwc::DirectedGraph& g, int n, const std::string& where) {
    only_keys(v, {"explicit", "identity", "synthesize", "file"}, where);
    WeightsSpec spec;
    const std::string key = exactly_one(v, {"explicit", "identity", "synthesize", "file"}, where);
    const std::string w = where + "/" + key;
    const json& body = v[key];

    if (key == "identity") {
        if (!boolean(body, w)) {
            fail(w, "only true is meaningful");
        }
        spec.source = WeightsSpec::Source::identity;
    } else if (key == "file") {
        spec.source = WeightsSpec::Source::file;
        spec.file = string(body, w);
    } else if (key == "synthesize") {
        spec.source = WeightsSpec::Source::synthesize;
        only_keys(body, {"mode", "symmetric", "decomposition"}, w);
        if (const json* mode = find(body, "mode")) {
            const std::string m = string(*mode, w + "/mode");
            if (m == "nonzero") {
                spec.synthesis.mode = mwc::KernelMode::nonzero;
            } else if (m == "free") {
                spec.synthesis.mode = mwc::KernelMode::free;
            } else {
                fail(w + "/mode", "expected \"nonzero\" or \"free\"");
            }
        }
        if (const json* sym = find(body, "symmetric")) {
            spec.synthesis.symmetric = boolean(*sym, w + "/symmetric");
        }
        if (const json* dec = find(body, "decomposition")) {
            spec.synthesis.decomposition = string(*dec, w + "/decomposition");
        }
    } else {
        spec.source = WeightsSpec::Source::explicit_matrices;
        if (!body.is_array()) {
            fail(w, "expected a list of {j, i, C}");
        }
        spec.matrices.resize(g.arc_count());
        std::vector<bool> seen(g.arc_count(), false);
        for (std::size_t k = 0; k < body.size(); ++k) {
            const std::string ew = w + "/" + std::to_string(k);
            only_keys(body[k], {"j", "i", "C"}, ew);
            const int j = integer(require(body[k], "j", ew), ew + "/j");
            const int i = integer(require(body[k], "i", ew), ew + "/i");
            const auto idx = g.arc_index(j - 1, i - 1);
            if (j < 1 || i < 1 || j > g.vertex_count() || i > g.vertex_count() || !idx) {
                fail(ew, "(" + std::to_string(j) + "," + std::to_string(i) + ") is not an arc of the graph");
            }
            if (seen[*idx]) {
                fail(ew, "arc listed twice");
            }
            seen[*idx] = true;
            spec.matrices[*idx] = parse_matrix(require(body[k], "C", ew), n, ew + "/C");
        }
        for (std::size_t k = 0; k < seen.size(); ++k) {
            if (!seen[k]) {
                const mwc::Arc& a = g.arc(k);
                fail(w, "no matrix for arc (" + std::to_string(a.tail + 1) + "," + std::to_string(a.head + 1) + ")");
            }
        }
    }
    return spec;
}

mwc::StepsizeSchedule parse_stepsize(const json& v, const std::string& where) {
    only_keys(v, {"form", "a", "b", "values"}, where);
    mwc::StepsizeSchedule s;
    const std::string form = find(v, "form") ? string(v["form"], where + "/form") : "harmonic";
    if (form == "harmonic") {
        s.form = mwc::StepsizeSchedule::Form::harmonic;
    } else if (form == "constant") {
        s.form = mwc::StepsizeSchedule::Form::constant;
    } else if (form == "scripted") {
        s.form = mwc::StepsizeSchedule::Form::scripted;
        s.script = numbers(require(v, "values", where), where + "/values");
    } else {
        fail(where + "/form", "expected \"harmonic\", \"constant\" or \"scripted\"");
    }
    if (const json* a = find(v, "a")) {
        s.a = number(*a, where + "/a");
    }
    if (const json* b = find(v, "b")) {
        s.b = number(*b, where + "/b");
    }
    try {
        s.validate();
    } catch (const mwc::InvalidArgument& e) {
        fail(where, e.what());
    }
    return s;
}

mwc::Schedule parse_schedule(const json& v, const mwc::DirectedGraph& g, const std::string& where) {
    only_keys(v, {"mode", "subgraphs", "dwell", "script"}, where);
    mwc::Schedule s;
    const std::string mode = string(require(v, "mode", where), where + "/mode");
    if (mode == "fixed") {
        s.mode = mwc::Schedule::Mode::fixed;
    } else if (mode == "periodic") {
        s.mode = mwc::Schedule::Mode::periodic;
    } else if (mode == "scripted") {
        s.mode = mwc::Schedule::Mode::scripted;
    } else {
        fail(where + "/mode", "expected \"fixed\", \"periodic\" or \"scripted\"");
    }
    const json& subs = require(v, "subgraphs", where);
    if (!subs.is_array() || subs.empty()) {
        fail(where + "/subgraphs", "expected a non-empty list");
    }
    for (std::size_t k = 0; k < subs.size(); ++k) {
        const std::string sw = where + "/subgraphs/" + std::to_string(k);
        only_keys(subs[k], {"arcs", "edges"}, sw);
        s.subgraphs.push_back(inline_graph(subs[k], g.vertex_count(), sw));
    }
    if (const json* dwell = find(v, "dwell")) {
        s.dwell = count(*dwell, where + "/dwell");
    }
    if (const json* script = find(v, "script")) {
        if (!script->is_array()) {
            fail(where + "/script", "expected a list of subgraph indices");
        }
        for (std::size_t k = 0; k < script->size(); ++k) {
            s.script.push_back(count((*script)[k], where + "/script/" + std::to_string(k)));
        }
    }
    try {
        s.validate(g);
    } catch (const mwc::InvalidArgument& e) {
        fail(where, e.what());
    }
    return s;
}

AlgorithmSpec parse_algorithm(const json& v, const mwc::DirectedGraph& g, const std::string& where) {
    only_keys(v, {"name", "steps", "stepsize", "schedule", "project_init", "stop_at_consensus"}, where);
    AlgorithmSpec spec;
    const std::string name = string(require(v, "name", where), where + "/name");
    const auto algorithm = mwc::parse_algorithm(name);
    if (!algorithm) {
        fail(where + "/name", "unknown algorithm \"" + name + "\"");
    }
    spec.name = *algorithm;
    if (const json* steps = find(v, "steps")) {
        spec.steps = count(*steps, where + "/steps");
    }
    if (const json* step = find(v, "stepsize")) {
        spec.stepsize = parse_stepsize(*step, where + "/stepsize");
    }
    if (const json* sched = find(v, "schedule")) {
        spec.schedule = parse_schedule(*sched, g, where + "/schedule");
    }
    if (const json* p = find(v, "project_init")) {
        spec.project_init = boolean(*p, where + "/project_init");
    }
    if (const json* stop = find(v, "stop_at_consensus")) {
        spec.stop_at_consensus = boolean(*stop, where + "/stop_at_consensus");
    }
    return spec;
}

InitialStateSpec parse_initial_state(const json& v, int m, int n, const std::string& where) {
    only_keys(v, {"explicit", "random", "consensus"}, where);
    InitialStateSpec spec;
    const std::string key = exactly_one(v, {"explicit", "random", "consensus"}, where);
    const std::string w = where + "/" + key;
    const json& body = v[key];
    if (key == "explicit") {
        spec.source = InitialStateSpec::Source::explicit_values;
        if (!body.is_array() || body.size() != static_cast<std::size_t>(m)) {
            fail(w, "expected " + std::to_string(m) + " agent states");
        }
        spec.values.resize(static_cast<Eigen::Index>(m) * n);
        for (int i = 0; i < m; ++i) {
            const std::string aw = w + "/" + std::to_string(i);
            const std::vector<double> xi = numbers(body[static_cast<std::size_t>(i)], aw);
            if (xi.size() != static_cast<std::size_t>(n)) {
                fail(aw, "expected " + std::to_string(n) + " entries");
            }
            for (int c = 0; c < n; ++c) {
                spec.values(static_cast<Eigen::Index>(i) * n + c) = xi[static_cast<std::size_t>(c)];
            }
        }
    } else if (key == "consensus") {
        spec.source = InitialStateSpec::Source::consensus;
        const std::vector<double> x = numbers(body, w);
        if (x.size() != static_cast<std::size_t>(n)) {
            fail(w, "expected " + std::to_string(n) + " entries");
        }
        spec.values = Eigen::Map<const mwc::Vector>(x.data(), n);
    } else {
        spec.source = InitialStateSpec::Source::random;
        only_keys(body, {"seed", "scale"}, w);
        if (const json* seed = find(body, "seed")) {
            if (!seed->is_number_unsigned()) {
                fail(w + "/seed", "expected an unsigned 64-bit integer");
            }
            spec.seed = seed->get<std::uint64_t>();
        }
        if (const json* scale = find(body, "scale")) {
            spec.scale = number(*scale, w + "/scale");
            if (!(spec.scale > 0.0)) {
                fail(w + "/scale", "must be positive");
            }
        }
    }
    return spec;
}

mwc::EarDecomposition choose_decomposition(const Scenario& s) {
    const SynthesisSpec& spec = s.weights.synthesis;
    if (spec.decomposition == "auto") {
        return spec.symmetric ? mwc::symmetric_ear_decomposition(s.graph) : mwc::ear_decomposition(s.graph);
    }
    if (spec.decomposition == "pair_cycle") {
        return mwc::pair_cycle_decomposition(s.graph);
    }
    const auto path = s.base_dir / spec.decomposition;
    try {
        return mwc::parse_decomposition_json(mwc::read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace

Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    const std::string root = "scenario";
    only_keys(doc,
              {"schema_version", "name", "description", "graph", "n", "weights", "algorithm", "initial_state",
               "output"},
              root);
    const int version = integer(require(doc, "schema_version", root), root + "/schema_version");
    if (version != kSchemaVersion) {
        fail(root + "/schema_version", "unsupported version " + std::to_string(version) + " (expected " +
                                           std::to_string(kSchemaVersion) + ")");
    }

    Scenario s;
    s.base_dir = base_dir;
    if (const json* name = find(doc, "name")) {
        s.name = string(*name, root + "/name");
    }
    if (const json* desc = find(doc, "description")) {
        string(*desc, root + "/description");
    }
    s.graph = parse_graph(require(doc, "graph", root), base_dir, root + "/graph");
    s.n = integer(require(doc, "n", root), root + "/n");
    if (s.n < 1) {
        fail(root + "/n", "must be positive");
    }
    if (const json* w = find(doc, "weights")) {
        s.weights = parse_weights(*w, s.graph, s.n, root + "/weights");
    }
    if (const json* a = find(doc, "algorithm")) {
        s.algorithm = parse_algorithm(*a, s.graph, root + "/algorithm");
    }
    if (const json* x = find(doc, "initial_state")) {
        s.initial_state = parse_initial_state(*x, s.graph.vertex_count(), s.n, root + "/initial_state");
    }
    if (const json* out = find(doc, "output")) {
        only_keys(*out, {"dir"}, root + "/output");
        s.output_dir = base_dir / string(require(*out, "dir", root + "/output"), root + "/output/dir");
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    const std::string text = mwc::read_text_file(path);
    try {
        return parse_scenario(text, path.parent_path());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

mwc::WeightedNeighborGraph resolve_weights(const Scenario& s, mwc::EarDecomposition* decomposition) {
    switch (s.weights.source) {
        case WeightsSpec::Source::identity:
            return mwc::WeightedNeighborGraph::identity(s.graph, s.n);
        case WeightsSpec::Source::explicit_matrices:
            return mwc::WeightedNeighborGraph(s.graph, s.n, s.weights.matrices);
        case WeightsSpec::Source::file: {
            const auto path = s.base_dir / s.weights.file;
            mwc::WeightedNeighborGraph w = mwc::parse_weights_json(mwc::read_text_file(path));
            if (!(w.graph() == s.graph) || w.n() != s.n) {
                throw mwc::InvalidArgument(path.string() + ": weights do not match the scenario graph and n");
            }
            return w;
        }
        case WeightsSpec::Source::synthesize: {
            const mwc::EarDecomposition d = choose_decomposition(s);
            if (decomposition != nullptr) {
                *decomposition = d;
            }
            if (s.weights.synthesis.symmetric) {
                return mwc::synthesize_symmetric(s.graph, s.n, d, s.weights.synthesis.mode);
            }
            return mwc::synthesize(s.graph, s.n, d, s.weights.synthesis.mode);
        }
    }
    throw mwc::InvalidArgument("unknown weights source");
}

mwc::Vector resolve_initial_state(const Scenario& s, std::optional<std::uint64_t> seed_override) {
    if (!s.initial_state) {
        throw mwc::InvalidArgument("scenario has no initial_state");
    }
    const InitialStateSpec& spec = *s.initial_state;
    const int m = s.graph.vertex_count();
    const Eigen::Index size = static_cast<Eigen::Index>(m) * s.n;
    switch (spec.source) {
        case InitialStateSpec::Source::explicit_values:
            return spec.values;
        case InitialStateSpec::Source::consensus: {
            mwc::Vector x(size);
            for (int i = 0; i < m; ++i) {
                x.segment(static_cast<Eigen::Index>(i) * s.n, s.n) = spec.values;
            }
            return x;
        }
        case InitialStateSpec::Source::random: {
            const auto seed = seed_override ? seed_override : spec.seed;
            if (!seed) {
                throw mwc::InvalidArgument("random initial state needs a seed (scenario \"seed\" or --seed)");
            }
            // Built from raw engine output so the stream is identical across
            // standard library implementations.
            std::mt19937_64 rng(*seed);
            mwc::Vector x(size);
            for (Eigen::Index k = 0; k < size; ++k) {
                const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                x(k) = spec.scale * (2.0 * u - 1.0);
            }
            return x;
        }
    }
    throw mwc::InvalidArgument("unknown initial-state source");
}

std::string_view counterexample_scenario_text() {
    static constexpr std::string_view text = R"({
  "schema_version": 1,
  "name": "counterexample",
  "description": "Arcs (1,2),(2,3),(3,1),(2,1); C1 = C2 with kernel span e1, C3 = C4 with kernel span e2. Well-configured, yet (0, y, -y) with y = e1 is a fixed point of the general projection update.",
  "graph": {"m": 3, "arcs": [[1, 2], [2, 3], [3, 1], [2, 1]]},
  "n": 2,
  "weights": {"explicit": [
    {"j": 1, "i": 2, "C": [[0, 1]]},
    {"j": 2, "i": 3, "C": [[0, 1]]},
    {"j": 3, "i": 1, "C": [[1, 0]]},
    {"j": 2, "i": 1, "C": [[1, 0]]}
  ]},
  "algorithm": {"name": "general_projection", "steps": 200},
  "initial_state": {"explicit": [[0, 0], [1, 0], [-1, 0]]}
}
)";
    return text;
}

}  // namespace mwcons
