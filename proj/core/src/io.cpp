#include "mwc/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mwc/error.hpp"

namespace mwc {

namespace {

using nlohmann::json;

json parse_document(std::string_view text, const char* what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw ParseError(where + ": " + msg);
}

const json& member(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) {
        fail(where, "expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(where, std::string("missing key \"") + key + "\"");
    }
    return *it;
}

int integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) {
        fail(where, "expected an integer");
    }
    return v.get<int>();
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) {
        fail(where, "expected a number");
    }
    return v.get<double>();
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    for (const auto& [k, _] : obj.items()) {
        if (std::find_if(keys.begin(), keys.end(), [&](const char* allowed) { return k == allowed; }) == keys.end()) {
            fail(where, "unknown key \"" + k + "\"");
        }
    }
}

Arc parse_arc_pair(const json& v, int m, const std::string& where) {
    if (!v.is_array() || v.size() != 2) {
        fail(where, "expected [j, i]");
    }
    const int j = integer(v[0], where + "/0");
    const int i = integer(v[1], where + "/1");
    if (j < 1 || j > m || i < 1 || i > m) {
        fail(where, "vertex outside 1.." + std::to_string(m));
    }
    return {j - 1, i - 1};
}

json matrix_json(const Matrix& c) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < c.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index k = 0; k < c.cols(); ++k) {
            row.push_back(c(r, k));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json spectral_counts(const SpectralReport& r) {
    return {{"ones", r.ones}, {"zeros", r.zeros}, {"inside_unit", r.inside_unit}, {"outside", r.outside}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

DirectedGraph parse_graph_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    int m = -1;
    int d = -1;
    std::vector<Arc> arcs;
    auto where = [&] { return "line " + std::to_string(line_no); };

    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream fields(line);
        long a = 0;
        long b = 0;
        std::string extra;
        if (!(fields >> a >> b) || (fields >> extra)) {
            fail(where(), "expected two integers");
        }
        if (m < 0) {
            if (a < 1 || b < 0) {
                fail(where(), "header needs m >= 1 and d >= 0");
            }
            m = static_cast<int>(a);
            d = static_cast<int>(b);
            continue;
        }
        if (a < 1 || a > m || b < 1 || b > m) {
            fail(where(), "vertex outside 1.." + std::to_string(m));
        }
        if (static_cast<int>(arcs.size()) == d) {
            fail(where(), "more arcs than the " + std::to_string(d) + " declared");
        }
        arcs.push_back({static_cast<int>(a) - 1, static_cast<int>(b) - 1});
    }
    if (m < 0) {
        throw ParseError("graph text: missing \"m d\" header");
    }
    if (static_cast<int>(arcs.size()) != d) {
        throw ParseError("graph text: header declares " + std::to_string(d) + " arcs, found " +
                         std::to_string(arcs.size()));
    }
    try {
        return DirectedGraph(m, std::move(arcs));
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("graph text: ") + e.what());
    }
}

std::string format_graph_text(const DirectedGraph& g) {
    std::string out = std::to_string(g.vertex_count()) + " " + std::to_string(g.arc_count()) + "\n";
    for (const Arc& a : g.arcs()) {
        out += std::to_string(a.tail + 1) + " " + std::to_string(a.head + 1) + "\n";
    }
    return out;
}

WeightedNeighborGraph parse_weights_json(std::string_view text) {
    const json doc = parse_document(text, "weights");
    only_keys(doc, {"m", "n", "arcs"}, "weights");
    const int m = integer(member(doc, "m", "weights"), "weights/m");
    const int n = integer(member(doc, "n", "weights"), "weights/n");
    if (m < 1 || n < 1) {
        fail("weights", "m and n must be positive");
    }
    const json& list = member(doc, "arcs", "weights");
    if (!list.is_array()) {
        fail("weights/arcs", "expected an array");
    }
    std::vector<Arc> arcs;
    std::vector<Matrix> mats;
    for (std::size_t k = 0; k < list.size(); ++k) {
        const std::string where = "weights/arcs/" + std::to_string(k);
        const json& entry = list[k];
        only_keys(entry, {"j", "i", "C"}, where);
        const int j = integer(member(entry, "j", where), where + "/j");
        const int i = integer(member(entry, "i", where), where + "/i");
        if (j < 1 || j > m || i < 1 || i > m) {
            fail(where, "vertex outside 1.." + std::to_string(m));
        }
        const json& rows = member(entry, "C", where);
        if (!rows.is_array()) {
            fail(where + "/C", "expected a list of rows");
        }
        Matrix c(static_cast<Eigen::Index>(rows.size()), n);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const std::string rw = where + "/C/" + std::to_string(r);
            if (!rows[r].is_array() || rows[r].size() != static_cast<std::size_t>(n)) {
                fail(rw, "expected a row of " + std::to_string(n) + " numbers");
            }
            for (int col = 0; col < n; ++col) {
                c(static_cast<Eigen::Index>(r), col) = number(rows[r][static_cast<std::size_t>(col)], rw);
            }
        }
        arcs.push_back({j - 1, i - 1});
        mats.push_back(std::move(c));
    }

    try {
        DirectedGraph g(m, arcs);
        std::vector<Matrix> ordered(mats.size());
        for (std::size_t k = 0; k < arcs.size(); ++k) {
            ordered[*g.arc_index(arcs[k].tail, arcs[k].head)] = std::move(mats[k]);
        }
        return WeightedNeighborGraph(std::move(g), n, std::move(ordered));
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("weights: ") + e.what());
    }
}

std::string format_weights_json(const WeightedNeighborGraph& w) {
    json arcs = json::array();
    for (std::size_t k = 0; k < w.graph().arc_count(); ++k) {
        const Arc& a = w.graph().arc(k);
        arcs.push_back({{"j", a.tail + 1}, {"i", a.head + 1}, {"C", matrix_json(w.weight(k))}});
    }
    json doc = {{"m", w.agent_count()}, {"n", w.n()}, {"arcs", std::move(arcs)}};
    return dump(doc);
}

EarDecomposition parse_decomposition_json(std::string_view text) {
    const json doc = parse_document(text, "decomposition");
    only_keys(doc, {"symmetric", "ears"}, "decomposition");
    EarDecomposition d;
    if (auto it = doc.find("symmetric"); it != doc.end()) {
        if (!it->is_boolean()) {
            fail("decomposition/symmetric", "expected true or false");
        }
        d.symmetric = it->get<bool>();
    }
    const json& ears = member(doc, "ears", "decomposition");
    if (!ears.is_array()) {
        fail("decomposition/ears", "expected an array");
    }
    for (std::size_t e = 0; e < ears.size(); ++e) {
        const std::string where = "decomposition/ears/" + std::to_string(e);
        only_keys(ears[e], {"kind", "arcs"}, where);
        const json& kind = member(ears[e], "kind", where);
        Ear ear;
        if (kind == "cycle") {
            ear.kind = EarKind::cycle;
        } else if (kind == "path") {
            ear.kind = EarKind::path;
        } else {
            fail(where + "/kind", "expected \"cycle\" or \"path\"");
        }
        const json& arcs = member(ears[e], "arcs", where);
        if (!arcs.is_array()) {
            fail(where + "/arcs", "expected an array");
        }
        for (std::size_t k = 0; k < arcs.size(); ++k) {
            ear.arcs.push_back(
                parse_arc_pair(arcs[k], std::numeric_limits<int>::max(), where + "/arcs/" + std::to_string(k)));
        }
        d.ears.push_back(std::move(ear));
    }
    return d;
}

std::string format_decomposition_json(const EarDecomposition& d) {
    json ears = json::array();
    for (const Ear& ear : d.ears) {
        json arcs = json::array();
        for (const Arc& a : ear.arcs) {
            arcs.push_back({a.tail + 1, a.head + 1});
        }
        ears.push_back({{"kind", ear.kind == EarKind::cycle ? "cycle" : "path"}, {"arcs", std::move(arcs)}});
    }
    return dump({{"symmetric", d.symmetric}, {"ears", std::move(ears)}});
}

std::string format_verify_json(const WellConfigReport& r, int n) {
    json doc = {{"well_configured", r.well_configured}, {"kernel_dim", r.kernel_dim}};
    if (r.witness) {
        json agents = json::array();
        for (Eigen::Index i = 0; i < r.witness->size() / n; ++i) {
            json xi = json::array();
            for (int c = 0; c < n; ++c) {
                xi.push_back((*r.witness)(i * n + c));
            }
            agents.push_back(std::move(xi));
        }
        doc["witness"] = std::move(agents);
    }
    return dump(doc);
}

std::string format_spectral_json(const SpectralReport& r) {
    json eig = json::array();
    for (const auto& l : r.eigenvalues) {
        eig.push_back({l.real(), l.imag()});
    }
    json doc = spectral_counts(r);
    doc["positive"] = r.positive;
    doc["negative"] = r.negative;
    doc["symmetric"] = r.symmetric;
    doc["paracontracting"] = r.paracontracting();
    doc["degenerate"] = r.degenerate;
    doc["spectral_radius"] = r.spectral_radius;
    doc["second_modulus"] = r.second_modulus;
    doc["fixed_point_dim"] = r.fixed_point_dim;
    doc["mixed_norm"] = r.mixed_norm;
    doc["eigenvalues"] = std::move(eig);
    return dump(doc);
}

std::string format_summary_json(Algorithm a, const Trajectory& t, const std::optional<SpectralReport>& spectral) {
    json doc = {{"algorithm", to_string(a)},
                {"steps_run", t.steps_run()},
                {"final_consensus_error", t.consensus_error.back()},
                {"final_residual", t.residual.back()},
                {"converged", t.converged()}};
    doc["spectral"] = spectral ? spectral_counts(*spectral) : json(nullptr);
    return dump(doc);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& t) {
    out << "t,agent";
    for (int c = 1; c <= t.n; ++c) {
        out << ",comp_" << c;
    }
    out << '\n';
    for (std::size_t step = 0; step < t.states.size(); ++step) {
        const Vector& x = t.states[step];
        for (int i = 0; i < t.agents; ++i) {
            out << step << ',' << (i + 1);
            for (int c = 0; c < t.n; ++c) {
                out << ',' << format_double(x(static_cast<Eigen::Index>(i) * t.n + c));
            }
            out << '\n';
        }
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << contents;
    if (!out) {
        throw Error("write failed for " + path.string());
    }
}

}  // namespace mwc
