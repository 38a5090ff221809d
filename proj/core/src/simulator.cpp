#include "mwc/simulator.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "mwc/error.hpp"

namespace mwc {

namespace {

auto segment(const Vector& x, int n, int i) { return x.segment(static_cast<Eigen::Index>(i) * n, n); }

void require_state_size(const WeightedNeighborGraph& w, const Vector& x0) {
    const auto expected = static_cast<Eigen::Index>(w.agent_count()) * w.n();
    if (x0.size() != expected) {
        throw InvalidArgument("initial state has " + std::to_string(x0.size()) + " entries, expected m*n = " +
                              std::to_string(expected));
    }
}

void require_symmetric(const DirectedGraph& g, const char* algorithm) {
    if (!is_symmetric(g)) {
        throw InvalidArgument(std::string(algorithm) + " needs a symmetric neighbor graph");
    }
}

// Q_k = C_ij'C_ij + C_ji'C_ji for arc k = (j, i) of a symmetric graph.
std::vector<Matrix> pair_terms(const WeightedNeighborGraph& w) {
    const DirectedGraph& g = w.graph();
    std::vector<Matrix> q(g.arc_count());
    for (std::size_t k = 0; k < g.arc_count(); ++k) {
        const Arc& a = g.arc(k);
        const Matrix& in = w.weight(k);
        const Matrix& out = w.weight(a.head, a.tail);
        q[k] = in.transpose() * in + out.transpose() * out;
    }
    return q;
}

// P_k = C_k' C_k for row-normalized weights.
std::vector<Matrix> arc_projectors(const WeightedNeighborGraph& normalized) {
    std::vector<Matrix> p;
    p.reserve(normalized.weights().size());
    for (const Matrix& c : normalized.weights()) {
        p.push_back(c.transpose() * c);
    }
    return p;
}

class Recorder {
public:
    Recorder(const WeightedNeighborGraph& w, const Vector& x0, const RunOptions& options)
        : w_(w), options_(options) {
        trajectory_.agents = w.agent_count();
        trajectory_.n = w.n();
        trajectory_.states.reserve(options.steps + 1);
        record(x0);
    }

    // Returns false once the run should stop early.
    bool record(const Vector& x) {
        trajectory_.states.push_back(x);
        const double err = consensus_error(x, w_.n());
        trajectory_.consensus_error.push_back(err);
        trajectory_.residual.push_back(local_agreement_residual(w_, x));
        below_ = err < kConsensusThreshold ? below_ + 1 : 0;
        return !(options_.stop_at_consensus && below_ >= kConsensusWindow);
    }

    bool keep_going() const { return !(options_.stop_at_consensus && below_ >= kConsensusWindow); }
    const Vector& last() const { return trajectory_.states.back(); }
    Trajectory take() { return std::move(trajectory_); }

private:
    const WeightedNeighborGraph& w_;
    RunOptions options_;
    Trajectory trajectory_;
    std::size_t below_ = 0;
};

// Shared round for the symmetric rules:
//   x_i <- x_i - outer(i) * sum_{j in N_i(active)} inner(i, j) * Q_ij (x_i - x_j)
template <typename Outer, typename Inner>
Vector symmetric_round(const DirectedGraph& g, const std::vector<Matrix>& q, const DirectedGraph& active,
                       const Vector& x, int n, Outer outer, Inner inner) {
    Vector next(x.size());
    for (int i = 0; i < g.vertex_count(); ++i) {
        const Vector xi = segment(x, n, i);
        Vector acc = Vector::Zero(n);
        for (int j : active.in_neighbors(i)) {
            const std::size_t k = *g.arc_index(j, i);
            acc += inner(i, j) * (q[k] * (xi - segment(x, n, j)));
        }
        next.segment(static_cast<Eigen::Index>(i) * n, n) = xi - outer(i) * acc;
    }
    return next;
}

struct ProjectionTerm {
    int neighbor;
    std::size_t arc;
};

// x_i <- x_i - coeff_i * sum_terms P_arc (x_i - x_neighbor)
Vector projection_round(const std::vector<std::vector<ProjectionTerm>>& terms, const std::vector<double>& coeff,
                        const std::vector<Matrix>& p, const Vector& x, int n) {
    Vector next(x.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const int agent = static_cast<int>(i);
        const Vector xi = segment(x, n, agent);
        Vector acc = Vector::Zero(n);
        for (const ProjectionTerm& t : terms[i]) {
            acc += p[t.arc] * (xi - segment(x, n, t.neighbor));
        }
        next.segment(static_cast<Eigen::Index>(agent) * n, n) = xi - coeff[i] * acc;
    }
    return next;
}

Trajectory run_projection(const WeightedNeighborGraph& normalized, const Vector& x0,
                          const std::vector<std::vector<ProjectionTerm>>& terms, const std::vector<double>& coeff,
                          const RunOptions& options) {
    const std::vector<Matrix> p = arc_projectors(normalized);
    Recorder rec(normalized, x0, options);
    for (std::size_t t = 0; t < options.steps && rec.keep_going(); ++t) {
        rec.record(projection_round(terms, coeff, p, rec.last(), normalized.n()));
    }
    return rec.take();
}

// Every incoming arc of every agent, weighted 1 / (d_i + 1).
void incoming_terms(const DirectedGraph& g, std::vector<std::vector<ProjectionTerm>>& terms,
                    std::vector<double>& coeff) {
    terms.assign(static_cast<std::size_t>(g.vertex_count()), {});
    coeff.assign(static_cast<std::size_t>(g.vertex_count()), 0.0);
    for (int i = 0; i < g.vertex_count(); ++i) {
        for (int j : g.in_neighbors(i)) {
            terms[static_cast<std::size_t>(i)].push_back({j, *g.arc_index(j, i)});
        }
        coeff[static_cast<std::size_t>(i)] = 1.0 / (g.in_degree(i) + 1.0);
    }
}

Matrix lifted(const Matrix& small, int n) { return kronecker(small, Matrix::Identity(n, n)); }

// blockdiag(W_kk * I_{rows(C_k)}): W acting on the stacked signal space of C.
Matrix signal_space_weights(const WeightedNeighborGraph& w, const Matrix& arc_weights) {
    std::vector<Matrix> blocks;
    blocks.reserve(w.weights().size());
    for (std::size_t k = 0; k < w.weights().size(); ++k) {
        const auto rows = w.weight(k).rows();
        blocks.push_back(arc_weights(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) *
                         Matrix::Identity(rows, rows));
    }
    return block_diag(blocks);
}

}  // namespace

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::gradient:
            return "gradient";
        case Algorithm::fixed_step:
            return "fixed_step";
        case Algorithm::metropolis_tv:
            return "metropolis_tv";
        case Algorithm::cycle_projection:
            return "cycle_projection";
        case Algorithm::general_projection:
            return "general_projection";
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (Algorithm a : {Algorithm::gradient, Algorithm::fixed_step, Algorithm::metropolis_tv,
                        Algorithm::cycle_projection, Algorithm::general_projection}) {
        if (name == to_string(a)) {
            return a;
        }
    }
    return std::nullopt;
}

double StepsizeSchedule::at(std::size_t t) const {
    switch (form) {
        case Form::harmonic:
            return a / (static_cast<double>(t) + b);
        case Form::constant:
            return a;
        case Form::scripted:
            return script.empty() ? 0.0 : script[std::min(t, script.size() - 1)];
    }
    return 0.0;
}

void StepsizeSchedule::validate() const {
    if (form == Form::scripted) {
        if (script.empty() || std::any_of(script.begin(), script.end(), [](double v) { return !(v > 0.0); })) {
            throw InvalidArgument("scripted stepsizes must be a non-empty list of positive values");
        }
        return;
    }
    if (!(a > 0.0)) {
        throw InvalidArgument("stepsize parameter a must be positive");
    }
    if (form == Form::harmonic && !(b >= 1.0)) {
        throw InvalidArgument("stepsize parameter b must be at least 1");
    }
}

const DirectedGraph& Schedule::at(std::size_t t) const {
    switch (mode) {
        case Mode::fixed:
            return subgraphs.at(0);
        case Mode::periodic:
            return subgraphs.at((t / dwell) % subgraphs.size());
        case Mode::scripted:
            return subgraphs.at(script.at(t % script.size()));
    }
    return subgraphs.at(0);
}

std::vector<std::size_t> Schedule::recurring() const {
    switch (mode) {
        case Mode::fixed:
            return {0};
        case Mode::periodic: {
            std::vector<std::size_t> all(subgraphs.size());
            for (std::size_t i = 0; i < all.size(); ++i) {
                all[i] = i;
            }
            return all;
        }
        case Mode::scripted: {
            const std::set<std::size_t> used(script.begin(), script.end());
            return {used.begin(), used.end()};
        }
    }
    return {};
}

void Schedule::validate(const DirectedGraph& g) const {
    if (subgraphs.empty()) {
        throw InvalidArgument("schedule lists no subgraphs");
    }
    if (mode == Mode::periodic && dwell == 0) {
        throw InvalidArgument("periodic schedule needs a positive dwell");
    }
    if (mode == Mode::scripted) {
        if (script.empty()) {
            throw InvalidArgument("scripted schedule needs a non-empty script");
        }
        for (std::size_t idx : script) {
            if (idx >= subgraphs.size()) {
                throw InvalidArgument("schedule script references subgraph " + std::to_string(idx) +
                                      " of " + std::to_string(subgraphs.size()));
            }
        }
    }
    for (std::size_t s = 0; s < subgraphs.size(); ++s) {
        if (!is_spanning_subgraph(g, subgraphs[s])) {
            throw InvalidArgument("scheduled subgraph " + std::to_string(s) + " is not a spanning subgraph");
        }
        if (!is_symmetric(subgraphs[s])) {
            throw InvalidArgument("scheduled subgraph " + std::to_string(s) + " is not symmetric");
        }
    }
}

bool Schedule::covers(const DirectedGraph& g) const {
    std::vector<bool> hit(g.arc_count(), false);
    for (std::size_t s : recurring()) {
        for (const Arc& a : subgraphs.at(s).arcs()) {
            if (auto k = g.arc_index(a.tail, a.head)) {
                hit[*k] = true;
            }
        }
    }
    return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

std::optional<std::size_t> Trajectory::consensus_round() const {
    std::size_t run = 0;
    for (std::size_t t = 0; t < consensus_error.size(); ++t) {
        run = consensus_error[t] < kConsensusThreshold ? run + 1 : 0;
        if (run >= kConsensusWindow) {
            return t + 1 - kConsensusWindow;
        }
    }
    return std::nullopt;
}

double consensus_error(const Vector& x, int n) {
    const Eigen::Index m = x.size() / n;
    if (m == 0) {
        return 0.0;
    }
    Vector mean = Vector::Zero(n);
    for (Eigen::Index i = 0; i < m; ++i) {
        mean += x.segment(i * n, n);
    }
    mean /= static_cast<double>(m);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        worst = std::max(worst, (x.segment(i * n, n) - mean).norm());
    }
    return worst;
}

double local_agreement_residual(const WeightedNeighborGraph& w, const Vector& x) {
    const int n = w.n();
    double sq = 0.0;
    for (std::size_t k = 0; k < w.graph().arc_count(); ++k) {
        const Arc& a = w.graph().arc(k);
        sq += (w.weight(k) * (segment(x, n, a.head) - segment(x, n, a.tail))).squaredNorm();
    }
    return std::sqrt(sq);
}

std::vector<double> metropolis_weights(const DirectedGraph& g) {
    require_symmetric(g, "Metropolis weighting");
    std::vector<double> w(g.arc_count());
    for (std::size_t k = 0; k < g.arc_count(); ++k) {
        const Arc& a = g.arc(k);
        w[k] = 1.0 / (1.0 + std::max(g.in_degree(a.tail), g.in_degree(a.head)));
    }
    return w;
}

Matrix spanning_weight_matrix(const DirectedGraph& g, const DirectedGraph& sub) {
    if (!is_spanning_subgraph(g, sub)) {
        throw InvalidArgument("subgraph is not a spanning subgraph of the neighbor graph");
    }
    const std::vector<double> sub_weights = metropolis_weights(sub);
    Matrix w = Matrix::Zero(static_cast<Eigen::Index>(g.arc_count()), static_cast<Eigen::Index>(g.arc_count()));
    for (std::size_t k = 0; k < g.arc_count(); ++k) {
        const Arc& a = g.arc(k);
        if (auto s = sub.arc_index(a.tail, a.head)) {
            w(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = sub_weights[*s];
        }
    }
    return w;
}

Matrix flocking_matrix(const DirectedGraph& g) {
    const int m = g.vertex_count();
    Matrix f = Matrix::Identity(m, m);
    for (const Arc& a : g.arcs()) {
        f(a.head, a.tail) = 1.0;
    }
    for (int i = 0; i < m; ++i) {
        f.row(i) /= g.in_degree(i) + 1.0;
    }
    return f;
}

Matrix laplacian_term(const WeightedNeighborGraph& w) {
    const Matrix op = local_agreement_operator(w);
    return op.transpose() * op;
}

Matrix weighted_laplacian_term(const WeightedNeighborGraph& w, const Matrix& arc_weights) {
    const Matrix op = local_agreement_operator(w);
    return op.transpose() * signal_space_weights(w, arc_weights) * op;
}

Matrix covering_operator(const WeightedNeighborGraph& w, const std::vector<DirectedGraph>& subgraphs) {
    const DirectedGraph& g = w.graph();
    const int n = w.n();
    Matrix acc = Matrix::Zero(static_cast<Eigen::Index>(g.arc_count()) * n,
                              static_cast<Eigen::Index>(g.vertex_count()) * n);
    for (const DirectedGraph& sub : subgraphs) {
        const Matrix root_w = spanning_weight_matrix(g, sub).cwiseSqrt();
        acc += lifted(root_w, n) * lifted(spanning_incidence_matrix(g, sub), n).transpose();
    }
    return stacked_C(w) * acc;
}

double agreement_objective(const WeightedNeighborGraph& w, const Vector& x) {
    return (local_agreement_operator(w) * x).squaredNorm();
}

Vector agreement_gradient(const WeightedNeighborGraph& w, const Vector& x) {
    return 2.0 * (laplacian_term(w) * x);
}

Vector project_initial_state(const WeightedNeighborGraph& w, const Vector& x0) {
    const DirectedGraph& g = w.graph();
    if (!is_directed_cycle(g)) {
        throw InvalidArgument("projected initialization is defined for directed cycles");
    }
    require_state_size(w, x0);
    const int n = w.n();
    Vector x = x0;
    for (int i = 0; i < g.vertex_count(); ++i) {
        const Matrix p = projection_matrix(row_space_basis(w.weight(g.in_neighbors(i).front(), i)));
        x.segment(static_cast<Eigen::Index>(i) * n, n) = p * segment(x0, n, i);
    }
    return x;
}

Trajectory run_gradient(const WeightedNeighborGraph& w, const Vector& x0, const StepsizeSchedule& alpha,
                        const RunOptions& options) {
    const DirectedGraph& g = w.graph();
    require_symmetric(g, "gradient update");
    require_state_size(w, x0);
    alpha.validate();
    const std::vector<Matrix> q = pair_terms(w);
    Recorder rec(w, x0, options);
    for (std::size_t t = 0; t < options.steps && rec.keep_going(); ++t) {
        const double step = alpha.at(t);
        rec.record(symmetric_round(
            g, q, g, rec.last(), w.n(), [&](int) { return step; }, [](int, int) { return 1.0; }));
    }
    return rec.take();
}

Trajectory run_fixed_step(const WeightedNeighborGraph& w, const Vector& x0, const RunOptions& options) {
    const DirectedGraph& g = w.graph();
    require_symmetric(g, "fixed-step update");
    require_state_size(w, x0);
    const WeightedNeighborGraph wn = w.normalized();
    const std::vector<Matrix> q = pair_terms(wn);
    Recorder rec(wn, x0, options);
    for (std::size_t t = 0; t < options.steps && rec.keep_going(); ++t) {
        rec.record(symmetric_round(
            g, q, g, rec.last(), w.n(), [&](int i) { return 1.0 / (2.0 * (g.in_degree(i) + 1.0)); },
            [](int, int) { return 1.0; }));
    }
    return rec.take();
}

Trajectory run_metropolis_tv(const WeightedNeighborGraph& w, const Vector& x0, const Schedule& schedule,
                             const RunOptions& options) {
    const DirectedGraph& g = w.graph();
    require_symmetric(g, "Metropolis update");
    require_state_size(w, x0);
    schedule.validate(g);
    const WeightedNeighborGraph wn = w.normalized();
    const std::vector<Matrix> q = pair_terms(wn);
    Recorder rec(wn, x0, options);
    for (std::size_t t = 0; t < options.steps && rec.keep_going(); ++t) {
        const DirectedGraph& active = schedule.at(t);
        rec.record(symmetric_round(
            g, q, active, rec.last(), w.n(), [](int) { return 0.5; },
            [&](int i, int j) { return 1.0 / (1.0 + std::max(active.in_degree(i), active.in_degree(j))); }));
    }
    return rec.take();
}

Trajectory run_cycle_projection(const WeightedNeighborGraph& w, const Vector& x0, bool project_init,
                                const RunOptions& options) {
    const DirectedGraph& g = w.graph();
    if (!is_directed_cycle(g)) {
        throw InvalidArgument("cycle projection needs a directed cycle");
    }
    require_state_size(w, x0);
    const WeightedNeighborGraph wn = w.normalized();
    std::vector<std::vector<ProjectionTerm>> terms(static_cast<std::size_t>(g.vertex_count()));
    std::vector<double> coeff(terms.size(), 0.5);
    for (int i = 0; i < g.vertex_count(); ++i) {
        const int pred = g.in_neighbors(i).front();
        terms[static_cast<std::size_t>(i)].push_back({pred, *g.arc_index(pred, i)});
    }
    const Vector start = project_init ? project_initial_state(wn, x0) : x0;
    return run_projection(wn, start, terms, coeff, options);
}

Trajectory run_general_projection(const WeightedNeighborGraph& w, const Vector& x0, const RunOptions& options) {
    require_state_size(w, x0);
    const WeightedNeighborGraph wn = w.normalized();
    std::vector<std::vector<ProjectionTerm>> terms;
    std::vector<double> coeff;
    incoming_terms(wn.graph(), terms, coeff);
    return run_projection(wn, x0, terms, coeff, options);
}

Matrix build_update_matrix(Algorithm algorithm, const WeightedNeighborGraph& w, const RoundInputs& inputs) {
    const DirectedGraph& g = w.graph();
    const int m = g.vertex_count();
    const int n = w.n();
    const Matrix identity = Matrix::Identity(static_cast<Eigen::Index>(m) * n, static_cast<Eigen::Index>(m) * n);

    switch (algorithm) {
        case Algorithm::gradient:
            require_symmetric(g, "gradient update");
            return identity - inputs.stepsize * laplacian_term(w);
        case Algorithm::fixed_step: {
            require_symmetric(g, "fixed-step update");
            Vector damping(m);
            for (int i = 0; i < m; ++i) {
                damping(i) = 1.0 / (2.0 * (g.in_degree(i) + 1.0));
            }
            const Matrix d_bar = lifted(damping.asDiagonal().toDenseMatrix(), n);
            return identity - d_bar * laplacian_term(w.normalized());
        }
        case Algorithm::metropolis_tv: {
            require_symmetric(g, "Metropolis update");
            const DirectedGraph& sub = inputs.subgraph != nullptr ? *inputs.subgraph : g;
            if (!is_symmetric(sub)) {
                throw InvalidArgument("round subgraph is not symmetric");
            }
            const WeightedNeighborGraph wn = w.normalized();
            const Matrix j_bar = lifted(spanning_incidence_matrix(g, sub), n);
            const Matrix c = stacked_C(wn);
            const Matrix w_bar = signal_space_weights(wn, spanning_weight_matrix(g, sub));
            return identity - 0.5 * j_bar * c.transpose() * w_bar * c * j_bar.transpose();
        }
        case Algorithm::cycle_projection:
            if (!is_directed_cycle(g)) {
                throw InvalidArgument("cycle projection needs a directed cycle");
            }
            [[fallthrough]];
        case Algorithm::general_projection: {
            const WeightedNeighborGraph wn = w.normalized();
            Vector damping(m);
            for (int i = 0; i < m; ++i) {
                damping(i) = 1.0 / (g.in_degree(i) + 1.0);
            }
            const Matrix d_bar = lifted(damping.asDiagonal().toDenseMatrix(), n);
            const Matrix c = stacked_C(wn);
            const Matrix heads = lifted(head_indicator_matrix(g), n);
            const Matrix j_bar = lifted(incidence_matrix(g), n);
            return identity - d_bar * heads * c.transpose() * c * j_bar.transpose();
        }
    }
    throw InvalidArgument("unknown algorithm");
}

}  // namespace mwc
