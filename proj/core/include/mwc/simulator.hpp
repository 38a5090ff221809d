#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "mwc/graph.hpp"
#include "mwc/numerics.hpp"
#include "mwc/wellconfig.hpp"

namespace mwc {

/// Consensus is declared once the consensus error stays below the threshold
/// for kConsensusWindow consecutive rounds.
inline constexpr double kConsensusThreshold = 1e-9;
inline constexpr std::size_t kConsensusWindow = 10;

enum class Algorithm {
    gradient,            // x - alpha(t) J C'C J' x
    fixed_step,          // x - D J C'C J' x, D_i = 1 / (2 (d_i + 1))
    metropolis_tv,       // x - 1/2 J(t) C' W(t) C J(t)' x
    cycle_projection,    // x_i - 1/2 P_i (x_i - x_{i-1})
    general_projection,  // x_i - 1/(d_i+1) sum_j P_ji (x_i - x_j)
};

const char* to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// alpha(t): harmonic a / (t + b), constant a, or an explicit list whose last
/// value repeats.
struct StepsizeSchedule {
    enum class Form { harmonic, constant, scripted };

    Form form = Form::harmonic;
    double a = 1.0;
    double b = 2.0;
    std::vector<double> script;

    static StepsizeSchedule harmonic(double a = 1.0, double b = 2.0) { return {Form::harmonic, a, b, {}}; }
    static StepsizeSchedule constant(double a) { return {Form::constant, a, 1.0, {}}; }
    static StepsizeSchedule scripted(std::vector<double> values) { return {Form::scripted, 1.0, 1.0, std::move(values)}; }

    double at(std::size_t t) const;
    /// Throws InvalidArgument on a <= 0, b < 1 or an empty / non-positive script.
    void validate() const;
};

/// Sequence of symmetric spanning subgraphs N(t) of the neighbor graph.
struct Schedule {
    enum class Mode { fixed, periodic, scripted };

    Mode mode = Mode::fixed;
    std::vector<DirectedGraph> subgraphs;
    /// periodic: consecutive rounds each subgraph is held.
    std::size_t dwell = 1;
    /// scripted: subgraph index per round, replayed cyclically.
    std::vector<std::size_t> script;

    static Schedule fixed(DirectedGraph g) { return {Mode::fixed, {std::move(g)}, 1, {}}; }
    static Schedule periodic(std::vector<DirectedGraph> graphs, std::size_t dwell = 1) {
        return {Mode::periodic, std::move(graphs), dwell, {}};
    }

    const DirectedGraph& at(std::size_t t) const;
    /// Indices of subgraphs that occur infinitely often.
    std::vector<std::size_t> recurring() const;
    /// Throws InvalidArgument unless every subgraph is a symmetric spanning
    /// subgraph of `g` and the indexing data is consistent.
    void validate(const DirectedGraph& g) const;
    /// Union of the recurring subgraphs equals `g`.
    bool covers(const DirectedGraph& g) const;
};

struct RunOptions {
    std::size_t steps = 0;
    /// Stop after consensus has held for kConsensusWindow rounds.
    bool stop_at_consensus = false;
};

/// States x(0), x(1), ... stacked agent-major (x_1; ...; x_m) with per-round
/// diagnostics of the same length.
struct Trajectory {
    int agents = 0;
    int n = 0;
    std::vector<Vector> states;
    std::vector<double> consensus_error;
    std::vector<double> residual;

    std::size_t steps_run() const { return states.empty() ? 0 : states.size() - 1; }
    const Vector& final_state() const { return states.back(); }
    /// First round that starts a kConsensusWindow-long run below the threshold.
    std::optional<std::size_t> consensus_round() const;
    bool converged() const { return consensus_round().has_value(); }
};

/// max_i ||x_i - mean||_2 for a stacked state of n-dimensional agents.
double consensus_error(const Vector& x, int n);
/// ||C J-bar' x||_2.
double local_agreement_residual(const WeightedNeighborGraph& w, const Vector& x);

/// Metropolis weight 1 / (1 + max(d_i, d_j)) per arc, canonical order.
/// Throws InvalidArgument for a non-symmetric graph.
std::vector<double> metropolis_weights(const DirectedGraph& g);

/// d x d diagonal, indexed by g's arcs: the Metropolis weight computed inside
/// `sub` for arcs of sub, zero elsewhere.
Matrix spanning_weight_matrix(const DirectedGraph& g, const DirectedGraph& sub);

/// Row-stochastic in-neighbor averaging matrix with every agent counted as
/// its own neighbor: (D + I)^{-1} (A' + I).
Matrix flocking_matrix(const DirectedGraph& g);

/// J-bar C'C J-bar' with the matrices as stored in w.
Matrix laplacian_term(const WeightedNeighborGraph& w);
/// J-bar C' W-bar C J-bar' for a d x d diagonal W.
Matrix weighted_laplacian_term(const WeightedNeighborGraph& w, const Matrix& arc_weights);
/// C (sum_i W_i^{1/2} J_i)' over spanning subgraphs with their Metropolis
/// weights; its kernel equals kernel(C J-bar') when the subgraphs cover g.
Matrix covering_operator(const WeightedNeighborGraph& w, const std::vector<DirectedGraph>& subgraphs);

/// ||C J-bar' x||^2 and its gradient 2 J-bar C'C J-bar' x.
double agreement_objective(const WeightedNeighborGraph& w, const Vector& x);
Vector agreement_gradient(const WeightedNeighborGraph& w, const Vector& x);

/// x with each x_i replaced by P_i x_i (P_i projects onto the row space of
/// the matrix on agent i's single incoming arc). Requires a directed cycle.
Vector project_initial_state(const WeightedNeighborGraph& w, const Vector& x0);

Trajectory run_gradient(const WeightedNeighborGraph& w, const Vector& x0, const StepsizeSchedule& alpha,
                        const RunOptions& options);
Trajectory run_fixed_step(const WeightedNeighborGraph& w, const Vector& x0, const RunOptions& options);
Trajectory run_metropolis_tv(const WeightedNeighborGraph& w, const Vector& x0, const Schedule& schedule,
                             const RunOptions& options);
Trajectory run_cycle_projection(const WeightedNeighborGraph& w, const Vector& x0, bool project_init,
                                const RunOptions& options);
Trajectory run_general_projection(const WeightedNeighborGraph& w, const Vector& x0, const RunOptions& options);

/// Inputs that vary by round.
struct RoundInputs {
    /// metropolis_tv: N(t); defaults to the full graph.
    const DirectedGraph* subgraph = nullptr;
    /// gradient: alpha(t).
    double stepsize = 0.0;
};

/// The mn x mn matrix applied per round, assembled from the stacked
/// incidence/weight products rather than the per-agent loops used by the run
/// functions. Projection rules and fixed_step use row-normalized weights.
Matrix build_update_matrix(Algorithm algorithm, const WeightedNeighborGraph& w, const RoundInputs& inputs = {});

}  // namespace mwc
