#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mwc/ear.hpp"
#include "mwc/graph.hpp"
#include "mwc/numerics.hpp"
#include "mwc/subspace.hpp"

namespace mwc {

/// Neighbor graph with one real matrix C_ji (any row count, n columns) per
/// arc (j, i). Agent i receives C_ji x_j from neighbor j. Matrices are stored
/// in the graph's canonical arc order.
class WeightedNeighborGraph {
public:
    /// Throws InvalidArgument when the matrix count differs from the arc
    /// count, n < 1, or some matrix does not have n columns.
    WeightedNeighborGraph(DirectedGraph graph, int n, std::vector<Matrix> weights);

    /// Every arc weighted by the n x n identity.
    static WeightedNeighborGraph identity(DirectedGraph graph, int n);

    const DirectedGraph& graph() const { return graph_; }
    int n() const { return n_; }
    int agent_count() const { return graph_.vertex_count(); }

    const Matrix& weight(std::size_t arc) const { return weights_.at(arc); }
    /// C for arc (tail, head); throws InvalidArgument when the arc is absent.
    const Matrix& weight(int tail, int head) const;
    std::span<const Matrix> weights() const { return weights_; }

    SubspaceBasis kernel(std::size_t arc, double tol = kRankTolerance) const;
    std::vector<SubspaceBasis> kernels(double tol = kRankTolerance) const;

    /// Copy whose matrices are replaced by orthonormal bases of their row
    /// spaces (kernels unchanged, so C'C is the projector P onto kernel^perp).
    WeightedNeighborGraph normalized(double tol = kRankTolerance) const;

private:
    DirectedGraph graph_;
    int n_ = 0;
    std::vector<Matrix> weights_;
};

/// C = blockdiag of the arc matrices in canonical order.
Matrix stacked_C(const WeightedNeighborGraph& w);
/// J-bar = J (x) I_n.
Matrix lifted_incidence(const DirectedGraph& g, int n);
/// I-bar = 1_m (x) I_n.
Matrix consensus_basis(int m, int n);

/// C J-bar' with arcs taken in `order` (a permutation of arc indices) for
/// both the weight blocks and the incidence columns. Empty `order` means
/// canonical order.
Matrix local_agreement_operator(const WeightedNeighborGraph& w, std::span<const std::size_t> order = {});

/// Verdict of the local-agreement test.
struct WellConfigReport {
    bool well_configured = false;
    /// dim kernel(C J-bar'); n exactly when well-configured.
    int kernel_dim = 0;
    /// Unit-norm non-consensus state with C J-bar' x ~ 0 when not well-configured.
    std::optional<Vector> witness;
};

/// kernel(C J-bar') == span(I-bar): the kernel must have dimension n and
/// contain every column of I-bar. Throws InvalidArgument when the graph is
/// not weakly connected.
WellConfigReport check_well_configured(const WeightedNeighborGraph& w, double tol = kRankTolerance);

inline bool is_well_configured(const WeightedNeighborGraph& w, double tol = kRankTolerance) {
    return check_well_configured(w, tol).well_configured;
}

/// Equivalent test for weakly connected graphs: span(J-bar') meets kernel(C)
/// only at zero. Computed independently of check_well_configured.
bool is_well_configured_by_intersection(const WeightedNeighborGraph& w, double tol = kRankTolerance);

/// Directed cycle with kernels listed in cycle order: well-configured iff
/// the kernels form an independent family.
bool cycle_criterion(std::span<const SubspaceBasis> kernels, double tol = kRankTolerance);

/// Cycle in which the arcs flagged in `agreeing` are already known to join
/// equal states: the remaining kernels must be independent.
bool reduced_cycle_criterion(std::span<const SubspaceBasis> kernels, const std::vector<bool>& agreeing,
                             double tol = kRankTolerance);

/// Three agents, arcs 1->2, 2->1, 3->1, 3->2: well-configured iff
/// {K12 n K21, K31, K32} is independent.
bool feeder_pair_criterion(const SubspaceBasis& k12, const SubspaceBasis& k21, const SubspaceBasis& k31,
                        const SubspaceBasis& k32, double tol = kRankTolerance);

/// Three agents, arcs (1,2), (2,3), (3,1), (2,1) with kernels K1..K4:
/// well-configured iff {K1 n K4, K2, K3} is independent.
bool counterexample_criterion(const SubspaceBasis& k1, const SubspaceBasis& k2, const SubspaceBasis& k3,
                              const SubspaceBasis& k4, double tol = kRankTolerance);

enum class KernelMode {
    /// Every arc gets a one-dimensional kernel; ears longer than n are refused.
    nonzero,
    /// Arcs beyond the n-th of an ear get trivial kernels (C = I).
    free,
};

/// Weights from an ear decomposition: arc t of each ear gets kernel
/// span{e_(t mod n)} and C is the (n-1) x n complement of that axis. The
/// result is re-verified before it is returned. Throws InvalidArgument for a
/// decomposition that does not fit g and Infeasible when an ear is longer
/// than n in nonzero mode.
WeightedNeighborGraph synthesize(const DirectedGraph& g, int n, const EarDecomposition& decomposition,
                                 KernelMode mode);

/// Symmetric weights C_ij = C_ji built along a symmetric ear decomposition,
/// one kernel per two-length cycle. Throws InvalidArgument when g is not a
/// 2-connected symmetric graph and Infeasible when a symmetric ear has more
/// than n two-length cycles in nonzero mode.
WeightedNeighborGraph synthesize_symmetric(const DirectedGraph& g, int n, KernelMode mode);
WeightedNeighborGraph synthesize_symmetric(const DirectedGraph& g, int n, const EarDecomposition& decomposition,
                                           KernelMode mode);

/// C whose kernel is span{e_axis}: the other n-1 coordinate rows.
Matrix axis_complement(int n, int axis);

}  // namespace mwc
