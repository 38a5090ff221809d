#include "mwc/wellconfig.hpp"

#include <numeric>
#include <string>

#include "mwc/error.hpp"

namespace mwc {

WeightedNeighborGraph::WeightedNeighborGraph(DirectedGraph graph, int n, std::vector<Matrix> weights)
    : graph_(std::move(graph)), n_(n), weights_(std::move(weights)) {
    if (n_ < 1) {
        throw InvalidArgument("state dimension n must be positive");
    }
    if (weights_.size() != graph_.arc_count()) {
        throw InvalidArgument("expected " + std::to_string(graph_.arc_count()) + " arc matrices, got " +
                              std::to_string(weights_.size()));
    }
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        if (weights_[k].cols() != n_) {
            const Arc& a = graph_.arc(k);
            throw InvalidArgument("matrix of arc (" + std::to_string(a.tail + 1) + "," + std::to_string(a.head + 1) +
                                  ") has " + std::to_string(weights_[k].cols()) + " columns, expected " +
                                  std::to_string(n_));
        }
        if (!weights_[k].allFinite()) {
            throw InvalidArgument("arc matrix contains a non-finite entry");
        }
    }
}

WeightedNeighborGraph WeightedNeighborGraph::identity(DirectedGraph graph, int n) {
    std::vector<Matrix> weights(graph.arc_count(), Matrix::Identity(n, n));
    return WeightedNeighborGraph(std::move(graph), n, std::move(weights));
}

const Matrix& WeightedNeighborGraph::weight(int tail, int head) const {
    const auto k = graph_.arc_index(tail, head);
    if (!k) {
        throw InvalidArgument("no arc (" + std::to_string(tail + 1) + "," + std::to_string(head + 1) + ")");
    }
    return weights_[*k];
}

SubspaceBasis WeightedNeighborGraph::kernel(std::size_t arc, double tol) const {
    return kernel_basis(weight(arc), tol);
}

std::vector<SubspaceBasis> WeightedNeighborGraph::kernels(double tol) const {
    std::vector<SubspaceBasis> out;
    out.reserve(weights_.size());
    for (std::size_t k = 0; k < weights_.size(); ++k) {
        out.push_back(kernel(k, tol));
    }
    return out;
}

WeightedNeighborGraph WeightedNeighborGraph::normalized(double tol) const {
    std::vector<Matrix> rows;
    rows.reserve(weights_.size());
    for (const Matrix& c : weights_) {
        rows.push_back(row_space_basis(c, tol));
    }
    return WeightedNeighborGraph(graph_, n_, std::move(rows));
}

Matrix stacked_C(const WeightedNeighborGraph& w) {
    return block_diag(w.weights());
}

Matrix lifted_incidence(const DirectedGraph& g, int n) {
    return kronecker(incidence_matrix(g), Matrix::Identity(n, n));
}

Matrix consensus_basis(int m, int n) {
    return kronecker(Matrix::Ones(m, 1), Matrix::Identity(n, n));
}

Matrix local_agreement_operator(const WeightedNeighborGraph& w, std::span<const std::size_t> order) {
    const DirectedGraph& g = w.graph();
    std::vector<std::size_t> arcs(order.begin(), order.end());
    if (arcs.empty()) {
        arcs.resize(g.arc_count());
        std::iota(arcs.begin(), arcs.end(), std::size_t{0});
    }
    std::vector<bool> seen(g.arc_count(), false);
    for (std::size_t k : arcs) {
        if (k >= g.arc_count() || seen[k]) {
            throw InvalidArgument("arc order is not a permutation of the arc indices");
        }
        seen[k] = true;
    }
    if (arcs.size() != g.arc_count()) {
        throw InvalidArgument("arc order is not a permutation of the arc indices");
    }

    const Matrix j = incidence_matrix(g);
    Matrix j_perm(j.rows(), j.cols());
    std::vector<Matrix> blocks;
    blocks.reserve(arcs.size());
    for (std::size_t pos = 0; pos < arcs.size(); ++pos) {
        j_perm.col(static_cast<Eigen::Index>(pos)) = j.col(static_cast<Eigen::Index>(arcs[pos]));
        blocks.push_back(w.weight(arcs[pos]));
    }
    const Matrix j_bar = kronecker(j_perm, Matrix::Identity(w.n(), w.n()));
    return block_diag(blocks) * j_bar.transpose();
}

WellConfigReport check_well_configured(const WeightedNeighborGraph& w, double tol) {
    const DirectedGraph& g = w.graph();
    if (!is_weakly_connected(g)) {
        throw InvalidArgument("graph is not weakly connected: consensus cannot follow from local agreement");
    }
    const int m = g.vertex_count();
    const int n = w.n();
    const Matrix op = local_agreement_operator(w);
    const SubspaceBasis kernel = kernel_basis(op, tol);
    const Matrix ibar = consensus_basis(m, n);

    WellConfigReport report;
    report.kernel_dim = kernel.dim();
    const Matrix off = ibar - kernel.projector() * ibar;
    const bool contains_consensus = off.cwiseAbs().maxCoeff() <= 1e-9;
    report.well_configured = report.kernel_dim == n && contains_consensus;

    if (!report.well_configured && kernel.dim() > 0) {
        // Strip the consensus component; what is left agrees locally but not globally.
        const Matrix k = kernel.basis();
        const Matrix stripped = k - ibar * (ibar.transpose() * k) / static_cast<double>(m);
        Eigen::Index best = 0;
        stripped.colwise().norm().maxCoeff(&best);
        Vector x = stripped.col(best);
        if (x.norm() > 0.0) {
            report.witness = x / x.norm();
        }
    }
    return report;
}

bool is_well_configured_by_intersection(const WeightedNeighborGraph& w, double tol) {
    if (!is_weakly_connected(w.graph())) {
        throw InvalidArgument("graph is not weakly connected: consensus cannot follow from local agreement");
    }
    const Matrix j_bar_t = lifted_incidence(w.graph(), w.n()).transpose();
    const SubspaceBasis image = range_basis(j_bar_t, tol);
    const SubspaceBasis kernel = kernel_basis(stacked_C(w), tol);
    return intersect(image, kernel, tol).is_trivial();
}

bool cycle_criterion(std::span<const SubspaceBasis> kernels, double tol) {
    return subspace_family_independent(kernels, tol);
}

bool reduced_cycle_criterion(std::span<const SubspaceBasis> kernels, const std::vector<bool>& agreeing,
                             double tol) {
    if (agreeing.size() != kernels.size()) {
        throw InvalidArgument("agreement flags must match the cycle length");
    }
    std::vector<SubspaceBasis> remaining;
    for (std::size_t k = 0; k < kernels.size(); ++k) {
        if (!agreeing[k]) {
            remaining.push_back(kernels[k]);
        }
    }
    return subspace_family_independent(remaining, tol);
}

bool feeder_pair_criterion(const SubspaceBasis& k12, const SubspaceBasis& k21, const SubspaceBasis& k31,
                        const SubspaceBasis& k32, double tol) {
    const SubspaceBasis family[] = {intersect(k12, k21, tol), k31, k32};
    return subspace_family_independent(family, tol);
}

bool counterexample_criterion(const SubspaceBasis& k1, const SubspaceBasis& k2, const SubspaceBasis& k3,
                              const SubspaceBasis& k4, double tol) {
    const SubspaceBasis family[] = {intersect(k1, k4, tol), k2, k3};
    return subspace_family_independent(family, tol);
}

Matrix axis_complement(int n, int axis) {
    if (axis < 0 || axis >= n) {
        throw InvalidArgument("axis outside the state dimension");
    }
    Matrix c = Matrix::Zero(n - 1, n);
    for (int r = 0, col = 0; col < n; ++col) {
        if (col != axis) {
            c(r++, col) = 1.0;
        }
    }
    return c;
}

namespace {

Matrix weight_for_position(int n, std::size_t position, KernelMode mode) {
    if (position < static_cast<std::size_t>(n)) {
        return axis_complement(n, static_cast<int>(position));
    }
    if (mode == KernelMode::nonzero) {
        throw Infeasible("ear position exceeds n");
    }
    return Matrix::Identity(n, n);
}

void require_short_ears(const EarDecomposition& d, int n, KernelMode mode) {
    if (mode != KernelMode::nonzero) {
        return;
    }
    for (std::size_t i = 0; i < d.ears.size(); ++i) {
        if (d.ear_length(i) > static_cast<std::size_t>(n)) {
            throw Infeasible("ear " + std::to_string(i) + " has length " + std::to_string(d.ear_length(i)) +
                             " > n = " + std::to_string(n) +
                             "; all-nonzero kernels need every ear length <= n");
        }
    }
}

WeightedNeighborGraph verified(WeightedNeighborGraph w) {
    if (!is_well_configured(w)) {
        throw Error("synthesized weights failed verification");
    }
    return w;
}

}  // namespace

WeightedNeighborGraph synthesize(const DirectedGraph& g, int n, const EarDecomposition& decomposition,
                                 KernelMode mode) {
    if (n < 1) {
        throw InvalidArgument("state dimension n must be positive");
    }
    if (!is_strongly_connected(g)) {
        throw InvalidArgument("synthesis needs a strongly connected graph");
    }
    if (decomposition.symmetric) {
        return synthesize_symmetric(g, n, decomposition, mode);
    }
    if (auto defect = find_ear_decomposition_defect(g, decomposition)) {
        throw InvalidArgument("invalid ear decomposition: " + *defect);
    }
    require_short_ears(decomposition, n, mode);

    std::vector<Matrix> weights(g.arc_count());
    for (const Ear& ear : decomposition.ears) {
        for (std::size_t t = 0; t < ear.arcs.size(); ++t) {
            weights[*g.arc_index(ear.arcs[t].tail, ear.arcs[t].head)] = weight_for_position(n, t, mode);
        }
    }
    return verified(WeightedNeighborGraph(g, n, std::move(weights)));
}

WeightedNeighborGraph synthesize_symmetric(const DirectedGraph& g, int n, KernelMode mode) {
    return synthesize_symmetric(g, n, symmetric_ear_decomposition(g), mode);
}

WeightedNeighborGraph synthesize_symmetric(const DirectedGraph& g, int n, const EarDecomposition& decomposition,
                                           KernelMode mode) {
    if (n < 1) {
        throw InvalidArgument("state dimension n must be positive");
    }
    if (!decomposition.symmetric) {
        throw InvalidArgument("symmetric synthesis needs a symmetric ear decomposition");
    }
    if (auto defect = find_ear_decomposition_defect(g, decomposition)) {
        throw InvalidArgument("invalid symmetric ear decomposition: " + *defect);
    }
    require_short_ears(decomposition, n, mode);

    std::vector<Matrix> weights(g.arc_count());
    for (const Ear& ear : decomposition.ears) {
        const std::size_t pairs = ear.pair_count();
        for (std::size_t t = 0; t < pairs; ++t) {
            const Arc& fwd = ear.arcs[t];
            const Matrix c = weight_for_position(n, t, mode);
            weights[*g.arc_index(fwd.tail, fwd.head)] = c;
            weights[*g.arc_index(fwd.head, fwd.tail)] = c;
        }
    }
    return verified(WeightedNeighborGraph(g, n, std::move(weights)));
}

}  // namespace mwc
