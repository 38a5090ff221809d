#include <gtest/gtest.h>

#include <cstring>

#include "mwc/error.hpp"
#include "mwc/simulator.hpp"
#include "oracles.hpp"

namespace {

using mwc::Algorithm;
using mwc::DirectedGraph;
using mwc::Matrix;
using mwc::RunOptions;
using mwc::Vector;
using mwc::WeightedNeighborGraph;

DirectedGraph symmetric_triangle() {
    const std::pair<int, int> e[] = {{0, 1}, {1, 2}, {2, 0}};
    return mwc::make_symmetric(3, e);
}

DirectedGraph symmetric_square() {
    const std::pair<int, int> e[] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    return mwc::make_symmetric(4, e);
}

Vector random_state(const WeightedNeighborGraph& w, oracle::Rng& rng) {
    return oracle::random_matrix(static_cast<Eigen::Index>(w.agent_count()) * w.n(), 1, rng).col(0);
}

Vector consensus_state(int m, const Vector& value) {
    Vector x(m * value.size());
    for (int i = 0; i < m; ++i) {
        x.segment(i * value.size(), value.size()) = value;
    }
    return x;
}

bool bitwise_equal(const Vector& a, const Vector& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

// The instance used for the three-agent non-converging case: arcs (1,2),
// (2,3), (3,1), (2,1); C1 = C2 with kernel e1, C3 = C4 with kernel e2.
WeightedNeighborGraph counterexample_weights() {
    const DirectedGraph g(3, {{0, 1}, {1, 2}, {2, 0}, {1, 0}});
    std::vector<Matrix> c(4);
    c[*g.arc_index(0, 1)] = (Matrix(1, 2) << 0, 1).finished();
    c[*g.arc_index(1, 2)] = (Matrix(1, 2) << 0, 1).finished();
    c[*g.arc_index(2, 0)] = (Matrix(1, 2) << 1, 0).finished();
    c[*g.arc_index(1, 0)] = (Matrix(1, 2) << 1, 0).finished();
    return WeightedNeighborGraph(g, 2, c);
}

TEST(Metropolis, WeightsOnSmallGraphs) {
    const DirectedGraph pair(2, {{0, 1}, {1, 0}});
    for (double w : mwc::metropolis_weights(pair)) {
        EXPECT_DOUBLE_EQ(w, 0.5);
    }
    for (double w : mwc::metropolis_weights(symmetric_triangle())) {
        EXPECT_DOUBLE_EQ(w, 1.0 / 3.0);
    }
    const std::pair<int, int> star[] = {{0, 1}, {0, 2}, {0, 3}};
    for (double w : mwc::metropolis_weights(mwc::make_symmetric(4, star))) {
        EXPECT_DOUBLE_EQ(w, 0.25);
    }
    EXPECT_THROW(mwc::metropolis_weights(mwc::make_directed_cycle(3)), mwc::InvalidArgument);
}

TEST(Metropolis, SymmetricWithRowSumsBelowOne) {
    oracle::Rng rng(51);
    for (int trial = 0; trial < 100; ++trial) {
        const DirectedGraph g = oracle::random_symmetric_connected(2 + trial % 7, trial % 8, rng);
        const std::vector<double> w = mwc::metropolis_weights(g);
        std::vector<double> sums(static_cast<std::size_t>(g.vertex_count()), 0.0);
        for (std::size_t k = 0; k < g.arc_count(); ++k) {
            const mwc::Arc& a = g.arc(k);
            EXPECT_EQ(w[k], w[*g.arc_index(a.head, a.tail)]);
            sums[static_cast<std::size_t>(a.head)] += w[k];
        }
        for (double s : sums) {
            EXPECT_LT(s, 1.0);
        }
    }
}

TEST(SpanningWeightMatrix, DiagonalWithZerosForAbsentArcs) {
    const DirectedGraph g = symmetric_square();
    const Matrix full = mwc::spanning_weight_matrix(g, g);
    EXPECT_TRUE(full.diagonal().minCoeff() > 0.0);
    EXPECT_TRUE(Matrix(full.diagonal().asDiagonal()).isApprox(full));
    EXPECT_TRUE(mwc::spanning_weight_matrix(g, DirectedGraph(4, {})).isZero(0.0));

    const std::pair<int, int> matching[] = {{0, 1}, {2, 3}};
    const DirectedGraph sub = mwc::make_symmetric(4, matching);
    const Matrix w = mwc::spanning_weight_matrix(g, sub);
    for (std::size_t k = 0; k < g.arc_count(); ++k) {
        const auto d = w(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
        EXPECT_EQ(d, sub.has_arc(g.arc(k).tail, g.arc(k).head) ? 0.5 : 0.0);
    }
    EXPECT_THROW(mwc::spanning_weight_matrix(g, mwc::make_complete_symmetric(4)), mwc::InvalidArgument);
}

TEST(StepsizeSchedule, FormsAndValidation) {
    const auto h = mwc::StepsizeSchedule::harmonic();
    EXPECT_DOUBLE_EQ(h.at(0), 0.5);
    EXPECT_DOUBLE_EQ(h.at(8), 0.1);
    EXPECT_DOUBLE_EQ(mwc::StepsizeSchedule::constant(0.2).at(100), 0.2);
    const auto s = mwc::StepsizeSchedule::scripted({0.3, 0.2});
    EXPECT_DOUBLE_EQ(s.at(0), 0.3);
    EXPECT_DOUBLE_EQ(s.at(5), 0.2);
    EXPECT_THROW(mwc::StepsizeSchedule::harmonic(0.0).validate(), mwc::InvalidArgument);
    EXPECT_THROW(mwc::StepsizeSchedule::harmonic(1.0, 0.5).validate(), mwc::InvalidArgument);
    EXPECT_THROW(mwc::StepsizeSchedule::scripted({}).validate(), mwc::InvalidArgument);
}

TEST(Schedule, IndexingAndValidation) {
    const DirectedGraph g = symmetric_square();
    const std::pair<int, int> a[] = {{0, 1}, {2, 3}};
    const std::pair<int, int> b[] = {{1, 2}, {3, 0}};
    const mwc::Schedule p = mwc::Schedule::periodic({mwc::make_symmetric(4, a), mwc::make_symmetric(4, b)}, 2);
    EXPECT_NO_THROW(p.validate(g));
    EXPECT_TRUE(p.at(0) == p.subgraphs[0]);
    EXPECT_TRUE(p.at(1) == p.subgraphs[0]);
    EXPECT_TRUE(p.at(2) == p.subgraphs[1]);
    EXPECT_TRUE(p.at(4) == p.subgraphs[0]);
    EXPECT_TRUE(p.covers(g));

    mwc::Schedule scripted{mwc::Schedule::Mode::scripted, p.subgraphs, 1, {0, 0, 0}};
    EXPECT_EQ(scripted.recurring(), std::vector<std::size_t>{0});
    EXPECT_FALSE(scripted.covers(g));

    const mwc::Schedule directed = mwc::Schedule::fixed(DirectedGraph(4, {{0, 1}}));
    EXPECT_THROW(directed.validate(g), mwc::InvalidArgument);
    mwc::Schedule bad_index{mwc::Schedule::Mode::scripted, p.subgraphs, 1, {2}};
    EXPECT_THROW(bad_index.validate(g), mwc::InvalidArgument);
}

TEST(Trajectory, ConsensusRoundNeedsAFullWindow) {
    mwc::Trajectory t;
    t.consensus_error = {1.0, 1e-10, 1e-10};
    EXPECT_FALSE(t.converged());
    t.consensus_error.assign(12, 1e-12);
    t.consensus_error[0] = 1.0;
    EXPECT_EQ(t.consensus_round(), 1u);
    t.consensus_error[5] = 1e-3;
    EXPECT_FALSE(t.converged());
}

TEST(Metrics, ConsensusErrorAndResidual) {
    const WeightedNeighborGraph w = WeightedNeighborGraph::identity(symmetric_triangle(), 2);
    const Vector c = consensus_state(3, Vector::Constant(2, 3.0));
    EXPECT_EQ(mwc::consensus_error(c, 2), 0.0);
    EXPECT_EQ(mwc::local_agreement_residual(w, c), 0.0);
    Vector x = Vector::Zero(6);
    x(0) = 3.0;  // agent 1 at (3, 0), others at 0; mean (1, 0)
    EXPECT_DOUBLE_EQ(mwc::consensus_error(x, 2), 2.0);
    // Four arcs touch agent 1, each sees a difference of norm 3.
    EXPECT_DOUBLE_EQ(mwc::local_agreement_residual(w, x), 6.0);
}

struct Instance {
    Algorithm algorithm;
    WeightedNeighborGraph w;
};

std::vector<Instance> instances(oracle::Rng& rng) {
    std::vector<Instance> out;
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 2 + trial % 2;
        const WeightedNeighborGraph sym =
            oracle::random_weights(oracle::random_symmetric_connected(3 + trial % 3, trial % 3, rng), n, rng);
        out.push_back({Algorithm::gradient, sym});
        out.push_back({Algorithm::fixed_step, sym});
        out.push_back({Algorithm::metropolis_tv, sym});
        out.push_back({Algorithm::cycle_projection, oracle::random_weights(mwc::make_directed_cycle(3 + trial), n, rng)});
        out.push_back({Algorithm::general_projection,
                       oracle::random_weights(oracle::random_strongly_connected(3 + trial % 4, trial, rng), n, rng)});
    }
    return out;
}

mwc::Trajectory run(const Instance& in, const Vector& x0, std::size_t steps) {
    const RunOptions opts{steps, false};
    switch (in.algorithm) {
        case Algorithm::gradient:
            return mwc::run_gradient(in.w, x0, mwc::StepsizeSchedule::harmonic(), opts);
        case Algorithm::fixed_step:
            return mwc::run_fixed_step(in.w, x0, opts);
        case Algorithm::metropolis_tv:
            return mwc::run_metropolis_tv(in.w, x0, mwc::Schedule::fixed(in.w.graph()), opts);
        case Algorithm::cycle_projection:
            return mwc::run_cycle_projection(in.w, x0, false, opts);
        case Algorithm::general_projection:
            return mwc::run_general_projection(in.w, x0, opts);
    }
    return {};
}

TEST(Equivalence, PerAgentRoundsMatchStackedMatrices) {
    oracle::Rng rng(52);
    for (const Instance& in : instances(rng)) {
        const Vector x0 = random_state(in.w, rng);
        const mwc::Trajectory t = run(in, x0, 8);
        ASSERT_EQ(t.states.size(), 9u);
        EXPECT_TRUE(bitwise_equal(t.states[0], x0));
        for (std::size_t step = 0; step < 8; ++step) {
            const mwc::RoundInputs inputs{nullptr, mwc::StepsizeSchedule::harmonic().at(step)};
            const Matrix m = mwc::build_update_matrix(in.algorithm, in.w, inputs);
            const double scale = std::max(1.0, t.states[step + 1].cwiseAbs().maxCoeff());
            const double diff = (m * t.states[step] - t.states[step + 1]).cwiseAbs().maxCoeff();
            EXPECT_LT(diff, 1e-12 * scale) << mwc::to_string(in.algorithm) << " round " << step;
        }
    }
}

TEST(Equivalence, TimeVaryingMetropolisRoundsMatchTheirSubgraphMatrices) {
    oracle::Rng rng(53);
    const DirectedGraph g = symmetric_square();
    const WeightedNeighborGraph w = oracle::random_weights(g, 2, rng);
    const std::pair<int, int> a[] = {{0, 1}, {2, 3}};
    const std::pair<int, int> b[] = {{1, 2}, {3, 0}, {0, 1}};
    const mwc::Schedule s = mwc::Schedule::periodic({mwc::make_symmetric(4, a), mwc::make_symmetric(4, b)});
    const mwc::Trajectory t = mwc::run_metropolis_tv(w, random_state(w, rng), s, {6, false});
    for (std::size_t step = 0; step < 6; ++step) {
        const Matrix m = mwc::build_update_matrix(Algorithm::metropolis_tv, w, {&s.at(step), 0.0});
        EXPECT_LT((m * t.states[step] - t.states[step + 1]).cwiseAbs().maxCoeff(), 1e-12) << step;
    }
}

TEST(Equivalence, ConstantScheduleMatchesFullGraphRound) {
    oracle::Rng rng(54);
    const WeightedNeighborGraph w = oracle::random_weights(symmetric_square(), 3, rng);
    const Vector x0 = random_state(w, rng);
    const auto a = mwc::run_metropolis_tv(w, x0, mwc::Schedule::fixed(w.graph()), {5, false});
    const auto b = mwc::run_metropolis_tv(w, x0, mwc::Schedule::periodic({w.graph(), w.graph()}), {5, false});
    for (std::size_t k = 0; k < a.states.size(); ++k) {
        EXPECT_TRUE(bitwise_equal(a.states[k], b.states[k]));
    }
}

TEST(Runs, ConsensusStatesStayPut) {
    oracle::Rng rng(55);
    for (const Instance& in : instances(rng)) {
        const Vector x0 = consensus_state(in.w.agent_count(), oracle::random_matrix(in.w.n(), 1, rng).col(0));
        const mwc::Trajectory t = run(in, x0, 5);
        for (const Vector& x : t.states) {
            EXPECT_LT((x - x0).cwiseAbs().maxCoeff(), 1e-14) << mwc::to_string(in.algorithm);
        }
        const Matrix m = mwc::build_update_matrix(in.algorithm, in.w, {nullptr, 0.5});
        EXPECT_LT((m * x0 - x0).norm(), 1e-12 * x0.norm()) << mwc::to_string(in.algorithm);
    }
}

TEST(Runs, ZeroStepsKeepsOnlyTheInitialState) {
    oracle::Rng rng(56);
    const WeightedNeighborGraph w = oracle::random_weights(symmetric_triangle(), 2, rng);
    const Vector x0 = random_state(w, rng);
    const mwc::Trajectory t = mwc::run_fixed_step(w, x0, {0, false});
    ASSERT_EQ(t.states.size(), 1u);
    EXPECT_EQ(t.steps_run(), 0u);
    EXPECT_EQ(t.consensus_error.size(), 1u);
    EXPECT_EQ(t.residual.size(), 1u);
}

TEST(Runs, StopAtConsensusEndsAfterTheWindow) {
    const WeightedNeighborGraph w = WeightedNeighborGraph::identity(symmetric_triangle(), 2);
    oracle::Rng rng(57);
    const mwc::Trajectory t = mwc::run_fixed_step(w, random_state(w, rng), {10000, true});
    ASSERT_TRUE(t.converged());
    EXPECT_EQ(t.steps_run() + 1, *t.consensus_round() + mwc::kConsensusWindow);
}

TEST(Runs, PreconditionsAreEnforced) {
    oracle::Rng rng(58);
    const WeightedNeighborGraph cycle = oracle::random_weights(mwc::make_directed_cycle(4), 2, rng);
    const Vector x = random_state(cycle, rng);
    EXPECT_THROW(mwc::run_fixed_step(cycle, x, {1, false}), mwc::InvalidArgument);
    EXPECT_THROW(mwc::run_gradient(cycle, x, mwc::StepsizeSchedule::harmonic(), {1, false}), mwc::InvalidArgument);
    EXPECT_THROW(mwc::run_metropolis_tv(cycle, x, mwc::Schedule::fixed(cycle.graph()), {1, false}),
                 mwc::InvalidArgument);
    const WeightedNeighborGraph sym = oracle::random_weights(symmetric_square(), 2, rng);
    EXPECT_THROW(mwc::run_cycle_projection(sym, random_state(sym, rng), false, {1, false}), mwc::InvalidArgument);
    EXPECT_THROW(mwc::run_fixed_step(sym, Vector::Zero(3), {1, false}), mwc::InvalidArgument);
    EXPECT_THROW(mwc::build_update_matrix(Algorithm::cycle_projection, sym), mwc::InvalidArgument);
}

TEST(Projection, GeneralRuleReducesToCycleRuleBitwise) {
    oracle::Rng rng(59);
    for (int m = 2; m <= 6; ++m) {
        const WeightedNeighborGraph w = oracle::random_weights(mwc::make_directed_cycle(m), 3, rng);
        const Vector x0 = random_state(w, rng);
        const auto a = mwc::run_cycle_projection(w, x0, false, {50, false});
        const auto b = mwc::run_general_projection(w, x0, {50, false});
        ASSERT_EQ(a.states.size(), b.states.size());
        for (std::size_t k = 0; k < a.states.size(); ++k) {
            EXPECT_TRUE(bitwise_equal(a.states[k], b.states[k])) << m << " " << k;
        }
    }
}

TEST(Projection, ProjectedStartFollowsProjectedFlockingDynamics) {
    oracle::Rng rng(60);
    for (int m = 2; m <= 6; ++m) {
        const WeightedNeighborGraph w = oracle::random_weights(mwc::make_directed_cycle(m), 3, rng).normalized();
        std::vector<Matrix> p;
        for (int i = 0; i < m; ++i) {
            p.push_back(w.weight((i + m - 1) % m, i).transpose() * w.weight((i + m - 1) % m, i));
        }
        const Matrix big_p = mwc::block_diag(p);
        const Matrix f = mwc::flocking_matrix(w.graph());
        EXPECT_TRUE((f.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-15);
        const Matrix pf = big_p * oracle::naive_kronecker(f, Matrix::Identity(3, 3));

        const Vector x0 = mwc::project_initial_state(w, random_state(w, rng));
        EXPECT_LT((big_p * x0 - x0).norm(), 1e-12);
        const auto t = mwc::run_cycle_projection(w, x0, false, {20, false});
        for (std::size_t k = 0; k + 1 < t.states.size(); ++k) {
            EXPECT_LT((pf * t.states[k] - t.states[k + 1]).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(Projection, ProjectedStartReachesConsensusOnAnyCycle) {
    oracle::Rng rng(61);
    int not_well_configured = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 2 + trial % 5;
        const WeightedNeighborGraph w = oracle::random_weights(mwc::make_directed_cycle(m), 2, rng);
        not_well_configured += mwc::is_well_configured(w) ? 0 : 1;
        const auto t = mwc::run_cycle_projection(w, random_state(w, rng), true, {50000, true});
        EXPECT_TRUE(t.converged()) << trial << " final error " << t.consensus_error.back();
    }
    EXPECT_GT(not_well_configured, 5);
}

TEST(Counterexample, UpdateMatrixHasTheDisplayedBlocks) {
    const WeightedNeighborGraph w = counterexample_weights();
    const Matrix m = mwc::build_update_matrix(Algorithm::general_projection, w);
    const auto proj = [&](int tail, int head) {
        const Matrix& c = w.weight(tail, head);
        return Matrix(c.transpose() * (c * c.transpose()).inverse() * c);
    };
    const Matrix p1 = proj(0, 1);
    const Matrix p2 = proj(1, 2);
    const Matrix p3 = proj(2, 0);
    const Matrix p4 = proj(1, 0);
    const Matrix id = Matrix::Identity(2, 2);
    const Matrix zero = Matrix::Zero(2, 2);
    const Matrix expected[3][3] = {
        {id - p4 / 3.0 - p3 / 3.0, p4 / 3.0, p3 / 3.0},
        {p1 / 2.0, id - p1 / 2.0, zero},
        {zero, p2 / 2.0, id - p2 / 2.0},
    };
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            EXPECT_LT((Matrix(mwc::block(m, 2, i, j)) - expected[i][j]).cwiseAbs().maxCoeff(), 1e-15) << i << j;
        }
    }
}

TEST(Counterexample, NonConsensusFixedPoint) {
    const WeightedNeighborGraph w = counterexample_weights();
    ASSERT_TRUE(mwc::is_well_configured(w));
    const Matrix m = mwc::build_update_matrix(Algorithm::general_projection, w);
    for (double scale : {1.0, -2.5, 1e-3}) {
        const Vector y = Vector::Unit(2, 0) * scale;
        Vector x(6);
        x << Vector::Zero(2), y, -y;
        EXPECT_LT((m * x - x).norm(), 1e-12);
        const auto t = mwc::run_general_projection(w, x, {100, false});
        EXPECT_FALSE(t.converged());
        for (double e : t.consensus_error) {
            EXPECT_GE(e, 0.5 * y.norm());
        }
    }
}

TEST(Gradient, AnalyticGradientMatchesFiniteDifferences) {
    oracle::Rng rng(62);
    for (int trial = 0; trial < 10; ++trial) {
        const WeightedNeighborGraph w =
            oracle::random_weights(oracle::random_weakly_connected(3 + trial % 3, trial % 3, rng), 2, rng);
        const auto f = [&](const Vector& x) { return mwc::agreement_objective(w, x); };
        for (int point = 0; point < 20; ++point) {
            const Vector x = random_state(w, rng);
            const Vector analytic = mwc::agreement_gradient(w, x);
            const Vector numeric = oracle::central_difference(f, x, 1e-5);
            EXPECT_LE((analytic - numeric).norm(), 1e-6 * std::max(1.0, analytic.norm()));
        }
    }
}

TEST(Gradient, DiminishingStepsReachConsensusOnTheTriangle) {
    oracle::Rng rng(63);
    // Non-equal pair matrices in the plane: each pair's kernels meet only at 0.
    const DirectedGraph g = symmetric_triangle();
    std::vector<Matrix> c;
    for (std::size_t k = 0; k < g.arc_count(); ++k) {
        c.push_back(oracle::random_matrix(1, 2, rng));
    }
    const WeightedNeighborGraph w(g, 2, c);
    ASSERT_TRUE(mwc::is_well_configured(w));
    const auto t = mwc::run_gradient(w, random_state(w, rng), mwc::StepsizeSchedule::harmonic(), {2000, false});
    EXPECT_LT(t.consensus_error[2000], 1e-3 * t.consensus_error[0]);
}

TEST(Covering, KernelMatchesLocalAgreementKernel) {
    oracle::Rng rng(64);
    const DirectedGraph g = symmetric_square();
    const std::pair<int, int> a[] = {{0, 1}, {2, 3}};
    const std::pair<int, int> b[] = {{1, 2}, {3, 0}};
    const std::vector<DirectedGraph> subs{mwc::make_symmetric(4, a), mwc::make_symmetric(4, b)};
    for (int trial = 0; trial < 20; ++trial) {
        const WeightedNeighborGraph w = oracle::random_weights(g, 2, rng);
        const auto k1 = mwc::kernel_basis(mwc::local_agreement_operator(w));
        const auto k2 = mwc::kernel_basis(mwc::covering_operator(w, subs));
        EXPECT_TRUE(mwc::same_subspace(k1, k2)) << trial;
    }
}

TEST(TimeVarying, AlternatingMatchingsReachLocalAgreement) {
    oracle::Rng rng(65);
    const DirectedGraph g = symmetric_square();
    const std::pair<int, int> a[] = {{0, 1}, {2, 3}};
    const std::pair<int, int> b[] = {{1, 2}, {3, 0}};
    const mwc::Schedule s = mwc::Schedule::periodic({mwc::make_symmetric(4, a), mwc::make_symmetric(4, b)});
    const WeightedNeighborGraph w = mwc::synthesize(g, 2, mwc::pair_cycle_decomposition(g), mwc::KernelMode::nonzero);
    const auto t = mwc::run_metropolis_tv(w, random_state(w, rng), s, {5000, false});
    EXPECT_LT(t.consensus_error.back(), 1e-6);
    EXPECT_LT(t.residual.back(), 1e-6);
}

}  // namespace
