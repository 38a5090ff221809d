#include <gtest/gtest.h>

#include "mwc/subspace.hpp"
#include "oracles.hpp"

namespace {

using mwc::Matrix;
using mwc::SubspaceBasis;

SubspaceBasis random_subspace(int n, int dim, oracle::Rng& rng) {
    if (dim == 0) {
        return SubspaceBasis(n);
    }
    return SubspaceBasis::span_of(oracle::random_matrix(n, dim, rng));
}

TEST(Kernel, DimensionAndAnnihilation) {
    oracle::Rng rng(1);
    for (int trial = 0; trial < 30; ++trial) {
        const int r = trial % 4;
        const Matrix c = r == 0 ? Matrix::Zero(2, 5) : Matrix(oracle::random_matrix(r, 5, rng));
        const SubspaceBasis k = mwc::kernel_basis(c);
        EXPECT_EQ(k.dim(), 5 - r);
        EXPECT_LT((c * k.basis()).norm(), 1e-12);
        EXPECT_TRUE((k.basis().transpose() * k.basis()).isApprox(Matrix::Identity(k.dim(), k.dim()), 1e-12));
    }
    EXPECT_EQ(mwc::kernel_basis(Matrix(0, 3)).dim(), 3);
}

TEST(Intersect, MatchesDimensionFormula) {
    oracle::Rng rng(2);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 4;
        const SubspaceBasis a = random_subspace(n, trial % (n + 1), rng);
        const SubspaceBasis b = random_subspace(n, (trial / 3) % (n + 1), rng);
        const SubspaceBasis i = mwc::intersect(a, b);
        EXPECT_EQ(i.dim(), oracle::intersection_dim(a.basis(), b.basis())) << trial;
        for (Eigen::Index c = 0; c < i.basis().cols(); ++c) {
            EXPECT_TRUE(a.contains(i.basis().col(c)));
            EXPECT_TRUE(b.contains(i.basis().col(c)));
        }
    }
}

TEST(Intersect, SharedDirection) {
    const SubspaceBasis xy = SubspaceBasis::span_of((Matrix(3, 2) << 1, 0, 0, 1, 0, 0).finished());
    const SubspaceBasis yz = SubspaceBasis::span_of((Matrix(3, 2) << 0, 0, 1, 0, 0, 1).finished());
    const SubspaceBasis y = mwc::intersect(xy, yz);
    EXPECT_TRUE(mwc::same_subspace(y, SubspaceBasis::axis(3, 1)));
    EXPECT_EQ(mwc::sum(xy, yz).dim(), 3);
}

TEST(Independence, MatchesPairwiseDefinition) {
    oracle::Rng rng(3);
    int independent = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + trial % 4;
        const int count = 1 + trial % 4;
        std::vector<SubspaceBasis> family;
        std::vector<Matrix> bases;
        for (int k = 0; k < count; ++k) {
            // Coordinate axes collide often; random lines rarely do.
            SubspaceBasis s = (trial + k) % 3 == 0
                                  ? random_subspace(n, std::uniform_int_distribution<int>(0, 2)(rng), rng)
                                  : SubspaceBasis::axis(n, std::uniform_int_distribution<int>(0, n - 1)(rng));
            bases.push_back(s.basis());
            family.push_back(std::move(s));
        }
        const bool got = mwc::subspace_family_independent(family);
        EXPECT_EQ(got, oracle::independent_pairwise(bases, n)) << trial;
        independent += got ? 1 : 0;
    }
    EXPECT_GT(independent, 50);
    EXPECT_LT(independent, 250);
}

TEST(Independence, EdgeCases) {
    EXPECT_TRUE(mwc::subspace_family_independent(std::vector<SubspaceBasis>{}));
    const SubspaceBasis zeros[] = {SubspaceBasis(3), SubspaceBasis(3)};
    EXPECT_TRUE(mwc::subspace_family_independent(zeros));
    const SubspaceBasis repeated[] = {SubspaceBasis::axis(2, 0), SubspaceBasis::axis(2, 0)};
    EXPECT_FALSE(mwc::subspace_family_independent(repeated));
    const SubspaceBasis three_lines[] = {SubspaceBasis::axis(2, 0), SubspaceBasis::axis(2, 1),
                                         SubspaceBasis::span_of(Matrix::Ones(2, 1))};
    EXPECT_FALSE(mwc::subspace_family_independent(three_lines));
}

TEST(Distance, SameSubspaceIgnoresBasisChoice) {
    oracle::Rng rng(4);
    const Matrix v = oracle::random_matrix(4, 2, rng);
    const Matrix mixed = v * oracle::random_matrix(2, 2, rng);
    EXPECT_TRUE(mwc::same_subspace(SubspaceBasis::span_of(v), SubspaceBasis::span_of(mixed)));
    EXPECT_FALSE(mwc::same_subspace(SubspaceBasis::axis(3, 0), SubspaceBasis::axis(3, 1)));
    EXPECT_TRUE(std::isinf(mwc::subspace_distance(SubspaceBasis::axis(3, 0), SubspaceBasis::whole(3))));
}

}  // namespace
