#pragma once

#include <span>

#include "mwc/numerics.hpp"

namespace mwc {

/// Subspace of R^n held as a matrix with orthonormal columns. The trivial
/// subspace has zero columns.
class SubspaceBasis {
public:
    /// Trivial subspace of R^n.
    explicit SubspaceBasis(int ambient_dim = 0);

    /// Span of the columns of `vectors` (any spanning set; it is
    /// re-orthonormalized and rank-reduced at `tol`).
    static SubspaceBasis span_of(const Matrix& vectors, double tol = kRankTolerance);
    /// span{e_axis} in R^n, axis 0-based.
    static SubspaceBasis axis(int ambient_dim, int axis);
    static SubspaceBasis whole(int ambient_dim);
    /// Wraps a basis already known to be orthonormal.
    static SubspaceBasis from_orthonormal(Matrix basis);

    int ambient_dim() const { return ambient_dim_; }
    int dim() const { return static_cast<int>(basis_.cols()); }
    bool is_trivial() const { return dim() == 0; }
    const Matrix& basis() const { return basis_; }

    /// Orthogonal projector onto the subspace.
    Matrix projector() const { return basis_ * basis_.transpose(); }
    /// Distance of v from the subspace.
    double residual(const Vector& v) const;
    bool contains(const Vector& v, double tol = 1e-9) const;

private:
    int ambient_dim_ = 0;
    Matrix basis_;
};

/// Orthonormal basis of kernel A (cols - rank vectors).
SubspaceBasis kernel_basis(const Matrix& a, double tol = kRankTolerance);

/// Orthonormal basis of the column space of A.
SubspaceBasis range_basis(const Matrix& a, double tol = kRankTolerance);

SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b, double tol = kRankTolerance);
SubspaceBasis sum(const SubspaceBasis& a, const SubspaceBasis& b, double tol = kRankTolerance);

/// Largest mutual projection residual max(||(I-P_b)A||, ||(I-P_a)B||); zero
/// exactly when the subspaces coincide. Dimension mismatch returns +inf.
double subspace_distance(const SubspaceBasis& a, const SubspaceBasis& b);
bool same_subspace(const SubspaceBasis& a, const SubspaceBasis& b, double tol = 1e-9);

/// True iff dim(sum S_i) equals sum dim(S_i); equivalently each S_i meets the
/// sum of the others only at zero. Trivial members never break independence.
bool subspace_family_independent(std::span<const SubspaceBasis> family, double tol = kRankTolerance);

}  // namespace mwc
