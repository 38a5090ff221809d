#include "mwc/subspace.hpp"

#include <limits>

#include "mwc/error.hpp"

namespace mwc {

SubspaceBasis::SubspaceBasis(int ambient_dim) : ambient_dim_(ambient_dim), basis_(ambient_dim, 0) {
    if (ambient_dim < 0) {
        throw InvalidArgument("negative ambient dimension");
    }
}

SubspaceBasis SubspaceBasis::span_of(const Matrix& vectors, double tol) {
    return range_basis(vectors, tol);
}

SubspaceBasis SubspaceBasis::axis(int ambient_dim, int axis) {
    if (axis < 0 || axis >= ambient_dim) {
        throw InvalidArgument("axis " + std::to_string(axis) + " outside R^" + std::to_string(ambient_dim));
    }
    Matrix e = Matrix::Zero(ambient_dim, 1);
    e(axis, 0) = 1.0;
    return from_orthonormal(std::move(e));
}

SubspaceBasis SubspaceBasis::whole(int ambient_dim) {
    return from_orthonormal(Matrix::Identity(ambient_dim, ambient_dim));
}

SubspaceBasis SubspaceBasis::from_orthonormal(Matrix basis) {
    SubspaceBasis s(static_cast<int>(basis.rows()));
    s.basis_ = std::move(basis);
    return s;
}

double SubspaceBasis::residual(const Vector& v) const {
    return (v - basis_ * (basis_.transpose() * v)).norm();
}

bool SubspaceBasis::contains(const Vector& v, double tol) const {
    return residual(v) <= tol * std::max(1.0, v.norm());
}

SubspaceBasis kernel_basis(const Matrix& a, double tol) {
    const auto n = static_cast<int>(a.cols());
    if (a.rows() == 0 || a.isZero(0.0)) {
        return SubspaceBasis::whole(n);
    }
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const double cutoff = tol * sv(0);
    const auto rank = static_cast<int>((sv.array() > cutoff).count());
    return SubspaceBasis::from_orthonormal(svd.matrixV().rightCols(n - rank));
}

SubspaceBasis range_basis(const Matrix& a, double tol) {
    const auto rows = static_cast<int>(a.rows());
    if (a.cols() == 0 || a.isZero(0.0)) {
        return SubspaceBasis(rows);
    }
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU);
    const Vector& sv = svd.singularValues();
    const double cutoff = tol * sv(0);
    const auto rank = static_cast<Eigen::Index>((sv.array() > cutoff).count());
    return SubspaceBasis::from_orthonormal(svd.matrixU().leftCols(rank));
}

SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b, double tol) {
    if (a.ambient_dim() != b.ambient_dim()) {
        throw InvalidArgument("subspaces live in different ambient spaces");
    }
    if (a.is_trivial() || b.is_trivial()) {
        return SubspaceBasis(a.ambient_dim());
    }
    // A x = B y  <=>  [A  -B] (x; y) = 0; the intersection is A x over that kernel.
    Matrix stacked(a.ambient_dim(), a.dim() + b.dim());
    stacked << a.basis(), -b.basis();
    const SubspaceBasis coeffs = kernel_basis(stacked, tol);
    if (coeffs.is_trivial()) {
        return SubspaceBasis(a.ambient_dim());
    }
    return range_basis(a.basis() * coeffs.basis().topRows(a.dim()), tol);
}

SubspaceBasis sum(const SubspaceBasis& a, const SubspaceBasis& b, double tol) {
    if (a.ambient_dim() != b.ambient_dim()) {
        throw InvalidArgument("subspaces live in different ambient spaces");
    }
    Matrix stacked(a.ambient_dim(), a.dim() + b.dim());
    stacked << a.basis(), b.basis();
    return range_basis(stacked, tol);
}

double subspace_distance(const SubspaceBasis& a, const SubspaceBasis& b) {
    if (a.ambient_dim() != b.ambient_dim() || a.dim() != b.dim()) {
        return std::numeric_limits<double>::infinity();
    }
    if (a.is_trivial()) {
        return 0.0;
    }
    const Matrix a_off_b = a.basis() - b.projector() * a.basis();
    const Matrix b_off_a = b.basis() - a.projector() * b.basis();
    return std::max(spectral_norm(a_off_b), spectral_norm(b_off_a));
}

bool same_subspace(const SubspaceBasis& a, const SubspaceBasis& b, double tol) {
    return subspace_distance(a, b) <= tol;
}

bool subspace_family_independent(std::span<const SubspaceBasis> family, double tol) {
    if (family.empty()) {
        return true;
    }
    const int n = family.front().ambient_dim();
    Eigen::Index total = 0;
    for (const SubspaceBasis& s : family) {
        if (s.ambient_dim() != n) {
            throw InvalidArgument("subspace family mixes ambient dimensions");
        }
        total += s.dim();
    }
    if (total == 0) {
        return true;
    }
    if (total > n) {
        return false;
    }
    Matrix stacked(n, total);
    Eigen::Index col = 0;
    for (const SubspaceBasis& s : family) {
        stacked.middleCols(col, s.dim()) = s.basis();
        col += s.dim();
    }
    return numerical_rank(stacked, tol) == total;
}

}  // namespace mwc
