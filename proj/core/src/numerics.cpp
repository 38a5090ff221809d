#include "mwc/numerics.hpp"

#include <algorithm>
#include <string>

#include "mwc/error.hpp"

namespace mwc {

namespace {

int rank_from_singular_values(const Vector& sv, double tol) {
    if (sv.size() == 0 || sv(0) <= 0.0) {
        return 0;
    }
    const double cutoff = tol * sv(0);
    return static_cast<int>((sv.array() > cutoff).count());
}

bool has_orthonormal_rows(const Matrix& c) {
    const Matrix gram = c * c.transpose();
    return (gram - Matrix::Identity(c.rows(), c.rows())).cwiseAbs().maxCoeff() <= 1e-14;
}

}  // namespace

int numerical_rank(const Matrix& a, double tol) {
    if (a.size() == 0) {
        return 0;
    }
    Eigen::JacobiSVD<Matrix> svd(a);
    return rank_from_singular_values(svd.singularValues(), tol);
}

Matrix orthonormalize_rows(const Matrix& c, double tol) {
    if (c.rows() == 0) {
        return c;
    }
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const int rank = rank_from_singular_values(svd.singularValues(), tol);
    if (rank != c.rows()) {
        throw InvalidArgument("matrix with " + std::to_string(c.rows()) + " rows has rank " + std::to_string(rank) +
                              "; drop the redundant rows before orthonormalizing");
    }
    if (has_orthonormal_rows(c)) {
        return c;
    }
    return svd.matrixU() * svd.matrixV().transpose();
}

Matrix row_space_basis(const Matrix& c, double tol) {
    if (c.rows() == 0) {
        return c;
    }
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const int rank = rank_from_singular_values(svd.singularValues(), tol);
    if (rank == c.rows()) {
        return orthonormalize_rows(c, tol);
    }
    return svd.matrixV().leftCols(rank).transpose();
}

Matrix projection_matrix(const Matrix& c, double tol) {
    if (c.rows() == 0) {
        return Matrix::Zero(c.cols(), c.cols());
    }
    if (numerical_rank(c, tol) != c.rows()) {
        throw InvalidArgument("CC' is singular: the matrix does not have full row rank");
    }
    const Matrix gram = c * c.transpose();
    const Matrix p = c.transpose() * gram.ldlt().solve(c);
    return 0.5 * (p + p.transpose());
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix block_diag(std::span<const Matrix> blocks) {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    for (const Matrix& b : blocks) {
        rows += b.rows();
        cols += b.cols();
    }
    Matrix out = Matrix::Zero(rows, cols);
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    for (const Matrix& b : blocks) {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

bool is_symmetric_matrix(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) {
        return false;
    }
    if (a.size() == 0) {
        return true;
    }
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw InvalidArgument("eigenvalues need a square matrix");
    }
    std::vector<std::complex<double>> out;
    if (a.size() == 0) {
        return out;
    }
    if (is_symmetric_matrix(a)) {
        const Matrix sym = 0.5 * (a + a.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            out.emplace_back(solver.eigenvalues()(i), 0.0);
        }
        return out;
    }
    Eigen::EigenSolver<Matrix> solver(a, false);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        out.push_back(solver.eigenvalues()(i));
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return out;
}

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

Matrix block_norms(const Matrix& q, int block_size) {
    if (block_size < 1 || q.rows() != q.cols() || q.rows() % block_size != 0) {
        throw InvalidArgument("(2,inf) norm needs a square matrix made of " + std::to_string(block_size) + "x" +
                              std::to_string(block_size) + " blocks");
    }
    const int m = static_cast<int>(q.rows()) / block_size;
    Matrix norms(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            norms(i, j) = spectral_norm(block(q, block_size, i, j));
        }
    }
    return norms;
}

double mixed_norm_2_inf(const Matrix& q, int block_size) {
    const Matrix norms = block_norms(q, block_size);
    if (norms.size() == 0) {
        return 0.0;
    }
    return norms.rowwise().sum().maxCoeff();
}

}  // namespace mwc
