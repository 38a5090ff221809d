#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mwc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative rank tolerance: singular values below kRankTolerance * sigma_max
/// count as zero. Every kernel/rank verdict in the library goes through it
/// unless a caller overrides it.
inline constexpr double kRankTolerance = 1e-10;

/// Numerical rank of A at relative tolerance `tol`.
int numerical_rank(const Matrix& a, double tol = kRankTolerance);

/// Rows spanning the same space as C's rows with C* C*' = I. Throws
/// InvalidArgument when C does not have full row rank.
Matrix orthonormalize_rows(const Matrix& c, double tol = kRankTolerance);

/// Orthonormal rows spanning C's row space; redundant rows are dropped, so a
/// zero matrix yields a 0 x n result. Kernel is preserved.
Matrix row_space_basis(const Matrix& c, double tol = kRankTolerance);

/// P = C'(CC')^{-1}C, the orthogonal projection onto C's row space. Throws
/// InvalidArgument when CC' is singular.
Matrix projection_matrix(const Matrix& c, double tol = kRankTolerance);

Matrix kronecker(const Matrix& a, const Matrix& b);
Matrix block_diag(std::span<const Matrix> blocks);

/// Full spectrum with multiplicity. A symmetric input is solved with the
/// self-adjoint solver and returned real, ascending; otherwise eigenvalues are
/// ordered by real part then imaginary part.
std::vector<std::complex<double>> eigenvalues(const Matrix& a);

bool is_symmetric_matrix(const Matrix& a, double tol = 1e-12);

/// Induced 2-norm (largest singular value).
double spectral_norm(const Matrix& a);

/// ||Q||_{2,inf}: the induced infinity norm of the m x m matrix of blockwise
/// spectral norms of Q's n x n blocks. Throws InvalidArgument when Q is not
/// square or its size is not a multiple of `block`.
double mixed_norm_2_inf(const Matrix& q, int block);

/// The m x m matrix <Q> of blockwise spectral norms.
Matrix block_norms(const Matrix& q, int block);

/// n x n block (i, j) of a block matrix.
inline auto block(const Matrix& q, int n, int i, int j) { return q.block(i * n, j * n, n, n); }

}  // namespace mwc
