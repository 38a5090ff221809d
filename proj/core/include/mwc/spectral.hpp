#pragma once

#include <complex>
#include <vector>

#include "mwc/numerics.hpp"

namespace mwc {

/// Absolute tolerance for counting eigenvalues at 0 and at 1.
inline constexpr double kEigenTolerance = 1e-8;

struct SpectralReport {
    std::vector<std::complex<double>> eigenvalues;
    bool symmetric = false;

    int ones = 0;         // |lambda - 1| <= tol
    int zeros = 0;        // |lambda| <= tol
    int inside_unit = 0;  // not at 1, |lambda| < 1 - tol
    int outside = 0;      // everything else (on or beyond the unit circle)
    int positive = 0;     // real part > tol
    int negative = 0;     // real part < -tol

    double spectral_radius = 0.0;
    /// Largest |lambda| over eigenvalues not at 1; zero when there are none.
    double second_modulus = 0.0;
    /// dim {x : Mx = x}, from the singular values of M - I.
    int fixed_point_dim = 0;
    /// ||M||_{2,inf} over n x n blocks.
    double mixed_norm = 0.0;

    /// Symmetric with every eigenvalue in (-1, 1].
    bool paracontracting() const;
    /// Every eigenvalue at 1 and M has no off-identity action.
    bool degenerate = false;
};

/// Eigenvalue census of a square matrix with n x n blocking for the mixed
/// norm. Throws InvalidArgument when M is not square or not a multiple of n.
SpectralReport spectral_report(const Matrix& m, int n, double tol = kEigenTolerance);

}  // namespace mwc
