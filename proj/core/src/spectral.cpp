#include "mwc/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "mwc/error.hpp"

namespace mwc {

bool SpectralReport::paracontracting() const {
    if (!symmetric) {
        return false;
    }
    return std::all_of(eigenvalues.begin(), eigenvalues.end(), [](const std::complex<double>& l) {
        return l.real() > -1.0 + kEigenTolerance && l.real() <= 1.0 + kEigenTolerance;
    });
}

SpectralReport spectral_report(const Matrix& m, int n, double tol) {
    if (m.rows() != m.cols()) {
        throw InvalidArgument("spectral report needs a square matrix");
    }
    if (n < 1 || m.rows() % n != 0) {
        throw InvalidArgument("matrix size is not a multiple of the block size");
    }
    SpectralReport r;
    r.symmetric = is_symmetric_matrix(m);
    r.eigenvalues = eigenvalues(m);
    r.mixed_norm = mixed_norm_2_inf(m, n);

    for (const auto& l : r.eigenvalues) {
        const double mod = std::abs(l);
        const bool one = std::abs(l - 1.0) <= tol;
        r.spectral_radius = std::max(r.spectral_radius, mod);
        if (one) {
            ++r.ones;
        } else {
            r.second_modulus = std::max(r.second_modulus, mod);
            if (mod < 1.0 - tol) {
                ++r.inside_unit;
            } else {
                ++r.outside;
            }
        }
        if (mod <= tol) {
            ++r.zeros;
        }
        if (l.real() > tol) {
            ++r.positive;
        } else if (l.real() < -tol) {
            ++r.negative;
        }
    }

    const Matrix shifted = m - Matrix::Identity(m.rows(), m.cols());
    if (m.rows() > 0) {
        Eigen::JacobiSVD<Matrix> svd(shifted);
        r.fixed_point_dim = static_cast<int>((svd.singularValues().array() <= tol).count());
    }
    r.degenerate = m.rows() > 0 && shifted.cwiseAbs().maxCoeff() <= tol;
    return r;
}

}  // namespace mwc
