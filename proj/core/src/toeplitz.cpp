#include "memcap/toeplitz.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

namespace memcap {

ToeplitzCorner build_toeplitz(const CoefficientSequence& coeffs, int n) {
    if (n < 1) {
        throw DomainError("build_toeplitz: n must be >= 1");
    }
    ToeplitzCorner out;
    out.entries = Eigen::MatrixXd::Zero(n, n);
    const int J = coeffs.truncation_index();
    for (int col = 0; col < n; ++col) {
        const int top = std::min(n - 1, col + J);
        for (int row = col; row <= top; ++row) {
            out.entries(row, col) = coeffs.values[static_cast<size_t>(row - col)];
        }
    }
    return out;
}

CirculantMatrix build_circulant(const CoefficientSequence& coeffs, int N,
                                int n) {
    if (N < 0) {
        throw DomainError("build_circulant: N must be >= 0");
    }
    if (2 * N >= n) {
        throw BandTooWide("build_circulant: band " + std::to_string(N) +
                          " too wide for order " + std::to_string(n) +
                          " (need 2N < n)");
    }
    // First column c_j = a_j for j <= N, then wrapped along (i - k) mod n.
    std::vector<double> col(static_cast<size_t>(n), 0.0);
    const int top = std::min(N, coeffs.truncation_index());
    for (int j = 0; j <= top; ++j) {
        col[static_cast<size_t>(j)] = coeffs.values[static_cast<size_t>(j)];
    }
    CirculantMatrix out;
    out.band = N;
    out.entries = Eigen::MatrixXd(n, n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            out.entries(i, k) = col[static_cast<size_t>(((i - k) % n + n) % n)];
        }
    }
    return out;
}

SingularSpectrum singular_values(const Eigen::MatrixXd& m, int dense_limit) {
    const int n = static_cast<int>(m.rows());
    SingularSpectrum out;
    out.values.resize(static_cast<size_t>(n));
    if (n <= dense_limit) {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
        if (svd.info() != Eigen::Success) {
            throw ConvergenceFailure("dense SVD did not converge at n = " +
                                     std::to_string(n));
        }
        // Eigen reports descending; the spectrum is ascending.
        const auto& s = svd.singularValues();
        for (int i = 0; i < n; ++i) {
            out.values[static_cast<size_t>(i)] = s(n - 1 - i);
        }
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.transpose() * m);
        if (es.info() != Eigen::Success) {
            throw ConvergenceFailure("Gram eigensolve did not converge at n = " +
                                     std::to_string(n));
        }
        const auto& ev = es.eigenvalues();  // ascending
        for (int i = 0; i < n; ++i) {
            out.values[static_cast<size_t>(i)] = std::sqrt(std::max(ev(i), 0.0));
        }
    }
    return out;
}

SingularSpectrum singular_values(const ToeplitzCorner& m, int dense_limit) {
    return singular_values(m.entries, dense_limit);
}

SingularSpectrum singular_values(const CirculantMatrix& m, int dense_limit) {
    return singular_values(m.entries, dense_limit);
}

std::vector<double> mode_transmissivities(const ChannelParams& params, int n) {
    const CoefficientSequence coeffs = channel_coefficients(params);
    const SingularSpectrum spectrum = singular_values(build_toeplitz(coeffs, n));
    std::vector<double> etas(spectrum.values.size());
    for (size_t i = 0; i < etas.size(); ++i) {
        etas[i] = spectrum.values[i] * spectrum.values[i];
    }
    return etas;
}

}  // namespace memcap
