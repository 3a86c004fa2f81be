#pragma once

#include <Eigen/Dense>
#include <vector>

#include "memcap/channel.hpp"

namespace memcap {

// n x n top-left corner of the infinite Toeplitz matrix: entry (i,k) = a_{i-k},
// zero above the diagonal for this channel (a_j = 0 for j < 0).
struct ToeplitzCorner {
    Eigen::MatrixXd entries;

    int order() const { return static_cast<int>(entries.rows()); }
};

// Wrap-around companion of the banded Toeplitz matrix: entry (i,k) =
// c_{(i-k) mod n} with c_j = a_j for j <= band. Its singular values are exact
// samples |f_N(2 pi i / n)|, and T_n(f_N) - C differs only in the upper-right
// corner triangle, so rank(T_n(f_N) - C) <= band.
struct CirculantMatrix {
    Eigen::MatrixXd entries;
    int band = 0;

    int order() const { return static_cast<int>(entries.rows()); }
};

// Ascending singular values s_1 <= ... <= s_n.
struct SingularSpectrum {
    std::vector<double> values;

    int size() const { return static_cast<int>(values.size()); }
    double largest() const { return values.empty() ? 0.0 : values.back(); }
};

ToeplitzCorner build_toeplitz(const CoefficientSequence& coeffs, int n);

// Requires 0 <= N and 2N < n; throws BandTooWide otherwise.
CirculantMatrix build_circulant(const CoefficientSequence& coeffs, int N, int n);

inline constexpr int kDenseSvdLimit = 2048;

// Full spectrum. Dense SVD up to dense_limit; beyond that the Gram matrix
// M^T M is eigensolved and negative roundoff eigenvalues clamped to zero.
// Accuracy target 1e-10 relative on the largest value.
SingularSpectrum singular_values(const Eigen::MatrixXd& m,
                                 int dense_limit = kDenseSvdLimit);
SingularSpectrum singular_values(const ToeplitzCorner& m,
                                 int dense_limit = kDenseSvdLimit);
SingularSpectrum singular_values(const CirculantMatrix& m,
                                 int dense_limit = kDenseSvdLimit);

// Mode transmissivities eta_i = s_i^2 of the n-use channel, ascending.
// Each lies in [0, M_{lambda,mu}].
std::vector<double> mode_transmissivities(const ChannelParams& params, int n);

}  // namespace memcap
