#pragma once

#include <complex>
#include <vector>

#include "memcap/errors.hpp"

namespace memcap {

// Lossy bosonic fibre with inter-use correlation. lambda is the transmissivity,
// mu the memory strength; mu = 0 is the memoryless channel. The endpoints
// lambda in {0,1} and mu = 1 are rejected: the symbol and the capacity
// formulas degenerate there.
struct ChannelParams {
    double lambda;
    double mu;

    ChannelParams(double lambda_, double mu_);
};

// Generalized Laguerre polynomial L_m^{(-1)}(x) by the stable three-term
// recurrence. The textbook binomial sum cancels catastrophically for m over a
// few dozen; it survives in the tests as a small-m oracle only.
double laguerre_minus_one(int m, double x);

// Fourier coefficients a_0..a_J of the channel symbol, a_j = 0 for j < 0.
// truncation_index() is J. decay_scale/decay_ratio carry the provable
// envelope |a_j| <= decay_scale * decay_ratio^j (j >= 1) used for tail bounds;
// both zero means the sequence is exact (no tail), e.g. after truncate_band.
struct CoefficientSequence {
    std::vector<double> values;
    double relative_tolerance = 0.0;
    double decay_scale = 0.0;
    double decay_ratio = 0.0;

    int truncation_index() const { return static_cast<int>(values.size()) - 1; }
};

inline constexpr double kDefaultCoefficientTolerance = 1e-14;
inline constexpr int kDefaultMaxCoefficientIndex = 100000;

// a_j = sqrt(lambda) mu^{j/2} L_j^{(-1)}(-ln lambda), truncated once the tail
// is provably below relative_tolerance * a_0. Throws TruncationBudgetExceeded
// if the cap is reached first (mu close to 1).
CoefficientSequence channel_coefficients(
    const ChannelParams& params,
    double relative_tolerance = kDefaultCoefficientTolerance,
    int max_index = kDefaultMaxCoefficientIndex);

// Symbol f(theta) = lambda^{-1/2 + 1/(1 - sqrt(mu) e^{i theta})}.
std::complex<double> symbol_eval(const ChannelParams& params, double theta);

// Partial sum of the coefficient series up to degree 'band' (the truncated
// symbol f_N). band is clipped to the sequence's truncation index.
std::complex<double> truncated_symbol_eval(const CoefficientSequence& coeffs,
                                           int band, double theta);

// eta(theta) = lambda^{(1-mu)/(1 - 2 sqrt(mu) cos theta + mu)} = |f(theta)|^2.
// Monotone increasing on [0, pi], symmetric about pi.
double effective_transmissivity(const ChannelParams& params, double theta);

// M = lambda^{(1-sqrt(mu))/(1+sqrt(mu))} = max_theta eta(theta), reached at theta = pi.
double max_transmissivity(const ChannelParams& params);

// Unique theta in [0, pi] with eta(theta) = level, by bisection on the
// monotone branch. Requires eta(0) <= level <= M (and hence mu > 0 unless
// level == lambda exactly).
double theta_for_transmissivity(const ChannelParams& params, double level);

// ||f^{(k)}||_2 = sqrt(2 pi sum_j j^{2k} a_j^2), un-normalized L2 norm on
// [0, 2 pi]. k = 0 gives ||f||_2. Throws TruncationBudgetExceeded when the
// weighted tail bound is not provably below the sequence tolerance.
double derivative_l2_norm(const CoefficientSequence& coeffs, int k);

// First coefficients restricted to degree <= band. The decay envelope is
// dropped: the result is an exact trigonometric polynomial with no tail.
CoefficientSequence truncate_band(const CoefficientSequence& coeffs, int band);

}  // namespace memcap
