#pragma once

#include <functional>
#include <vector>

#include "memcap/capacities.hpp"
#include "memcap/channel.hpp"
#include "memcap/toeplitz.hpp"

namespace memcap {

// Compactly supported Lipschitz test function with the constants the error
// bound consumes. kink_abscissae lists the points where eval' jumps; the
// quadrature pre-splits there.
struct TestFunction {
    std::function<double(double)> eval;
    double lipschitz_L = 0.0;
    double sup_norm = 0.0;       // ||F||_inf
    double derivative_l1 = 0.0;  // ||F'||_1
    double support_upper = 0.0;  // support contained in [0, support_upper]
    std::vector<double> kink_abscissae;
};

// Convergence-rate audit of one spectrum-vs-symbol comparison.
struct ErgodicReport {
    int n = 0;
    double sample_average = 0.0;
    double symbol_integral = 0.0;
    double empirical_error = 0.0;  // |sample_average - symbol_integral|
    double theoretical_bound = 0.0;
    bool bound_respected = false;
};

struct StepBounds {
    double c1 = 0.0;  // full Toeplitz vs banded Toeplitz
    double c2 = 0.0;  // banded Toeplitz vs circulant (interlacing)
    double c3 = 0.0;  // circulant average vs truncated-symbol integral
    double c4 = 0.0;  // truncated vs full symbol integral
    double total = 0.0;
};

// (1/n) sum_j F(s_j).
double ergodic_average(const SingularSpectrum& spectrum, const TestFunction& F);

// (1/2pi) Integral of F(|f(theta)|) over a period, adaptive quadrature with
// absolute error <= tol; F's kinks are mapped to theta and pre-split.
double symbol_integral(const ChannelParams& params, const TestFunction& F,
                       double tol);

// Explicit convergence-rate bound for n >= 4, k >= 1:
//   (2^{k+1} ||f^{(k)}||_2 L / sqrt(2pi) + 4 pi L ||f||_2) n^{-k/(k+3/2)}
// + (2 ||F'||_1 + 4 ||F||_inf) n^{-(k+1/2)/(k+3/2)}.
double ap_error_bound(int n, int k, double L, double norm_sk, double norm_s,
                      double norm_Fp1, double norm_Finf);

// Band choice floor(n^{1/(k+3/2)}) minimizing the four-step total; always
// satisfies 2N < n for n >= 4, k >= 1.
int optimal_band(int n, int k);

// The four-step decomposition at an arbitrary band 1 <= N < n/2:
// c1 = c4 = L ||f^{(k)}||_2 / (sqrt(2pi) N^k), c2 = 2N ||F'||_1 / n,
// c3 = 4 N^{3/2} pi L ||f||_2 / n + 4 N ||F||_inf / n.
StepBounds step_bounds(int n, int N, int k, double L, double norm_sk,
                       double norm_s, double norm_Fp1, double norm_Finf);

// Capacity integrand capped to a compactly supported Lipschitz function:
// F(x) = g(x^2) up to sqrt(M), then a linear descent with slope -L to zero.
// g = q for Qubit (requires M > 1/2, else ZeroCapacityRegion), g = k for
// Ebit/Key. The attached constants are the closed forms the bound uses.
TestFunction capped_test_function(const ChannelParams& params,
                                  CapacityKind kind);

// Full pipeline at fixed n >= 4: SVD spectrum average vs symbol integral vs
// the k=2 bound with this channel's computed norms.
ErgodicReport ergodic_report(const ChannelParams& params, CapacityKind kind,
                             int n, double tol = 1e-10);

// sup |f_N'| as the exact coefficient sum sum_{|j|<=N} |j a_j|.
double band_derivative_sup(const CoefficientSequence& coeffs, int band);

// The coarser closed-form bound sqrt(4 pi) N^{3/2} ||f||_2 on the same
// quantity, exposed so tests can confirm it majorizes the exact sum.
double band_derivative_sup_bound(double norm_s, int band);

}  // namespace memcap
