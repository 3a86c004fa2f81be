#include "memcap/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "memcap/quadrature.hpp"

namespace memcap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLog2E = std::numbers::log2e;

}  // namespace

double ergodic_average(const SingularSpectrum& spectrum,
                       const TestFunction& F) {
    if (spectrum.values.empty()) {
        throw DomainError("ergodic_average: empty spectrum");
    }
    double sum = 0.0;
    for (double s : spectrum.values) sum += F.eval(s);
    return sum / static_cast<double>(spectrum.values.size());
}

double symbol_integral(const ChannelParams& params, const TestFunction& F,
                       double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("symbol_integral: tol must be positive");
    }
    // |f| is even about theta = pi, so one half-period suffices. Kinks of F in
    // |f|-space land at eta = x^2 level sets, single-rooted on [0, pi].
    const double eta0 = effective_transmissivity(params, 0.0);
    const double M = max_transmissivity(params);
    std::vector<double> splits;
    for (double x : F.kink_abscissae) {
        const double level = x * x;
        if (level > eta0 && level < M) {
            splits.push_back(theta_for_transmissivity(params, level));
        }
    }
    const auto integrand = [&](double theta) {
        return F.eval(std::abs(symbol_eval(params, theta)));
    };
    return integrate(integrand, 0.0, kPi, splits, tol * kPi) / kPi;
}

double ap_error_bound(int n, int k, double L, double norm_sk, double norm_s,
                      double norm_Fp1, double norm_Finf) {
    if (n < 4) {
        throw DomainError("ap_error_bound: requires n >= 4");
    }
    if (k < 1) {
        throw DomainError("ap_error_bound: requires k >= 1");
    }
    const double alpha = k + 1.5;
    const double lead = std::ldexp(1.0, k + 1) * norm_sk * L /
                            std::sqrt(2.0 * kPi) +
                        4.0 * kPi * L * norm_s;
    const double trail = 2.0 * norm_Fp1 + 4.0 * norm_Finf;
    return lead * std::pow(double(n), -k / alpha) +
           trail * std::pow(double(n), -(k + 0.5) / alpha);
}

int optimal_band(int n, int k) {
    if (n < 4) {
        throw DomainError("optimal_band: requires n >= 4");
    }
    if (k < 1) {
        throw DomainError("optimal_band: requires k >= 1");
    }
    // Guard the floor against pow landing a hair under an exact integer.
    const int N = static_cast<int>(
        std::floor(std::pow(double(n), 1.0 / (k + 1.5)) + 1e-9));
    // n^{1/(k+3/2)} <= n^{2/5} < n/2 once n > 2^{5/3}, so any n >= 4 fits.
    if (2 * N >= n) {
        throw ConvergenceFailure("optimal_band: band does not fit order");
    }
    return std::max(N, 1);
}

StepBounds step_bounds(int n, int N, int k, double L, double norm_sk,
                       double norm_s, double norm_Fp1, double norm_Finf) {
    if (N < 1) {
        throw DomainError("step_bounds: requires N >= 1");
    }
    if (2 * N >= n) {
        throw BandTooWide("step_bounds: 2N must stay below n");
    }
    if (k < 1) {
        throw DomainError("step_bounds: requires k >= 1");
    }
    StepBounds out;
    out.c1 = L * norm_sk / (std::sqrt(2.0 * kPi) * std::pow(double(N), k));
    out.c2 = 2.0 * N * norm_Fp1 / n;
    out.c3 = 4.0 * std::pow(double(N), 1.5) * kPi * L * norm_s / n +
             4.0 * N * norm_Finf / n;
    out.c4 = out.c1;
    out.total = out.c1 + out.c2 + out.c3 + out.c4;
    return out;
}

TestFunction capped_test_function(const ChannelParams& params,
                                  CapacityKind kind) {
    const double M = max_transmissivity(params);
    const double root_M = std::sqrt(M);
    TestFunction F;
    if (kind == CapacityKind::Qubit) {
        if (!(M > 0.5)) {
            throw ZeroCapacityRegion(
                "capped_test_function: qubit test function undefined for "
                "M <= 1/2");
        }
        const double cap = std::log2(M / (1.0 - M));
        const double L = 2.0 * kLog2E / (root_M * (1.0 - M));
        const double upper = root_M + cap / L;
        F.eval = [root_M, cap, L, upper](double x) {
            if (x < 0.0 || x >= upper) return 0.0;
            if (x <= root_M) {
                const double eta = x * x;
                return eta > 0.5 ? std::log2(eta / (1.0 - eta)) : 0.0;
            }
            return std::max(0.0, cap - L * (x - root_M));
        };
        F.lipschitz_L = L;
        F.sup_norm = cap;
        F.derivative_l1 = 2.0 * cap;
        F.support_upper = upper;
        F.kink_abscissae = {std::sqrt(0.5), root_M, upper};
    } else {
        const double cap = std::log2(1.0 / (1.0 - M));
        const double L = 2.0 * kLog2E * root_M / (1.0 - M);
        const double upper = root_M + cap / L;
        F.eval = [root_M, cap, L, upper](double x) {
            if (x < 0.0 || x >= upper) return 0.0;
            if (x <= root_M) return -std::log2(1.0 - x * x);
            return std::max(0.0, cap - L * (x - root_M));
        };
        F.lipschitz_L = L;
        F.sup_norm = cap;
        F.derivative_l1 = 2.0 * cap;
        F.support_upper = upper;
        F.kink_abscissae = {root_M, upper};
    }
    return F;
}

ErgodicReport ergodic_report(const ChannelParams& params, CapacityKind kind,
                             int n, double tol) {
    if (n < 4) {
        throw DomainError("ergodic_report: requires n >= 4");
    }
    const TestFunction F = capped_test_function(params, kind);
    const CoefficientSequence coeffs = channel_coefficients(params);
    const SingularSpectrum spectrum =
        singular_values(build_toeplitz(coeffs, n));

    ErgodicReport report;
    report.n = n;
    report.sample_average = ergodic_average(spectrum, F);
    report.symbol_integral = symbol_integral(params, F, tol);
    report.empirical_error =
        std::abs(report.sample_average - report.symbol_integral);
    const double norm_s = derivative_l2_norm(coeffs, 0);
    const double norm_s2 = derivative_l2_norm(coeffs, 2);
    report.theoretical_bound = ap_error_bound(
        n, 2, F.lipschitz_L, norm_s2, norm_s, F.derivative_l1, F.sup_norm);
    report.bound_respected =
        report.empirical_error <= report.theoretical_bound;
    return report;
}

double band_derivative_sup(const CoefficientSequence& coeffs, int band) {
    const int top = std::min(band, coeffs.truncation_index());
    double sum = 0.0;
    for (int j = 1; j <= top; ++j) {
        sum += j * std::abs(coeffs.values[static_cast<size_t>(j)]);
    }
    return sum;
}

double band_derivative_sup_bound(double norm_s, int band) {
    return std::sqrt(4.0 * kPi) * std::pow(double(band), 1.5) * norm_s;
}

}  // namespace memcap
