#include "memcap/verify.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "memcap/ergodic.hpp"
#include "memcap/quadrature.hpp"
#include "memcap/toeplitz.hpp"

namespace memcap::verify {

namespace {

constexpr double kPi = std::numbers::pi;

std::string case_label(const ChannelParams& params, const std::string& tail) {
    std::ostringstream out;
    out << "lambda=" << params.lambda << " mu=" << params.mu;
    if (!tail.empty()) out << " " << tail;
    return out.str();
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int matrix_rank(const Eigen::MatrixXd& m) {
    const SingularSpectrum s = singular_values(m);
    const double cutoff = kRankThreshold * s.largest();
    if (!(s.largest() > 0.0)) return 0;
    int rank = 0;
    for (double v : s.values) {
        if (v > cutoff) ++rank;
    }
    return rank;
}

}  // namespace

void CheckReport::add_case(CheckCase c) {
    if (cases_run == 0) {
        worst_margin = c.margin;
    } else {
        worst_margin = std::min(worst_margin, c.margin);
    }
    ++cases_run;
    if (c.margin < -kSlackTolerance) ++cases_failed;
    details.push_back(std::move(c));
}

void CheckReport::merge(const CheckReport& other) {
    if (other.cases_run == 0) return;
    if (cases_run == 0) {
        worst_margin = other.worst_margin;
    } else {
        worst_margin = std::min(worst_margin, other.worst_margin);
    }
    cases_run += other.cases_run;
    cases_failed += other.cases_failed;
    details.insert(details.end(), other.details.begin(), other.details.end());
}

CheckReport check_symbol_coefficients(const ChannelParams& params,
                                      int grid_size) {
    CheckReport report;
    report.check_name = "symbol_coefficients";
    const CoefficientSequence coeffs = channel_coefficients(params);
    const int trunc = coeffs.truncation_index();
    if (!is_power_of_two(grid_size) || grid_size <= 4 * trunc) {
        throw DomainError(
            "check_symbol_coefficients: grid_size must be a power of two "
            "above 4x the coefficient count");
    }

    fftw_complex* in = fftw_alloc_complex(static_cast<size_t>(grid_size));
    fftw_complex* out = fftw_alloc_complex(static_cast<size_t>(grid_size));
    fftw_plan plan =
        fftw_plan_dft_1d(grid_size, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    for (int m = 0; m < grid_size; ++m) {
        const std::complex<double> value =
            symbol_eval(params, 2.0 * kPi * m / grid_size);
        in[m][0] = value.real();
        in[m][1] = value.imag();
    }
    fftw_execute(plan);

    // Forward DFT of closed-form samples recovers a_j in bin j (scaled by the
    // grid size); every bin past the stored run, negative frequencies
    // included, must vanish.
    double max_dev = 0.0;
    for (int j = 0; j < grid_size; ++j) {
        const std::complex<double> recovered(out[j][0] / grid_size,
                                             out[j][1] / grid_size);
        const double expected =
            j <= trunc ? coeffs.values[static_cast<size_t>(j)] : 0.0;
        max_dev = std::max(max_dev, std::abs(recovered - expected));
    }
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);

    CheckCase c;
    c.label = case_label(params, "grid=" + std::to_string(grid_size));
    c.margin = 1e-8 - max_dev;
    c.values = {{"max_deviation", max_dev},
                {"grid_size", static_cast<double>(grid_size)},
                {"coefficient_count", static_cast<double>(trunc + 1)}};
    report.add_case(std::move(c));
    return report;
}

CheckReport check_norm_bound(const ChannelParams& params,
                             const std::vector<int>& n_list) {
    CheckReport report;
    report.check_name = "norm_bound";
    const CoefficientSequence coeffs = channel_coefficients(params);
    const double root_M = std::sqrt(max_transmissivity(params));
    const double norm_s = derivative_l2_norm(coeffs, 0);
    for (int n : n_list) {
        const ToeplitzCorner T = build_toeplitz(coeffs, n);
        const SingularSpectrum spectrum = singular_values(T);

        CheckCase cop;
        cop.label = case_label(params, "n=" + std::to_string(n) + " operator");
        cop.margin = root_M - spectrum.largest();
        cop.values = {{"s_max", spectrum.largest()}, {"sqrt_M", root_M}};
        report.add_case(std::move(cop));

        const double fro = T.entries.norm();
        const double fro_bound = std::sqrt(n / (2.0 * kPi)) * norm_s;
        CheckCase cfro;
        cfro.label =
            case_label(params, "n=" + std::to_string(n) + " frobenius");
        cfro.margin = fro_bound - fro;
        cfro.values = {{"frobenius", fro}, {"bound", fro_bound}};
        report.add_case(std::move(cfro));
    }
    return report;
}

CheckReport check_rank_perturbation(const ChannelParams& params, int n,
                                    int N) {
    CheckReport report;
    report.check_name = "rank_perturbation";
    const CoefficientSequence coeffs = channel_coefficients(params);
    const CoefficientSequence banded = truncate_band(coeffs, N);
    const ToeplitzCorner T = build_toeplitz(banded, n);
    const CirculantMatrix C = build_circulant(coeffs, N, n);
    const SingularSpectrum spec_T = singular_values(T);
    const SingularSpectrum spec_C = singular_values(C);

    const int rank = matrix_rank(T.entries - C.entries);
    CheckCase crank;
    crank.label = case_label(
        params, "n=" + std::to_string(n) + " N=" + std::to_string(N) +
                    " corner-rank");
    crank.margin = static_cast<double>(N - rank);
    crank.values = {{"rank", static_cast<double>(rank)},
                    {"band", static_cast<double>(N)}};
    report.add_case(std::move(crank));

    const bool qubit_ok = positive_q_region(params);
    for (CapacityKind kind : {CapacityKind::Qubit, CapacityKind::Ebit}) {
        if (kind == CapacityKind::Qubit && !qubit_ok) continue;
        const TestFunction F = capped_test_function(params, kind);
        const double gap =
            std::abs(ergodic_average(spec_T, F) - ergodic_average(spec_C, F));
        const double bound = F.derivative_l1 * 2.0 * N / n;
        CheckCase c;
        c.label = case_label(params, std::string(to_string(kind)) +
                                         " n=" + std::to_string(n) +
                                         " N=" + std::to_string(N));
        c.margin = bound - gap;
        c.values = {{"gap", gap}, {"bound", bound}};
        report.add_case(std::move(c));
    }
    return report;
}

CheckReport check_ap_bound(const ChannelParams& params, CapacityKind kind,
                           const std::vector<int>& n_list) {
    CheckReport report;
    report.check_name = "ap_bound";
    if (kind == CapacityKind::Qubit && !positive_q_region(params)) {
        CheckCase c;
        c.label = case_label(params, "qubit skipped: zero-capacity region");
        c.margin = 0.0;
        report.add_case(std::move(c));
        return report;
    }
    for (int n : n_list) {
        const ErgodicReport er = ergodic_report(params, kind, n);
        CheckCase c;
        c.label = case_label(params, std::string(to_string(kind)) +
                                         " n=" + std::to_string(n));
        c.margin = er.theoretical_bound - er.empirical_error;
        c.values = {{"empirical_error", er.empirical_error},
                    {"theoretical_bound", er.theoretical_bound},
                    {"sample_average", er.sample_average},
                    {"symbol_integral", er.symbol_integral}};
        report.add_case(std::move(c));
    }
    return report;
}

CheckReport check_sum_vs_asymptotic(const ChannelParams& params,
                                    CapacityKind kind, const ErrorBudget& eps,
                                    const std::vector<int>& n_list) {
    CheckReport report;
    report.check_name = "sum_vs_asymptotic";
    if (kind == CapacityKind::Qubit && !positive_q_region(params)) {
        CheckCase c;
        c.label = case_label(params, "qubit skipped: zero-capacity region");
        c.margin = 0.0;
        report.add_case(std::move(c));
        return report;
    }
    const double asym = asymptotic_capacity(params, kind);
    const double constant = finite_size_constant(params, kind);
    const double penalty = epsilon_penalty(eps, kind);
    for (int n : n_list) {
        const std::vector<double> etas = mode_transmissivities(params, n);
        double sum = 0.0;
        for (double eta : etas) sum += pure_loss_capacity(eta, kind);
        const double floor = n * asym - std::sqrt(double(n)) * constant;
        CheckCase c;
        c.label = case_label(params, std::string(to_string(kind)) +
                                         " n=" + std::to_string(n));
        c.margin = sum - floor;
        c.values = {{"spectrum_sum", sum},
                    {"linear_floor", floor},
                    {"shifted_sum", sum - penalty},
                    {"shifted_floor", floor - penalty}};
        report.add_case(std::move(c));
    }
    return report;
}

CheckReport check_fourier_truncation(const ChannelParams& params,
                                     const std::vector<int>& k_list,
                                     const std::vector<int>& N_list) {
    CheckReport report;
    report.check_name = "fourier_truncation";
    const CoefficientSequence coeffs = channel_coefficients(params);
    for (int k : k_list) {
        if (k < 1) {
            throw DomainError("check_fourier_truncation: requires k >= 1");
        }
        const double norm_sk = derivative_l2_norm(coeffs, k);
        for (int N : N_list) {
            if (N < 1) {
                throw DomainError(
                    "check_fourier_truncation: requires N >= 1");
            }
            const auto residual_sq = [&](double theta) {
                const std::complex<double> full = symbol_eval(params, theta);
                const std::complex<double> trunc =
                    truncated_symbol_eval(coeffs, N, theta);
                return std::norm(full - trunc);
            };
            // |f - f_N|^2 is even about 0, so twice the half-period integral.
            const double tail_sq =
                2.0 * integrate(residual_sq, 0.0, kPi, 1e-14);
            const double tail = std::sqrt(std::max(0.0, tail_sq));
            const double bound = norm_sk / std::pow(double(N), k);
            CheckCase c;
            c.label = case_label(params, "k=" + std::to_string(k) +
                                             " N=" + std::to_string(N));
            c.margin = bound - tail;
            c.values = {{"tail_norm", tail}, {"bound", bound}};
            report.add_case(std::move(c));
        }
    }
    return report;
}

VerifyConfig quick_grid() {
    VerifyConfig config;
    config.lambdas = {0.5, 0.9};
    config.mus = {0.0, 0.25};
    config.n_list = {4, 16, 64};
    config.band_list = {1, 4};
    config.k_list = {1, 2};
    config.trunc_list = {2, 8};
    config.epsilon = 0.1;
    return config;
}

VerifyConfig full_grid() {
    VerifyConfig config;
    config.lambdas = {0.3, 0.5, 0.7, 0.9};
    config.mus = {0.0, 0.1, 0.25, 0.5};
    config.n_list = {4, 16, 64, 256};
    config.band_list = {1, 4, 8};
    config.k_list = {1, 2, 3};
    config.trunc_list = {2, 4, 8, 16};
    config.epsilon = 0.1;
    return config;
}

std::vector<CheckReport> run_all(const VerifyConfig& config) {
    if (config.lambdas.empty() || config.mus.empty() ||
        config.n_list.empty()) {
        throw DomainError("run_all: grid must not be empty");
    }
    const ErrorBudget eps(config.epsilon);
    CheckReport symbol, norms, rank, ap, sums, fourier;
    for (double lambda : config.lambdas) {
        for (double mu : config.mus) {
            const ChannelParams params{lambda, mu};
            const CoefficientSequence coeffs = channel_coefficients(params);
            int grid = 64;
            while (grid <= 4 * coeffs.truncation_index()) grid *= 2;
            symbol.merge(check_symbol_coefficients(params, grid));
            norms.merge(check_norm_bound(params, config.n_list));
            for (int n : config.n_list) {
                for (int N : config.band_list) {
                    if (2 * N >= n) continue;
                    rank.merge(check_rank_perturbation(params, n, N));
                }
            }
            for (CapacityKind kind :
                 {CapacityKind::Qubit, CapacityKind::Ebit}) {
                ap.merge(check_ap_bound(params, kind, config.n_list));
                sums.merge(
                    check_sum_vs_asymptotic(params, kind, eps, config.n_list));
            }
            if (!config.k_list.empty() && !config.trunc_list.empty()) {
                fourier.merge(check_fourier_truncation(params, config.k_list,
                                                       config.trunc_list));
            }
        }
    }
    symbol.check_name = "symbol_coefficients";
    norms.check_name = "norm_bound";
    rank.check_name = "rank_perturbation";
    ap.check_name = "ap_bound";
    sums.check_name = "sum_vs_asymptotic";
    fourier.check_name = "fourier_truncation";
    return {symbol, norms, rank, ap, sums, fourier};
}

}  // namespace memcap::verify
