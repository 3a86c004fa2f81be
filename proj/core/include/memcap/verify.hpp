#pragma once

#include <string>
#include <utility>
#include <vector>

#include "memcap/capacities.hpp"
#include "memcap/channel.hpp"

namespace memcap::verify {

// Quantities checked as inequalities pass when slack (bound minus error) stays
// above -kSlackTolerance; SVD and quadrature each hold 1e-10 targets, leaving
// an order of margin.
inline constexpr double kSlackTolerance = 1e-9;

// Rank of a difference matrix: singular values above 1e-10 * s_max.
inline constexpr double kRankThreshold = 1e-10;

struct CheckCase {
    std::string label;
    double margin = 0.0;  // slack; negative beyond tolerance means failure
    std::vector<std::pair<std::string, double>> values;
};

struct CheckReport {
    std::string check_name;
    int cases_run = 0;
    int cases_failed = 0;
    double worst_margin = 0.0;  // most negative slack observed
    std::vector<CheckCase> details;

    void add_case(CheckCase c);
    void merge(const CheckReport& other);
    bool passed() const { return cases_failed == 0; }
};

// Closed-form symbol samples, inverse DFT, compared bin by bin against
// channel_coefficients (zero expected outside 0..J). grid_size must be a
// power of two exceeding 4 * truncation_index. Pass deviation: 1e-8.
CheckReport check_symbol_coefficients(const ChannelParams& params,
                                      int grid_size);

// s_max(T_n) <= sqrt(M) and ||T_n||_F <= sqrt(n/2pi) ||f||_2 for each n.
CheckReport check_norm_bound(const ChannelParams& params,
                             const std::vector<int>& n_list);

// |avg F(sigma(T_n(f_N))) - avg F(sigma(C_n(f_N)))| <= 2N ||F'||_1 / n for
// both capped test functions (qubit skipped in its zero-capacity region).
CheckReport check_rank_perturbation(const ChannelParams& params, int n, int N);

// ergodic_report per n; asserts bound_respected.
CheckReport check_ap_bound(const ChannelParams& params, CapacityKind kind,
                           const std::vector<int>& n_list);

// sum_i g(eta_i) >= n * asymptotic - sqrt(n) * finite_size_constant, the
// spectrum-sum floor behind the n-shot bounds; also records the chained
// penalty-shifted values for the given eps.
CheckReport check_sum_vs_asymptotic(const ChannelParams& params,
                                    CapacityKind kind, const ErrorBudget& eps,
                                    const std::vector<int>& n_list);

// ||f - f_N||_2 <= ||f^{(k)}||_2 / N^k by quadrature, all (k, N) pairs.
CheckReport check_fourier_truncation(const ChannelParams& params,
                                     const std::vector<int>& k_list,
                                     const std::vector<int>& N_list);

struct VerifyConfig {
    std::vector<double> lambdas;
    std::vector<int> n_list;
    std::vector<double> mus;
    std::vector<int> band_list;  // N for the rank-perturbation check
    std::vector<int> k_list;     // derivative orders for Fourier truncation
    std::vector<int> trunc_list; // N for Fourier truncation
    double epsilon = 0.1;
};

VerifyConfig quick_grid();
VerifyConfig full_grid();

// One merged report per check family, over the configured grid.
std::vector<CheckReport> run_all(const VerifyConfig& config);

}  // namespace memcap::verify
