#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "memcap/errors.hpp"
#include "memcap/verify.hpp"

using namespace memcap;
using namespace memcap::verify;

TEST_CASE("CheckReport bookkeeping") {
    CheckReport report;
    report.check_name = "demo";
    CHECK(report.passed());

    report.add_case({"ok", 0.5, {}});
    CHECK(report.cases_run == 1);
    CHECK(report.cases_failed == 0);
    CHECK(report.worst_margin == 0.5);

    // Exactly at the tolerance is still a pass; just beyond it is not.
    report.add_case({"edge", -1e-9, {}});
    CHECK(report.cases_failed == 0);
    CHECK(report.worst_margin == -1e-9);
    report.add_case({"bad", -1.1e-9, {}});
    CHECK(report.cases_failed == 1);
    CHECK_FALSE(report.passed());
    CHECK(report.worst_margin == -1.1e-9);

    CheckReport other;
    other.check_name = "demo";
    other.add_case({"worse", -0.25, {}});
    report.merge(other);
    CHECK(report.cases_run == 4);
    CHECK(report.cases_failed == 2);
    CHECK(report.worst_margin == -0.25);

    // Merging an empty report leaves the aggregate untouched.
    report.merge(CheckReport{});
    CHECK(report.cases_run == 4);
    CHECK(report.worst_margin == -0.25);
}

TEST_CASE("symbol coefficient check") {
    const ChannelParams params{0.7, 0.3};
    const CheckReport report = check_symbol_coefficients(params, 4096);
    CHECK(report.passed());
    CHECK(report.cases_run >= 1);
    CHECK(report.worst_margin > 0.0);

    CHECK_THROWS_AS(check_symbol_coefficients(params, 4095), DomainError);
    CHECK_THROWS_AS(check_symbol_coefficients(params, 8), DomainError);

    // Slow decay stresses the truncation: still reproduced to 1e-8 on a
    // 2^16 grid.
    CHECK(check_symbol_coefficients(ChannelParams{0.9, 0.8}, 1 << 16).passed());
}

TEST_CASE("norm bound check") {
    const CheckReport report =
        check_norm_bound(ChannelParams{0.5, 0.25}, {4, 16, 64});
    CHECK(report.passed());
    // Two inequalities per n.
    CHECK(report.cases_run == 6);
    for (const CheckCase& c : report.details) {
        CHECK(c.margin >= -kSlackTolerance);
    }
}

TEST_CASE("rank perturbation check") {
    for (int band : {1, 4}) {
        const CheckReport report =
            check_rank_perturbation(ChannelParams{0.5, 0.25}, 32, band);
        CHECK(report.passed());
        bool saw_rank_case = false;
        for (const CheckCase& c : report.details) {
            CHECK(c.margin >= -kSlackTolerance);
            if (c.label.find("rank") != std::string::npos) {
                saw_rank_case = true;
                // rank(T - C) <= band, slack in whole ranks.
                CHECK(c.margin >= 0.0);
            }
        }
        CHECK(saw_rank_case);
    }
    CHECK_THROWS_AS(check_rank_perturbation(ChannelParams{0.5, 0.25}, 8, 4),
                    BandTooWide);
}

TEST_CASE("ap bound check skips the trivial qubit region") {
    const CheckReport report =
        check_ap_bound(ChannelParams{0.3, 0.0}, CapacityKind::Qubit, {16, 64});
    CHECK(report.passed());
    CHECK(report.cases_run == 1);
    REQUIRE(report.details.size() == 1);
    CHECK(report.details[0].label.find("skip") != std::string::npos);
    CHECK(report.details[0].margin == 0.0);

    const CheckReport real =
        check_ap_bound(ChannelParams{0.7, 0.3}, CapacityKind::Ebit, {16, 64});
    CHECK(real.passed());
    CHECK(real.cases_run == 2);
}

TEST_CASE("sum vs asymptotic check") {
    const CheckReport report = check_sum_vs_asymptotic(
        ChannelParams{0.7, 0.3}, CapacityKind::Ebit, ErrorBudget(0.1),
        {4, 16, 64});
    CHECK(report.passed());
    CHECK(report.cases_run == 3);
    for (const CheckCase& c : report.details) {
        bool saw_shifted = false;
        for (const auto& [name, value] : c.values) {
            if (name.find("shifted") != std::string::npos) saw_shifted = true;
        }
        CHECK(saw_shifted);
    }

    const CheckReport skip = check_sum_vs_asymptotic(
        ChannelParams{0.3, 0.0}, CapacityKind::Qubit, ErrorBudget(0.1), {16});
    CHECK(skip.passed());
    CHECK(skip.cases_run == 1);
    CHECK(skip.details[0].label.find("skip") != std::string::npos);
}

TEST_CASE("fourier truncation check") {
    const CheckReport report =
        check_fourier_truncation(ChannelParams{0.5, 0.25}, {1, 2}, {2, 8});
    CHECK(report.passed());
    CHECK(report.cases_run == 4);
    CHECK_THROWS_AS(
        check_fourier_truncation(ChannelParams{0.5, 0.25}, {0}, {2}),
        DomainError);
    CHECK_THROWS_AS(
        check_fourier_truncation(ChannelParams{0.5, 0.25}, {1}, {0}),
        DomainError);
}

TEST_CASE("run_all over the quick grid") {
    const std::vector<CheckReport> reports = run_all(quick_grid());
    REQUIRE(reports.size() == 6);
    for (const CheckReport& report : reports) {
        INFO(report.check_name);
        CHECK(report.cases_run >= 1);
        CHECK(report.passed());
    }
}

TEST_CASE("run_all rejects an empty grid") {
    VerifyConfig config = quick_grid();
    config.lambdas.clear();
    CHECK_THROWS_AS(run_all(config), DomainError);

    config = quick_grid();
    config.n_list.clear();
    CHECK_THROWS_AS(run_all(config), DomainError);

    config = quick_grid();
    config.mus.clear();
    CHECK_THROWS_AS(run_all(config), DomainError);
}

TEST_CASE("adversarial slow-mixing corner") {
    // Near-unit memory at small n: either every check still passes or the
    // coefficient expansion refuses the budget, and nothing else.
    VerifyConfig config;
    config.lambdas = {0.99};
    config.mus = {0.9};
    config.n_list = {4};
    config.band_list = {1};
    config.k_list = {1, 2};
    config.trunc_list = {2, 8};
    try {
        for (const CheckReport& report : run_all(config)) {
            INFO(report.check_name);
            CHECK(report.passed());
        }
    } catch (const TruncationBudgetExceeded&) {
        MESSAGE("coefficient budget exhausted, accepted for this corner");
    }
}
