#pragma once

#include "memcap/channel.hpp"

namespace memcap {

// Communication task. Ebit (two-way assisted quantum capacity) and Key
// (secret-key capacity) share every implemented formula; Key delegates to the
// Ebit path throughout.
enum class CapacityKind { Qubit, Ebit, Key };

const char* to_string(CapacityKind kind);

// Tolerated error eps of the n-shot protocol, strictly inside (0,1).
struct ErrorBudget {
    double epsilon;

    explicit ErrorBudget(double eps);
};

struct BoundComponents {
    double asymptotic_term = 0.0;  // n * asymptotic capacity
    double sqrt_term = 0.0;        // sqrt(n) * finite_size_constant
    double penalty = 0.0;          // epsilon penalty
};

// Lower bound on an n-shot capacity with its additive pieces itemized.
// lower = max(0, asymptotic_term - sqrt_term - penalty); clamped records
// whether the raw value was negative. raw() recovers the unclamped bound.
struct NShotBound {
    CapacityKind kind = CapacityKind::Ebit;
    int n = 0;
    double lower = 0.0;
    BoundComponents components;
    bool clamped = false;

    double raw() const {
        return components.asymptotic_term - components.sqrt_term -
               components.penalty;
    }
};

struct MemorylessBounds {
    double lower = 0.0;  // raw, may be negative; clamping is the caller's choice
    double upper = 0.0;
};

// Memoryless pure-loss capacities. Qubit: log2(lambda/(1-lambda)) above
// lambda = 1/2, else 0. Ebit/Key: log2(1/(1-lambda)). Throws
// DivergentCapacity at lambda = 1, DomainError outside [0,1].
double pure_loss_capacity(double lambda, CapacityKind kind);

// (1/2pi) Integral of pure_loss_capacity(eta(theta), kind) over a period, by
// kink-aware adaptive quadrature; absolute error <= tol. Returns exactly 0 for
// Qubit when M <= 1/2 (the integrand vanishes identically).
double asymptotic_capacity(const ChannelParams& params, CapacityKind kind,
                           double tol = 1e-10);

// True iff M_{lambda,mu} > 1/2, the region where the qubit capacity is positive.
bool positive_q_region(const ChannelParams& params);

// Coefficient of sqrt(n) in the finite-size lower bound, closed form
// (C for Qubit, C2 for Ebit/Key). Throws ZeroCapacityRegion for Qubit with
// M <= 1/2, where the bound is trivial.
double finite_size_constant(const ChannelParams& params, CapacityKind kind);

// Additive constant the error budget costs an n-shot bound.
// Qubit: log2(2^23 (32-eps)^2 / ((16-eps) eps^6));
// Ebit/Key: log2(2^6 * 3 * (4-sqrt(eps))^2 / ((2-sqrt(eps)) eps^3)).
double epsilon_penalty(const ErrorBudget& eps, CapacityKind kind);

// n-shot lower bound n*Q - sqrt(n)*C - penalty, clamped at zero and itemized.
// Requires n >= 4. In the qubit zero-capacity region returns lower = 0,
// clamped = true, components {0, 0, penalty}.
NShotBound nshot_lower_bound(const ChannelParams& params, int n,
                             const ErrorBudget& eps, CapacityKind kind);

// Sharper SVD-based bound sum_i pure_loss_capacity(eta_i, kind) - penalty,
// valid for every n >= 1. Raw value, not clamped.
double exact_sum_lower_bound(const ChannelParams& params, int n,
                             const ErrorBudget& eps, CapacityKind kind);

// Bracket for the memoryless channel's n-shot capacity. Lower is the raw
// penalty-shifted linear bound; upper is log2(6) + 2 log2((1+eps)/(1-eps))
// above n*Q2 for Ebit/Key, and n*Q/(1-2eps) plus the binary entropy of eps for
// Qubit (requires eps < 1/2; DomainError otherwise).
MemorylessBounds memoryless_nshot_bounds(double lambda, int n,
                                         const ErrorBudget& eps,
                                         CapacityKind kind);

// Minimal n >= 4 with nshot_lower_bound(...).lower >= target_k, via the closed
// form sqrt(n) >= (C + sqrt(C^2 + 4Q(penalty + target)))/(2Q) plus a one-step
// adjustment that guarantees exact minimality. Throws UnreachableTarget when
// the asymptotic capacity is not strictly positive.
long long uses_needed(const ChannelParams& params, const ErrorBudget& eps,
                      CapacityKind kind, double target_k);

// Same solver on explicitly given constants; the CLI's debug hook and the
// property tests use this directly.
long long uses_needed_from_constants(double asymptotic, double finite_size,
                                     double penalty, double target_k);

}  // namespace memcap
