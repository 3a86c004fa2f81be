#include "memcap/capacities.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "memcap/quadrature.hpp"
#include "memcap/toeplitz.hpp"

namespace memcap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLog2E = std::numbers::log2e;

bool ebit_like(CapacityKind kind) {
    return kind == CapacityKind::Ebit || kind == CapacityKind::Key;
}

// Shared by the solver and the per-n bound so both produce bit-identical
// doubles for the same (n, Q, C, penalty).
double raw_linear_bound(long long n, double asymptotic, double finite_size,
                        double penalty) {
    const double asym = static_cast<double>(n) * asymptotic;
    const double sqrt_term = std::sqrt(static_cast<double>(n)) * finite_size;
    return asym - sqrt_term - penalty;
}

}  // namespace

const char* to_string(CapacityKind kind) {
    switch (kind) {
        case CapacityKind::Qubit: return "qubit";
        case CapacityKind::Ebit: return "ebit";
        case CapacityKind::Key: return "key";
    }
    return "unknown";
}

ErrorBudget::ErrorBudget(double eps) : epsilon(eps) {
    if (!(eps > 0.0 && eps < 1.0)) {
        throw DomainError("ErrorBudget: epsilon must lie strictly in (0,1)");
    }
}

double pure_loss_capacity(double lambda, CapacityKind kind) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw DomainError("pure_loss_capacity: lambda must lie in [0,1]");
    }
    if (lambda == 1.0) {
        throw DivergentCapacity(
            "pure_loss_capacity: capacity diverges at lambda = 1");
    }
    if (kind == CapacityKind::Qubit) {
        return lambda > 0.5 ? std::log2(lambda / (1.0 - lambda)) : 0.0;
    }
    return -std::log2(1.0 - lambda);
}

double asymptotic_capacity(const ChannelParams& params, CapacityKind kind,
                           double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("asymptotic_capacity: tol must be positive");
    }
    if (params.mu == 0.0) {
        return pure_loss_capacity(params.lambda, kind);
    }
    const double M = max_transmissivity(params);
    if (kind == CapacityKind::Qubit && M <= 0.5) {
        return 0.0;
    }
    std::vector<double> splits;
    if (kind == CapacityKind::Qubit &&
        effective_transmissivity(params, 0.0) < 0.5) {
        // q(eta(theta)) is flat zero until eta crosses 1/2; isolate the kink.
        splits.push_back(theta_for_transmissivity(params, 0.5));
    }
    const auto integrand = [&](double theta) {
        return pure_loss_capacity(effective_transmissivity(params, theta),
                                  kind);
    };
    // eta is even about 0 and pi, so one half-period carries the integral.
    return integrate(integrand, 0.0, kPi, splits, tol * kPi) / kPi;
}

bool positive_q_region(const ChannelParams& params) {
    return max_transmissivity(params) > 0.5;
}

double finite_size_constant(const ChannelParams& params, CapacityKind kind) {
    const double M = max_transmissivity(params);
    if (kind == CapacityKind::Qubit && M <= 0.5) {
        throw ZeroCapacityRegion(
            "finite_size_constant: qubit bound is trivial for M <= 1/2");
    }
    const double root_mu = std::sqrt(params.mu);
    const double log_inv = -std::log(params.lambda);
    const double shared = std::sqrt(8.0) * M * root_mu * log_inv *
                          (1.0 + root_mu * log_inv + params.mu) /
                          std::pow(1.0 - root_mu, 4);
    const double tau = 4.0 * std::pow(2.0 * kPi, 1.5) * kLog2E;
    if (kind == CapacityKind::Qubit) {
        return shared + tau / (1.0 - M) + 8.0 * std::log2(M / (1.0 - M));
    }
    return shared + tau * M / (1.0 - M) + 8.0 * std::log2(1.0 / (1.0 - M));
}

double epsilon_penalty(const ErrorBudget& eps, CapacityKind kind) {
    const double e = eps.epsilon;
    if (kind == CapacityKind::Qubit) {
        return 23.0 + 2.0 * std::log2(32.0 - e) - std::log2(16.0 - e) -
               6.0 * std::log2(e);
    }
    return 6.0 + std::log2(3.0) + 2.0 * std::log2(4.0 - std::sqrt(e)) -
           std::log2(2.0 - std::sqrt(e)) - 3.0 * std::log2(e);
}

NShotBound nshot_lower_bound(const ChannelParams& params, int n,
                             const ErrorBudget& eps, CapacityKind kind) {
    if (n < 4) {
        throw DomainError("nshot_lower_bound: requires n >= 4");
    }
    NShotBound bound;
    bound.kind = kind;
    bound.n = n;
    bound.components.penalty = epsilon_penalty(eps, kind);
    if (kind == CapacityKind::Qubit && !positive_q_region(params)) {
        bound.lower = 0.0;
        bound.clamped = true;
        return bound;
    }
    bound.components.asymptotic_term =
        static_cast<double>(n) * asymptotic_capacity(params, kind);
    bound.components.sqrt_term = std::sqrt(static_cast<double>(n)) *
                                 finite_size_constant(params, kind);
    const double raw = bound.raw();
    bound.clamped = raw < 0.0;
    bound.lower = bound.clamped ? 0.0 : raw;
    return bound;
}

double exact_sum_lower_bound(const ChannelParams& params, int n,
                             const ErrorBudget& eps, CapacityKind kind) {
    if (n < 1) {
        throw DomainError("exact_sum_lower_bound: requires n >= 1");
    }
    const std::vector<double> etas = mode_transmissivities(params, n);
    double sum = 0.0;
    for (double eta : etas) sum += pure_loss_capacity(eta, kind);
    return sum - epsilon_penalty(eps, kind);
}

MemorylessBounds memoryless_nshot_bounds(double lambda, int n,
                                         const ErrorBudget& eps,
                                         CapacityKind kind) {
    if (n < 1) {
        throw DomainError("memoryless_nshot_bounds: requires n >= 1");
    }
    const double q = pure_loss_capacity(lambda, kind);
    const double e = eps.epsilon;
    MemorylessBounds out;
    out.lower = static_cast<double>(n) * q - epsilon_penalty(eps, kind);
    if (ebit_like(kind)) {
        out.upper = static_cast<double>(n) * q + std::log2(6.0) +
                    2.0 * std::log2((1.0 + e) / (1.0 - e));
    } else {
        if (e >= 0.5) {
            throw DomainError(
                "memoryless_nshot_bounds: qubit upper bound needs epsilon < "
                "1/2");
        }
        const double entropy =
            -e * std::log2(e) - (1.0 - e) * std::log2(1.0 - e);
        out.upper = static_cast<double>(n) * q / (1.0 - 2.0 * e) + entropy;
    }
    if (out.lower > out.upper) {
        throw NumericError("memoryless_nshot_bounds: bracket inverted");
    }
    return out;
}

long long uses_needed(const ChannelParams& params, const ErrorBudget& eps,
                      CapacityKind kind, double target_k) {
    if (!(target_k > 0.0)) {
        throw DomainError("uses_needed: target_k must be positive");
    }
    if (kind == CapacityKind::Qubit && !positive_q_region(params)) {
        throw UnreachableTarget(
            "uses_needed: qubit capacity vanishes for these parameters");
    }
    const double asym = asymptotic_capacity(params, kind);
    if (!(asym > 0.0)) {
        throw UnreachableTarget(
            "uses_needed: asymptotic capacity is not positive");
    }
    return uses_needed_from_constants(asym, finite_size_constant(params, kind),
                                      epsilon_penalty(eps, kind), target_k);
}

long long uses_needed_from_constants(double asymptotic, double finite_size,
                                     double penalty, double target_k) {
    if (!(asymptotic > 0.0)) {
        throw UnreachableTarget(
            "uses_needed_from_constants: asymptotic rate must be positive");
    }
    if (!(target_k > 0.0)) {
        throw DomainError(
            "uses_needed_from_constants: target_k must be positive");
    }
    // In x = sqrt(n) the condition n*Q - sqrt(n)*C - pen >= k reads
    // Q x^2 - C x - (pen + k) >= 0, true exactly for x at or past the
    // positive root.
    const double x =
        (finite_size +
         std::sqrt(finite_size * finite_size +
                   4.0 * asymptotic * (penalty + target_k))) /
        (2.0 * asymptotic);
    const double n_real = x * x;
    if (!(n_real < 9.0e18)) {
        throw DomainError(
            "uses_needed_from_constants: required n exceeds integer range");
    }
    long long n = std::max(4LL, static_cast<long long>(std::ceil(n_real)));
    // One-ulp slack in x*x can land the ceil one step off; walk to the exact
    // integer threshold of the double-precision bound.
    int steps = 0;
    while (n > 4 &&
           raw_linear_bound(n - 1, asymptotic, finite_size, penalty) >=
               target_k) {
        --n;
        if (++steps > 8) {
            throw ConvergenceFailure(
                "uses_needed_from_constants: threshold walk diverged");
        }
    }
    steps = 0;
    while (raw_linear_bound(n, asymptotic, finite_size, penalty) < target_k) {
        ++n;
        if (++steps > 8) {
            throw ConvergenceFailure(
                "uses_needed_from_constants: threshold walk diverged");
        }
    }
    return n;
}

}  // namespace memcap
