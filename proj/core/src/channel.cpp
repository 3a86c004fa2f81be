#include "memcap/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace memcap {

ChannelParams::ChannelParams(double lambda_, double mu_)
    : lambda(lambda_), mu(mu_) {
    if (!(lambda > 0.0) || !(lambda < 1.0)) {
        throw DomainError("lambda must lie strictly inside (0,1), got " +
                          std::to_string(lambda_));
    }
    if (!(mu >= 0.0) || !(mu < 1.0)) {
        throw DomainError("mu must lie in [0,1), got " + std::to_string(mu_));
    }
}

double laguerre_minus_one(int m, double x) {
    if (m < 0) {
        throw DomainError("laguerre_minus_one: m must be >= 0");
    }
    if (m == 0) return 1.0;
    if (m == 1) return -x;
    // L_j = ((2j - 2 - x) L_{j-1} - (j - 2) L_{j-2}) / j, seeds L_0 = 1, L_1 = -x
    double prev2 = 1.0;
    double prev1 = -x;
    for (int j = 2; j <= m; ++j) {
        const double next =
            ((2.0 * j - 2.0 - x) * prev1 - (j - 2.0) * prev2) / j;
        prev2 = prev1;
        prev1 = next;
    }
    return prev1;
}

CoefficientSequence channel_coefficients(const ChannelParams& params,
                                         double relative_tolerance,
                                         int max_index) {
    if (!(relative_tolerance > 0.0) || !(relative_tolerance < 1.0)) {
        throw DomainError("relative_tolerance must lie in (0,1)");
    }
    if (max_index < 8) {
        throw DomainError("max_index must be at least 8");
    }

    const double a0 = std::sqrt(params.lambda);
    CoefficientSequence seq;
    seq.relative_tolerance = relative_tolerance;

    if (params.mu == 0.0) {
        // mu^{j/2} kills every j >= 1 exactly.
        seq.values = {a0};
        return seq;
    }

    const double x = -std::log(params.lambda);
    const double root_mu = std::sqrt(params.mu);
    // |L_j^{(-1)}(x)| <= x e^{x/2} for x >= 0, so |a_j| <= ln(1/lambda) mu^{j/2}.
    seq.decay_scale = x;
    seq.decay_ratio = root_mu;
    const double cutoff = relative_tolerance * a0;

    seq.values.push_back(a0);
    // Laguerre recurrence state for L_j and L_{j+1}; mu_pow tracks mu^{j/2}.
    double lag_prev = 1.0;   // L_{j-1}
    double lag_cur = -x;     // L_j at j = 1
    double mu_pow = root_mu;
    for (int j = 1;; ++j) {
        seq.values.push_back(a0 * mu_pow * lag_cur);
        const double lag_next =
            ((2.0 * (j + 1) - 2.0 - x) * lag_cur - (j - 1.0) * lag_prev) /
            (j + 1);
        lag_prev = lag_cur;
        lag_cur = lag_next;
        mu_pow *= root_mu;
        // Double test: Laguerre sign oscillation can put one coefficient at a
        // zero crossing; demand two consecutive small entries before stopping.
        if (j >= 8 && std::abs(seq.values[static_cast<size_t>(j)]) < cutoff &&
            std::abs(a0 * mu_pow * lag_cur) < cutoff) {
            break;
        }
        if (j >= max_index) {
            throw TruncationBudgetExceeded(
                "coefficient tail still above tolerance at index " +
                std::to_string(max_index) + " (mu = " +
                std::to_string(params.mu) + ")");
        }
    }
    return seq;
}

std::complex<double> symbol_eval(const ChannelParams& params, double theta) {
    const std::complex<double> phase(std::cos(theta), std::sin(theta));
    const std::complex<double> exponent =
        -0.5 + 1.0 / (1.0 - std::sqrt(params.mu) * phase);
    return std::exp(exponent * std::log(params.lambda));
}

std::complex<double> truncated_symbol_eval(const CoefficientSequence& coeffs,
                                           int band, double theta) {
    const int top = std::min(band, coeffs.truncation_index());
    std::complex<double> sum = 0.0;
    for (int j = top; j >= 0; --j) {
        const std::complex<double> phase(std::cos(j * theta),
                                         std::sin(j * theta));
        sum += coeffs.values[static_cast<size_t>(j)] * phase;
    }
    return sum;
}

double effective_transmissivity(const ChannelParams& params, double theta) {
    const double denom =
        1.0 - 2.0 * std::sqrt(params.mu) * std::cos(theta) + params.mu;
    return std::pow(params.lambda, (1.0 - params.mu) / denom);
}

double max_transmissivity(const ChannelParams& params) {
    const double root_mu = std::sqrt(params.mu);
    return std::pow(params.lambda, (1.0 - root_mu) / (1.0 + root_mu));
}

double theta_for_transmissivity(const ChannelParams& params, double level) {
    const double pi = std::acos(-1.0);
    const double lo_val = effective_transmissivity(params, 0.0);
    const double hi_val = max_transmissivity(params);
    if (!(level >= lo_val) || !(level <= hi_val)) {
        throw DomainError("transmissivity level outside [eta(0), M]");
    }
    double lo = 0.0, hi = pi;
    // eta is monotone increasing on [0, pi].
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (effective_transmissivity(params, mid) < level) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double derivative_l2_norm(const CoefficientSequence& coeffs, int k) {
    if (k < 0) {
        throw DomainError("derivative order k must be >= 0");
    }
    const double two_pi = 2.0 * std::acos(-1.0);
    double sum = 0.0;
    for (int j = coeffs.truncation_index(); j >= 0; --j) {
        const double a = coeffs.values[static_cast<size_t>(j)];
        const double w =
            (j == 0) ? (k == 0 ? 1.0 : 0.0) : std::pow(double(j), 2.0 * k);
        sum += w * a * a;
    }

    // Tail control via the stored envelope |a_j| <= scale * ratio^j:
    // sum_{j>J} j^{2k} a_j^2 <= scale^2 sum_{j>J} j^{2k} ratio^{2j}, geometric
    // with polynomial weight, evaluated term by term.
    const int J = coeffs.truncation_index();
    if (coeffs.decay_scale > 0.0 && coeffs.decay_ratio > 0.0) {
        const double r2 = coeffs.decay_ratio * coeffs.decay_ratio;
        if (!(r2 < 1.0)) {
            throw TruncationBudgetExceeded(
                "derivative_l2_norm: decay ratio not below 1");
        }
        double tail = 0.0;
        double rpow = std::pow(coeffs.decay_ratio, 2.0 * (J + 1));
        const double s2 = coeffs.decay_scale * coeffs.decay_scale;
        bool converged = false;
        for (int j = J + 1; j <= J + 2000000; ++j) {
            const double term = s2 * std::pow(double(j), 2.0 * k) * rpow;
            tail += term;
            rpow *= r2;
            if (term < 1e-18 * (tail + 1e-300)) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw TruncationBudgetExceeded(
                "derivative_l2_norm: weighted tail bound did not converge");
        }
        const double a0 = std::abs(coeffs.values[0]);
        const double reference = std::max(sum, a0 * a0);
        if (tail > coeffs.relative_tolerance * reference) {
            throw TruncationBudgetExceeded(
                "derivative_l2_norm: weighted tail not provably below "
                "tolerance at k = " +
                std::to_string(k));
        }
    }
    return std::sqrt(two_pi * sum);
}

CoefficientSequence truncate_band(const CoefficientSequence& coeffs,
                                  int band) {
    if (band < 0) {
        throw DomainError("band must be >= 0");
    }
    CoefficientSequence out;
    out.relative_tolerance = coeffs.relative_tolerance;
    const int top = std::min(band, coeffs.truncation_index());
    out.values.assign(coeffs.values.begin(), coeffs.values.begin() + top + 1);
    return out;
}

}  // namespace memcap
