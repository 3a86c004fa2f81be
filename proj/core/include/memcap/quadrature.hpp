#pragma once

#include <functional>
#include <span>

#include "memcap/errors.hpp"

namespace memcap {

// Adaptive Gauss-Kronrod integration of f over [a, b] to absolute accuracy
// abs_tol. Interior points where the integrand has a derivative jump must be
// passed as split_points (points outside (a,b) are ignored); each smooth piece
// is integrated separately. Throws QuadratureBudgetExceeded when the estimated
// error still exceeds abs_tol at max_depth bisection levels.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> split_points, double abs_tol,
                 int max_depth = 15);

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth = 15) {
    return integrate(f, a, b, std::span<const double>{}, abs_tol, max_depth);
}

}  // namespace memcap
