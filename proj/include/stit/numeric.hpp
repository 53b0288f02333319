#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

namespace stit {

// Adaptive Simpson quadrature on [a, b].  The integrand may have isolated
// kinks (polygon width functions do); the recursion subdivides until the
// Richardson error estimate drops below tol or max_depth is reached.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 48);

// Convenience: integrate with a relative tolerance against a rough pilot
// estimate of the integral's magnitude.
double integrate_rel(const std::function<double(double)>& f, double a, double b,
                     double rel_tol);

// Gauss-Legendre nodes and weights on [-1, 1], computed once per order by
// Newton iteration on the Legendre recurrence.
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const QuadRule& gauss_legendre(int n);

}  // namespace stit
