#ifndef TWISTLAB_QUADRATURE_HPP
#define TWISTLAB_QUADRATURE_HPP

#include <functional>

namespace twistlab {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

// Adaptive Gauss-Kronrod (G7,K15) with bisection.  Stops when the summed
// K15-vs-G7 error estimate is below max(abs_tol, rel_tol*|value|).
// Throws numerics_error if max_depth is exhausted without convergence.
QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-12, double rel_tol = 1e-12,
                        int max_depth = 40);

// Single non-adaptive K15 panel (used for fixed-resolution cross-checks).
double gk15_panel(const std::function<double(double)>& f, double a, double b);

// Fixed 16-node Gauss-Legendre rule on [a, b].
double gauss_legendre_16(const std::function<double(double)>& f, double a, double b);

} // namespace twistlab

#endif
