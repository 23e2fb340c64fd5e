#include "test_function.hpp"

#include <cmath>
#include <numbers>

namespace twistlab {

double fejer(double x) {
    const double u = std::numbers::pi * x;
    if (std::abs(u) < 1e-8) {
        // sinc^2 = 1 - u^2/3 + O(u^4)
        return 1.0 - u * u / 3.0;
    }
    const double s = std::sin(u) / u;
    return s * s;
}

double fejer_hat(double t) { return std::max(1.0 - std::abs(t), 0.0); }

TestFunction TestFunction::fejer_kernel() {
    TestFunction f;
    f.h = fejer;
    f.h_hat = fejer_hat;
    f.hat_support = 1.0;
    // (1+x^2) h(x) <= 1 for all x: equality at 0, and the envelope
    // (1+x^2)/(pi x)^2 < 1 past the first zero.
    f.decay_constant = 1.0;
    return f;
}

namespace {

double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

} // namespace

double SmoothWindow::operator()(double x) const {
    if (indicator) return (x >= 0.5 && x <= 2.5) ? 1.0 : 0.0;
    if (x <= 0.5 || x >= 2.5) return 0.0;
    return smoothstep(2.0 * (x - 0.5)) * smoothstep(2.0 * (2.5 - x));
}

} // namespace twistlab
