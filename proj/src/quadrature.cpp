#include "quadrature.hpp"

#include <cmath>

#include "errors.hpp"

namespace twistlab {

namespace {

// QUADPACK dqk15 abscissae/weights (positive half; node 7 is the midpoint).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
    double k15;
    double err;
};

PanelResult gk15_core(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int j = 0; j < 7; ++j) {
        fv[j] = f(c - h * kXgk[j]);
        fv[14 - j] = f(c + h * kXgk[j]);
    }
    fv[7] = f(c);
    double k15 = 0.0, g7 = 0.0;
    for (int j = 0; j < 7; ++j) k15 += kWgk[j] * (fv[j] + fv[14 - j]);
    k15 += kWgk[7] * fv[7];
    // Gauss nodes are the odd-index Kronrod nodes.
    g7 = kWg[3] * fv[7];
    for (int j = 0; j < 3; ++j) g7 += kWg[j] * (fv[2 * j + 1] + fv[13 - 2 * j]);
    k15 *= h;
    g7 *= h;
    return {k15, std::abs(k15 - g7)};
}

void adapt(const std::function<double(double)>& f, double a, double b,
           double tol, int depth, int max_depth, QuadResult& out) {
    PanelResult r = gk15_core(f, a, b);
    out.evaluations += 15;
    if (r.err <= tol || depth >= max_depth) {
        if (r.err > tol)
            throw numerics_error("integrate_gk: max refinement depth exhausted");
        out.value += r.k15;
        out.error_estimate += r.err;
        return;
    }
    const double c = 0.5 * (a + b);
    adapt(f, a, c, 0.5 * tol, depth + 1, max_depth, out);
    adapt(f, c, b, 0.5 * tol, depth + 1, max_depth, out);
}

} // namespace

QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, double rel_tol, int max_depth) {
    QuadResult out;
    if (a == b) return out;
    PanelResult first = gk15_core(f, a, b);
    out.evaluations = 15;
    double tol = std::max(abs_tol, rel_tol * std::abs(first.k15));
    if (first.err <= tol) {
        out.value = first.k15;
        out.error_estimate = first.err;
        return out;
    }
    out = QuadResult{};
    adapt(f, a, b, tol, 0, max_depth, out);
    return out;
}

double gk15_panel(const std::function<double(double)>& f, double a, double b) {
    return gk15_core(f, a, b).k15;
}

double gauss_legendre_16(const std::function<double(double)>& f, double a, double b) {
    static constexpr double x[8] = {
        0.0950125098376374401853193, 0.2816035507792589132304605,
        0.4580167776572273863424194, 0.6178762444026437484466718,
        0.7554044083550030338951012, 0.8656312023878317438804679,
        0.9445750230732325760779884, 0.9894009349916499325961542};
    static constexpr double w[8] = {
        0.1894506104550684962853967, 0.1826034150449235888667637,
        0.1691565193950025381893121, 0.1495959888165767320815017,
        0.1246289712555338720524763, 0.0951585116824927848099251,
        0.0622535239386478928628438, 0.0271524594117540948517806};
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int j = 0; j < 8; ++j)
        s += w[j] * (f(c - h * x[j]) + f(c + h * x[j]));
    return s * h;
}

} // namespace twistlab
