#include "explicit_formula.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "errors.hpp"
#include "quadrature.hpp"

namespace twistlab {

double digamma_re(double t) {
    std::complex<double> z(1.0, t);
    std::complex<double> acc(0.0, 0.0);
    // shift until |z| >= 16, then Stirling
    while (std::norm(z) < 256.0) {
        acc += 1.0 / z;
        z += 1.0;
    }
    const std::complex<double> w2 = 1.0 / (z * z);
    // psi(w) = ln w - 1/(2w) - 1/(12w^2) + 1/(120w^4) - 1/(252w^6)
    //          + 1/(240w^8) - 1/(132w^10) + 691/(32760w^12) - 1/(12w^14)
    std::complex<double> series(0.0, 0.0);
    const double coef[7] = {1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240,
                            1.0 / 132, -691.0 / 32760, 1.0 / 12};
    std::complex<double> pw = w2;
    for (int i = 0; i < 7; ++i) {
        series += coef[i] * pw;
        pw *= w2;
    }
    const std::complex<double> psi = std::log(z) - 0.5 / z - series;
    return (psi - acc).real();
}

// ----------------------------------------------------------------------
// Archimedean side
// ----------------------------------------------------------------------

double archimedean_log_term(const CurveSpec& curve, i64 d, double L_param,
                            const TestFunction& h) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double dd = double(d);
    const double logterm =
        std::log(double(curve.conductor)) + 2.0 * std::log(std::abs(dd)) - 2.0 * std::log(two_pi);
    return logterm * h.h_hat(0.0) / L_param;
}

double archimedean_digamma_part(double L_param, const TestFunction& h, double abs_tol) {
    if (L_param < 1.0) throw input_error("archimedean term: L >= 1 required");
    const double s = h.hat_support;
    const double hat0 = h.h_hat(0.0);
    const double gamma = 0.57721566490153286061;
    auto integrand = [&](double w) {
        const double denom = std::expm1(L_param * w);
        return (hat0 - h.h_hat(w)) / denom;
    };
    const QuadResult q = integrate_gk(integrand, 0.0, s, abs_tol, abs_tol);
    const double tail = -hat0 * std::log1p(-std::exp(-L_param * s)) / L_param;
    return -2.0 * gamma * hat0 / L_param + 2.0 * (q.value + tail);
}

double archimedean_term(const CurveSpec& curve, i64 d, double L_param,
                        const TestFunction& h, double abs_tol) {
    return archimedean_log_term(curve, d, L_param, h) +
           archimedean_digamma_part(L_param, h, abs_tol);
}

// ----------------------------------------------------------------------
// Prime side
// ----------------------------------------------------------------------

double prime_side(const CurveSpec& curve, const CoefficientTable& table, i64 d,
                  double L_param, const TestFunction& h, BadPrimeMode mode) {
    (void)curve;
    const double s = h.hat_support;
    const double log_limit = L_param * s;
    if (log_limit >= 60.0)
        throw coverage_error("prime_side: e^{L * support} too large", i64(1) << 62, 0);
    const double limit_real = std::exp(log_limit);
    const i64 limit = i64(std::floor(limit_real));
    if (limit < 2) return 0.0;
    if (limit > table.p_max())
        throw coverage_error("prime_side: coefficient table too small; need p_max >= " +
                                 std::to_string(limit),
                             limit, 0);

    KahanSum acc;
    for (i64 p : table.primes()) {
        if (p > limit) break;
        const int chi_p = kronecker(d, p);
        if (chi_p == 0) continue;
        const double logp = std::log(double(p));
        int chi_pk = 1;
        for (int k = 1;; ++k) {
            if (double(k) * logp > log_limit) break;
            chi_pk *= chi_p;
            const double lam_e = table.lambda_e_prime_power(p, k, mode);
            if (lam_e == 0.0) continue;
            const double u = double(k) * logp / L_param;
            const double hats = h.h_hat(u) + h.h_hat(-u);
            if (hats == 0.0) continue;
            acc.add(lam_e * chi_pk * hats / std::exp(0.5 * double(k) * logp));
        }
    }
    return acc.value() / L_param;
}

ZeroWeight zero_weight(const CurveSpec& curve, const CoefficientTable& table, i64 d,
                       double L_param, const TestFunction& h, BadPrimeMode mode,
                       double abs_tol) {
    ZeroWeight zw;
    zw.d = d;
    zw.L_param = L_param;
    zw.archimedean = archimedean_term(curve, d, L_param, h, abs_tol);
    zw.prime_side = prime_side(curve, table, d, L_param, h, mode);
    zw.weight = zw.archimedean - zw.prime_side;
    return zw;
}

double repulsion_integral(const CurveSpec& curve, const CoefficientTable& table, i64 d,
                          double x, BadPrimeMode mode) {
    if (x < 3.0) throw input_error("repulsion_integral: x >= 3 required");
    const double logx = std::log(x);
    const i64 required = i64(std::ceil(x * x));
    if (required > table.p_max())
        throw coverage_error("repulsion_integral: need prime coverage x^2 = " +
                                 std::to_string(required),
                             required, 0);
    const TestFunction h = TestFunction::fejer_kernel();
    auto f = [&](double L) {
        return zero_weight(curve, table, d, L, h, mode).weight;
    };
    return gauss_legendre_16(f, logx, 2.0 * logx) / logx;
}

// ----------------------------------------------------------------------
// Family averages
// ----------------------------------------------------------------------

double density_average(std::span<const WeightedTwist> sample, const CurveSpec& curve,
                       i64 ell) {
    if (sample.empty()) throw input_error("density_average: empty sample");
    if (ell < 1 || gcd_i64(ell, curve.n0) != 1)
        throw input_error("density_average: ell must be positive and coprime to N0");
    std::vector<double> terms;
    terms.reserve(sample.size());
    for (const WeightedTwist& t : sample)
        terms.push_back(t.zero_weight * kronecker(t.d, ell) * t.phi);
    return pairwise_sum(terms);
}

double euler_product_coprime_n0(const CurveSpec& curve) {
    static const double full = [] {
        // prod over all p <= 1e6; tail below 1e-6
        double v = 1.0;
        for (i64 p : sieve_primes(1'000'000)) v *= 1.0 - 1.0 / (double(p) * double(p));
        return v;
    }();
    double v = full;
    i64 m = curve.n0;
    for (i64 p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        v /= 1.0 - 1.0 / (double(p) * double(p));
        while (m % p == 0) m /= p;
    }
    if (m > 1) v /= 1.0 - 1.0 / (double(m) * double(m));
    return v;
}

double predicted_density_main_term(const CurveSpec& curve, double X, double L_param,
                                   const TestFunction& h, const SmoothWindow& phi,
                                   i64 ell_square) {
    if (ell_square < 1) throw input_error("predicted_density_main_term: ell must be >= 1");
    const i64 root = i64(std::llround(std::sqrt(double(ell_square))));
    if (root * root != ell_square)
        throw input_error("predicted_density_main_term: ell must be a perfect square");
    double local = 1.0;
    i64 m = ell_square;
    for (i64 p = 2; p * p <= m; ++p) {
        if (m % p != 0) continue;
        local *= 1.0 / (1.0 + 1.0 / double(p));
        while (m % p == 0) m /= p;
    }
    if (m > 1) local *= 1.0 / (1.0 + 1.0 / double(m));
    const double bracket = 2.0 * std::log(X) / L_param * h.h_hat(0.0) + h.h(0.0) / 2.0;
    return X / double(curve.n0) * local * euler_product_coprime_n0(curve) * phi.mass() * bracket;
}

} // namespace twistlab
