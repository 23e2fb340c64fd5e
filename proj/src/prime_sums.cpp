#include "prime_sums.hpp"

#include <algorithm>
#include <cmath>

#include "characters.hpp"
#include "errors.hpp"

namespace twistlab {

PrimeSumValue prime_sum_P(const CurveSpec& curve, const CoefficientTable& table, i64 d,
                          double x, double loglog_scale) {
    if (x < 3.0) throw input_error("prime_sum_P: x >= 3 required");
    if (x > double(table.p_max())) throw table_range_error("prime_sum_P: x exceeds p_max");
    KahanSum acc;
    for (size_t i = 0; i < table.primes().size(); ++i) {
        const i64 p = table.primes()[i];
        if (double(p) > x) break;
        if (curve.n0 % p == 0) continue;
        const int chi = kronecker(d, p);
        if (chi == 0) continue;
        // a(p)/sqrt(p) with the |a(n)| <= d(n) normalization: lambda(p)/sqrt(p)
        acc.add(table.lambdas()[i] / std::sqrt(double(p)) * chi);
    }
    PrimeSumValue out;
    out.d = d;
    out.x = x;
    out.value = acc.value();
    out.normalized = loglog_scale > 0.0 ? out.value / std::sqrt(loglog_scale) : out.value;
    return out;
}

double gaussian_moment(int k) {
    if (k < 0) throw input_error("gaussian_moment: k >= 0 required");
    if (k % 2 == 1) return 0.0;
    // M_{k+2} = (k+1) M_k, M_0 = 1
    double m = 1.0;
    for (int j = 0; j + 2 <= k; j += 2) m *= double(j + 1);
    return m;
}

namespace {

MomentReport moments_impl(std::span<const double> prime_sums,
                          std::span<const double> weights, double X, double x, int k_max) {
    if (prime_sums.empty()) throw input_error("moments: empty sample");
    if (prime_sums.size() != weights.size())
        throw input_error("moments: sample arrays disagree in length");
    if (k_max < 0) throw input_error("moments: k_max >= 0 required");

    MomentReport rep;
    rep.k_max = k_max;
    rep.X = X;
    rep.x = x;
    rep.sample_size = i64(prime_sums.size());
    const double loglogX = std::log(std::log(X));

    std::vector<double> terms(prime_sums.size());
    std::vector<double> pk(prime_sums.size(), 1.0);
    const double mass = pairwise_sum(weights);
    if (mass == 0.0) throw input_error("moments: zero total weight");
    for (int k = 0; k <= k_max; ++k) {
        for (size_t i = 0; i < prime_sums.size(); ++i) terms[i] = pk[i] * weights[i];
        const double num = pairwise_sum(terms);
        rep.empirical.push_back(num / (mass * std::pow(loglogX, 0.5 * k)));
        rep.gaussian.push_back(gaussian_moment(k));
        for (size_t i = 0; i < prime_sums.size(); ++i) pk[i] *= prime_sums[i];
    }
    return rep;
}

} // namespace

MomentReport empirical_moments(std::span<const double> prime_sums,
                               std::span<const double> phi_weights, double X, double x,
                               int k_max) {
    return moments_impl(prime_sums, phi_weights, X, x, k_max);
}

MomentReport weighted_moments(std::span<const double> prime_sums,
                              std::span<const double> zero_weights,
                              std::span<const double> phi_weights, double X, double x,
                              int k_max) {
    if (zero_weights.size() != phi_weights.size())
        throw input_error("weighted_moments: sample arrays disagree in length");
    std::vector<double> w(zero_weights.size());
    for (size_t i = 0; i < w.size(); ++i) w[i] = zero_weights[i] * phi_weights[i];
    return moments_impl(prime_sums, w, X, x, k_max);
}

Prop1Rhs prop1_rhs(const CurveSpec& curve, const CoefficientTable& table, i64 d, double x,
                   double loglog_scale) {
    Prop1Rhs out;
    const PrimeSumValue p = prime_sum_P(curve, table, d, x, loglog_scale);
    out.value = p.value - 0.5 * std::log(std::log(x));
    out.outside_hypothesis = x > std::abs(double(d));
    return out;
}

ResidualSummary summarize_residuals(std::span<const double> residuals) {
    if (residuals.empty())
        throw input_error("summarize_residuals: empty (all-vanished?) sample");
    std::vector<double> v(residuals.begin(), residuals.end());
    std::sort(v.begin(), v.end());
    auto quantile = [&](double q) {
        const double pos = q * double(v.size() - 1);
        const size_t lo = size_t(pos);
        const size_t hi = std::min(lo + 1, v.size() - 1);
        const double frac = pos - double(lo);
        return v[lo] * (1.0 - frac) + v[hi] * frac;
    };
    ResidualSummary s;
    s.count = i64(v.size());
    s.mean = pairwise_sum(v) / double(v.size());
    s.median = quantile(0.5);
    s.q25 = quantile(0.25);
    s.q75 = quantile(0.75);
    s.min = v.front();
    s.max = v.back();
    return s;
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw input_error("pearson_correlation: need two samples of equal length >= 2");
    const double n = double(xs.size());
    const double mx = pairwise_sum(xs) / n;
    const double my = pairwise_sum(ys) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw input_error("pearson_correlation: degenerate sample");
    return sxy / std::sqrt(sxx * syy);
}

} // namespace twistlab
