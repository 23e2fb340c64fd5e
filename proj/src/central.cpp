#include "central.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "characters.hpp"
#include "errors.hpp"

namespace twistlab {

double afe_kernel(double x) {
    if (x < 0.0) throw input_error("afe_kernel: x must be nonnegative");
    return std::exp(-x);
}

i64 afe_terms_needed(const CurveSpec& curve, i64 d, double tail_eps) {
    const double q = std::sqrt(double(curve.conductor)) * std::abs(double(d)) /
                     (2.0 * std::numbers::pi);
    return i64(std::ceil(q * std::log(1.0 / tail_eps) + 5.0 * q));
}

double ks_statistic(i64 d, double L_half, double vanish_threshold) {
    const i64 ad = d < 0 ? -d : d;
    if (ad < 20) throw domain_error("ks_statistic: |d| >= 20 required");
    if (std::abs(L_half) < vanish_threshold)
        return -std::numeric_limits<double>::infinity();
    const double ll = std::log(std::log(double(ad)));
    return (std::log(L_half) + 0.5 * ll) / std::sqrt(ll);
}

AfeEvaluator::AfeEvaluator(const CurveSpec& curve, const CoefficientTable& table,
                           double tail_eps, double vanish_threshold, Normalization norm,
                           double X)
    : curve_(curve), table_(table), tail_eps_(tail_eps),
      vanish_threshold_(vanish_threshold), norm_(norm), X_(X) {
    if (!(tail_eps > 0.0) || tail_eps > 1e-4)
        throw input_error("AfeEvaluator: tail_eps must lie in (0, 1e-4]");
    const i64 n_max = table.n_max();
    an_over_sqrt_.resize(size_t(n_max) + 1, 0.0);
    for (i64 n = 1; n <= n_max; ++n)
        an_over_sqrt_[size_t(n)] = table.an_values()[size_t(n)] / std::sqrt(double(n));
    spf_ = sieve_spf(n_max);
}

TwistCentralValue AfeEvaluator::evaluate(i64 d) const {
    TwistCentralValue out;
    out.d = d;
    const int eps = root_number(curve_, d);
    if (eps == -1) {
        out.L_half = 0.0;
        out.vanished = true;
        out.statistic = -std::numeric_limits<double>::infinity();
        out.terms_used = 0;
        return out;
    }

    const i64 n_cut = afe_terms_needed(curve_, d, tail_eps_);
    if (n_cut > table_.n_max())
        throw coverage_error("central_value: insufficient coefficients; need n_cut = " +
                                 std::to_string(n_cut),
                             0, n_cut);
    const double q = std::sqrt(double(curve_.conductor)) * std::abs(double(d)) /
                     (2.0 * std::numbers::pi);

    // chi_d(n) is completely multiplicative: fill by smallest prime factor.
    std::vector<signed char> chi(size_t(n_cut) + 1, 0);
    chi[1] = 1;
    for (i64 n = 2; n <= n_cut; ++n) {
        const i64 p = spf_[size_t(n)];
        const i64 m = n / p;
        chi[size_t(n)] = (m == 1) ? (signed char)kronecker(d, p)
                                  : (signed char)(chi[size_t(m)] * chi[size_t(p)]);
    }

    // Kahan sum in fixed ascending order; incremental e^{-n/Q} with exact
    // resync every 512 steps to stop drift.
    KahanSum acc;
    const double r = std::exp(-1.0 / q);
    double w = 1.0;
    for (i64 n = 1; n <= n_cut; ++n) {
        if ((n & 511) == 0) w = std::exp(-double(n - 1) / q);
        w *= r; // now e^{-n/Q}
        const int c = chi[size_t(n)];
        if (c != 0) acc.add(an_over_sqrt_[size_t(n)] * c * w);
    }

    out.L_half = 2.0 * acc.value(); // (1 + eps) with eps = +1
    out.terms_used = n_cut;
    out.vanished = std::abs(out.L_half) < vanish_threshold_;
    const i64 stat_scale_d = (norm_ == Normalization::kPerX && X_ >= 20.0)
                                 ? i64(std::llround(X_))
                                 : d;
    // the statistic needs log log |d| > 1; members with |d| < 20 (possible
    // only in the X = 20 window, outside the hard window) carry NaN
    if (std::abs(stat_scale_d) >= 20)
        out.statistic = ks_statistic(stat_scale_d, out.L_half, vanish_threshold_);
    else
        out.statistic = std::numeric_limits<double>::quiet_NaN();
    return out;
}

} // namespace twistlab
