#ifndef TWISTLAB_PRIME_SUMS_HPP
#define TWISTLAB_PRIME_SUMS_HPP

#include <span>
#include <vector>

#include "curve.hpp"

namespace twistlab {

struct PrimeSumValue {
    i64 d = 0;
    double x = 0.0;
    double value = 0.0;      // P(d; x)
    double normalized = 0.0; // P / sqrt(log log X)
};

// P(d;x) = sum_{p <= x, p not | N0} (a(p)/sqrt(p)) chi_d(p).  3 <= x <= p_max.
PrimeSumValue prime_sum_P(const CurveSpec& curve, const CoefficientTable& table, i64 d,
                          double x, double loglog_scale);

// Gaussian moments M_k = k!/(2^{k/2}(k/2)!) for even k, 0 for odd.
double gaussian_moment(int k);

struct MomentReport {
    int k_max = 0;
    double X = 0.0;
    double x = 0.0;
    std::vector<double> empirical; // index k
    std::vector<double> gaussian;  // M_k
    i64 sample_size = 0;
};

// Phi-weighted moments of P(d;x), normalized Keating-Snaith style:
// empirical[k] = sum P^k Phi / (sum Phi * (log log X)^{k/2}).
MomentReport empirical_moments(std::span<const double> prime_sums,
                               std::span<const double> phi_weights, double X, double x,
                               int k_max);

// Weighted variant: Phi replaced by zero_weight * Phi, normalized by the
// ell = 1 density average (the weighted family mass).
MomentReport weighted_moments(std::span<const double> prime_sums,
                              std::span<const double> zero_weights,
                              std::span<const double> phi_weights, double X, double x,
                              int k_max);

struct Prop1Rhs {
    double value = 0.0;
    bool outside_hypothesis = false; // x > |d|
};

// P(d;x) - (1/2) log log x.
Prop1Rhs prop1_rhs(const CurveSpec& curve, const CoefficientTable& table, i64 d, double x,
                   double loglog_scale);

struct ResidualSummary {
    i64 count = 0;
    double mean = 0.0, median = 0.0, q25 = 0.0, q75 = 0.0, min = 0.0, max = 0.0;
};

// Distribution of r(d) = log L(1/2, E_d) - prop1_rhs over a non-vanished
// subsample.  Empty input is an error.
ResidualSummary summarize_residuals(std::span<const double> residuals);

double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

} // namespace twistlab

#endif
