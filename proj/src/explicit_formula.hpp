#ifndef TWISTLAB_EXPLICIT_FORMULA_HPP
#define TWISTLAB_EXPLICIT_FORMULA_HPP

#include <span>
#include <vector>

#include "curve.hpp"
#include "family.hpp"
#include "test_function.hpp"

namespace twistlab {

// Re psi(1+it) via upward recurrence into the asymptotic region plus the
// Stirling series; absolute error < 1e-10.
double digamma_re(double t);

// ----------------------------------------------------------------------
// Explicit formula: Sigma_gamma h(gamma_d L / 2pi) = archimedean - prime side
// ----------------------------------------------------------------------

// (1/2pi) Int h(tL/2pi) log(N d^2/(2pi)^2) dt = log(N d^2/(2pi)^2) hhat(0)/L.
double archimedean_log_term(const CurveSpec& curve, i64 d, double L_param,
                            const TestFunction& h);

// (1/2pi) Int h(tL/2pi) 2 Re psi(1+it) dt.  The oscillatory t-integral is
// rewritten with Parseval against Re psi(1+it) = -gamma + sum (1/n - n/(n^2+t^2)):
//
//   = -2 gamma hhat(0)/L + 2 Int_0^s (hhat(0)-hhat(w))/(e^{Lw}-1) dw
//     - 2 hhat(0) log(1-e^{-Ls})/L,       s = hat_support,
//
// a smooth one-dimensional integral evaluated by adaptive Gauss-Kronrod.
// abs_tol controls the quadrature (refinement contract for tests).
double archimedean_digamma_part(double L_param, const TestFunction& h,
                                double abs_tol = 1e-12);

double archimedean_term(const CurveSpec& curve, i64 d, double L_param,
                        const TestFunction& h, double abs_tol = 1e-12);

// (1/L) sum over prime powers n = p^k <= e^{L s} of
// Lambda_E(n)/sqrt(n) chi_d(n) (hhat(log n/L) + hhat(-log n/L)).
// Throws coverage_error naming the required p_max when the table is short.
double prime_side(const CurveSpec& curve, const CoefficientTable& table, i64 d,
                  double L_param, const TestFunction& h,
                  BadPrimeMode mode = BadPrimeMode::kEuler);

struct ZeroWeight {
    i64 d = 0;
    double L_param = 0.0;
    double weight = 0.0;      // Sigma_gamma h(gamma_d L / 2pi)
    double archimedean = 0.0;
    double prime_side = 0.0;
};

ZeroWeight zero_weight(const CurveSpec& curve, const CoefficientTable& table, i64 d,
                       double L_param, const TestFunction& h,
                       BadPrimeMode mode = BadPrimeMode::kEuler,
                       double abs_tol = 1e-12);

// (1/log x) Int_{log x}^{2 log x} zero_weight(d, L) dL by a fixed 16-node
// Gauss-Legendre rule; empirical proxy for Sigma_gamma min(1, (gamma_d log x)^{-2}).
// Requires prime coverage x^2.
double repulsion_integral(const CurveSpec& curve, const CoefficientTable& table, i64 d,
                          double x, BadPrimeMode mode = BadPrimeMode::kEuler);

// ----------------------------------------------------------------------
// Family averages (one-level density and weighted moments)
// ----------------------------------------------------------------------

// Per-twist data consumed by the aggregators.
struct WeightedTwist {
    i64 d = 0;
    double zero_weight = 0.0;
    double phi = 0.0;        // Phi(kappa d / X)
    double prime_sum = 0.0;  // P(d; x) when computed
};

// sum_d zero_weight * chi_d(ell) * phi over the sample, with a fixed-order
// pairwise reduction.  ell >= 1, gcd(ell, N0) = 1.
double density_average(std::span<const WeightedTwist> sample, const CurveSpec& curve,
                       i64 ell);

// Main term of the one-level density average for square ell:
//   (X/N0) prod_{p|ell}(1+1/p)^{-1} prod_{p not | N0}(1-1/p^2) Phihat(0)
//   (2 log X / L hhat(0) + h(0)/2),
// with the O(1/L) term dropped.  The Euler product is truncated at 1e6
// (tail below 1e-6).
double predicted_density_main_term(const CurveSpec& curve, double X, double L_param,
                                   const TestFunction& h, const SmoothWindow& phi,
                                   i64 ell_square);

// prod_{p not | N0, p <= 1e6} (1 - 1/p^2)
double euler_product_coprime_n0(const CurveSpec& curve);

} // namespace twistlab

#endif
