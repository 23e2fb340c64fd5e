#ifndef TWISTLAB_CENTRAL_HPP
#define TWISTLAB_CENTRAL_HPP

#include <vector>

#include "curve.hpp"
#include "family.hpp"

namespace twistlab {

// Which log log goes into the Keating-Snaith statistic.
enum class Normalization { kPerD, kPerX };

// Mellin kernel of the smoothed approximate functional equation:
// (1/2pi i) Int Gamma(1+u) x^{-u} du/u = e^{-x}.
double afe_kernel(double x);

struct TwistCentralValue {
    i64 d = 0;
    double L_half = 0.0;
    bool vanished = false;
    double statistic = 0.0; // -inf sentinel when vanished
    i64 terms_used = 0;
};

// Smallest n_cut with certified truncation tail below tail_eps:
// ceil(Q ln(1/tail_eps) + 5Q), Q = sqrt(N) |d| / (2pi).
i64 afe_terms_needed(const CurveSpec& curve, i64 d, double tail_eps);

// (log L + (1/2) log log |d|) / sqrt(log log |d|); -inf when |L_half| is
// below vanish_threshold.  |d| >= 20 required.
double ks_statistic(i64 d, double L_half, double vanish_threshold = 1e-6);

// Reusable AFE evaluator: shares the spf sieve and the a(n)/sqrt(n) array
// across twists.  evaluate() is const and thread-safe.
class AfeEvaluator {
  public:
    AfeEvaluator(const CurveSpec& curve, const CoefficientTable& table,
                 double tail_eps = 1e-10, double vanish_threshold = 1e-6,
                 Normalization norm = Normalization::kPerD, double X = 0.0);

    // L(1/2, E_d) = (1 + eps_E(d)) sum_{n <= n_cut} a(n) chi_d(n) n^{-1/2} e^{-n/Q}.
    // Exactly 0 for eps_E(d) = -1.  Throws coverage_error naming the
    // required n_cut when the table is short.
    TwistCentralValue evaluate(i64 d) const;

    double tail_eps() const { return tail_eps_; }
    double vanish_threshold() const { return vanish_threshold_; }

  private:
    const CurveSpec& curve_;
    const CoefficientTable& table_;
    double tail_eps_;
    double vanish_threshold_;
    Normalization norm_;
    double X_;
    std::vector<double> an_over_sqrt_;      // a(n)/sqrt(n)
    std::vector<std::uint32_t> spf_;        // shared factor sieve for chi_d
};

} // namespace twistlab

#endif
