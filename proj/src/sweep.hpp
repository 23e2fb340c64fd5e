#ifndef TWISTLAB_SWEEP_HPP
#define TWISTLAB_SWEEP_HPP

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "config.hpp"
#include "explicit_formula.hpp"
#include "prime_sums.hpp"

namespace twistlab {

// One CSV row (schema D-fixed: d,kappa,a_class,eps_d,L_half,vanished,
// statistic,P_dx,zero_weight).
struct TwistRow {
    i64 d = 0;
    int kappa = 0;
    i64 a_class = 0;
    int eps_d = 0;
    double L_half = 0.0;
    bool vanished = false;
    double statistic = 0.0; // -inf when vanished
    double P_dx = 0.0;
    double zero_weight = 0.0;
};

struct DistributionReport {
    i64 counts = 0;      // N(X; alpha, beta) over X < |d| <= 2X
    i64 family_size = 0; // all admissible d in the hard window
    double alpha = 0.0, beta = 0.0;
    double gaussian_mass = 0.0;  // (1/sqrt(2pi)) Int_alpha^beta e^{-t^2/2}
    double quarter_bound = 0.0;  // 0.25 * gaussian_mass * family_size
    double nonvanishing_fraction = 0.0;
    double ks_distance = 0.0;    // empirical CDF of the statistic vs N(0,1)
};

struct TheoremCheck {
    bool pass = false;
    double margin = 0.0; // counts / quarter_bound
};

struct Histogram {
    double lo = -4.0, hi = 4.0, width = 0.25;
    std::vector<i64> counts; // 32 bins
    i64 underflow = 0;       // includes vanished (-inf)
    i64 overflow = 0;
};

// (1/sqrt(2pi)) Int_alpha^beta e^{-t^2/2} dt by adaptive quadrature.
double gaussian_mass(double alpha, double beta);

double normal_cdf(double t);

DistributionReport distribution_report(const std::vector<TwistRow>& rows, double X,
                                       double alpha, double beta);

TheoremCheck theorem_check(const DistributionReport& report);

Histogram statistic_histogram(const std::vector<TwistRow>& rows, double X);

struct SweepResult {
    double X = 0.0, x_used = 0.0, L_used = 0.0;
    std::vector<TwistRow> rows; // full Phi window [X/2, 5X/2], sorted by |d|
    i64 family_size_window = 0;
    int num_admissible_classes = 0;

    DistributionReport distribution;
    TheoremCheck theorem;
    Histogram histogram;
    MomentReport moments_plain;
    MomentReport moments_weighted;
    ResidualSummary residuals;
    double correlation_logL_P = std::numeric_limits<double>::quiet_NaN();
    double smallest_nonzero_L = std::numeric_limits<double>::quiet_NaN();
    i64 waldspurger_violations = 0;
    std::vector<i64> review_flags; // vanished twists with weight in [0.5, 1.8)

    std::string csv_path, jsonl_path, text_path;
};

// Full per-discriminant run: CSV plus aggregate reports (JSON-lines and
// text).  Deterministic for a fixed config, independent of thread count.
SweepResult run_sweep(const ExperimentConfig& cfg, std::ostream* log = nullptr);

// Aggregates recomputed offline from an existing CSV (same config).
SweepResult recompute_from_csv(const ExperimentConfig& cfg, const std::string& csv_path);

// Prop 2 experiments: density averages over an ell-list.
struct DensityResult {
    double X = 0.0, L_used = 0.0;
    i64 sample_size = 0;
    int num_admissible_classes = 0;
    std::vector<i64> ells;
    std::vector<double> empirical;  // sum_d w_d chi_d(ell) Phi
    std::vector<double> predicted;  // pooled main term for square ell, else NaN
    std::vector<double> ratio;      // empirical / predicted where defined
};

DensityResult run_density(const ExperimentConfig& cfg, std::ostream* log = nullptr);

// Prop 3 experiments: plain and weighted moments (pooled and per class).
struct MomentsResult {
    MomentReport pooled_plain;
    MomentReport pooled_weighted;
    std::vector<std::pair<FamilyClass, MomentReport>> per_class_plain;
};

MomentsResult run_moments(const ExperimentConfig& cfg, std::ostream* log = nullptr);

// Family enumeration run: writes a member CSV (d,kappa,a_class,eps_d) to
// the configured output path and returns the class table.
struct FamilyRunResult {
    std::vector<FamilyClass> classes;
    std::vector<DiscriminantRecord> records;
    std::string csv_path;
};

FamilyRunResult run_family(const ExperimentConfig& cfg);

// Cache build/refresh with sweep-level coverage.
struct CoeffsRunResult {
    i64 p_max = 0, n_max = 0;
    i64 prime_count = 0;
    std::string cache_path;
};

CoeffsRunResult run_coeffs(const ExperimentConfig& cfg, std::ostream* log = nullptr);

// CSV I/O (bit-stable: floats at 17 significant digits, -inf spelled "-inf")
void write_sweep_csv(const std::string& path, const std::vector<TwistRow>& rows);
std::vector<TwistRow> read_sweep_csv(const std::string& path);

void write_reports(const SweepResult& result, const std::string& jsonl_path,
                   const std::string& text_path);

} // namespace twistlab

#endif
