#ifndef TWISTLAB_CONFIG_HPP
#define TWISTLAB_CONFIG_HPP

#include <string>
#include <vector>

#include "central.hpp"
#include "curve.hpp"

namespace twistlab {

enum class XPolicy { kPaper, kPower, kFixed };
enum class LPolicy { kPaper, kLogX, kFixed };

// Plain-text `key = value` configuration, `#` comments, no nesting.
// Flags of the CLI mirror these keys and override file values.
struct ExperimentConfig {
    // curve (defaults: 11a1)
    i64 a1 = 0, a2 = -1, a3 = 1, a4 = -10, a6 = -20;
    i64 conductor = 11;
    int eps_e = 1;

    // experiment parameters
    double X = 10000.0;
    XPolicy x_policy = XPolicy::kPower;
    double x_param = 1.0 / 3.0; // exponent for power, value for fixed
    LPolicy L_policy = LPolicy::kLogX;
    double L_param = 0.0;       // delta for paper, value for fixed
    int k_max = 6;
    double alpha = -1.0, beta = 1.0;
    double tail_eps = 1e-10;
    double vanish_threshold = 1e-6;
    BadPrimeMode bad_prime_mode = BadPrimeMode::kEuler;
    Normalization normalization = Normalization::kPerD;
    int threads = 0; // 0 = TWISTLAB_THREADS or hardware
    std::string cache_path = "coeffs.twl";
    std::string output_path = "sweep.csv";
    i64 bsgs_threshold = 0; // 0 = residue-table counting only
    i64 p_max = 0;          // 0 = derive from X / policies
    i64 n_max = 0;
    std::vector<i64> ell_list = {1, 3, 9};
    bool window_indicator = false; // replace Phi by the hard indicator

    static ExperimentConfig load(const std::string& path);
    static ExperimentConfig from_text(const std::string& text);

    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;
    std::string to_text() const;

    // alpha < beta, X >= 20, tail_eps in (0, 1e-4]
    void validate() const;

    CurveSpec curve() const;
    double resolve_x() const; // >= 3
    double resolve_L() const; // >= 1
    double paper_x() const;   // X^{1/log log log X}, for report transparency
};

} // namespace twistlab

#endif
