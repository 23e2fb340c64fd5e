#include "twistlab.h"

#include <cstring>
#include <limits>
#include <new>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cache.hpp"
#include "central.hpp"
#include "characters.hpp"
#include "config.hpp"
#include "curve.hpp"
#include "errors.hpp"
#include "explicit_formula.hpp"
#include "family.hpp"
#include "prime_sums.hpp"
#include "sweep.hpp"
#include "test_function.hpp"

using namespace twistlab;
using ordered_json = nlohmann::ordered_json;

struct twl_curve {
    CurveSpec spec;
};

struct twl_table {
    CurveSpec spec; // owning copy of the curve the table was built for
    CoefficientTable table;
};

struct twl_config {
    ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

twl_status fail(twl_status code, const char* what) {
    g_last_error = what ? what : "";
    return code;
}

// Translate the C++ error idiom into status codes at the boundary.
template <typename Fn>
twl_status guard(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return TWL_OK;
    } catch (const input_error& e) {
        return fail(TWL_ERR_INVALID_ARGUMENT, e.what());
    } catch (const domain_error& e) {
        return fail(TWL_ERR_DOMAIN, e.what());
    } catch (const table_range_error& e) {
        return fail(TWL_ERR_TABLE_RANGE, e.what());
    } catch (const coverage_error& e) {
        return fail(TWL_ERR_COVERAGE, e.what());
    } catch (const io_error& e) {
        return fail(TWL_ERR_IO, e.what());
    } catch (const format_error& e) {
        return fail(TWL_ERR_FORMAT, e.what());
    } catch (const numerics_error& e) {
        return fail(TWL_ERR_NUMERICS, e.what());
    } catch (const std::bad_alloc&) {
        return fail(TWL_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(TWL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(TWL_ERR_INTERNAL, "unknown error");
    }
}

twl_status require(bool ok, const char* what) {
    return ok ? TWL_OK : fail(TWL_ERR_INVALID_ARGUMENT, what);
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

ordered_json num_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

ordered_json sweep_summary_json(const SweepResult& res) {
    return ordered_json{
        {"run", "sweep"},
        {"X", res.X},
        {"x", res.x_used},
        {"L", res.L_used},
        {"family_size_window", res.family_size_window},
        {"admissible_classes", res.num_admissible_classes},
        {"hard_window_size", res.distribution.family_size},
        {"counts", res.distribution.counts},
        {"gaussian_mass", res.distribution.gaussian_mass},
        {"quarter_bound", res.distribution.quarter_bound},
        {"nonvanishing_fraction", res.distribution.nonvanishing_fraction},
        {"ks_distance", res.distribution.ks_distance},
        {"theorem_pass", res.theorem.pass},
        {"theorem_margin", num_or_null(res.theorem.margin)},
        {"correlation_logL_P", num_or_null(res.correlation_logL_P)},
        {"smallest_nonzero_L_half", num_or_null(res.smallest_nonzero_L)},
        {"waldspurger_violations", res.waldspurger_violations},
        {"csv", res.csv_path},
        {"reports_jsonl", res.jsonl_path},
        {"report_txt", res.text_path},
    };
}

} // namespace

extern "C" {

const char* twl_version(void) { return "0.1.0"; }

const char* twl_last_error(void) { return g_last_error.c_str(); }

// ---- curve ------------------------------------------------------------

twl_status twl_curve_new(int64_t a1, int64_t a2, int64_t a3, int64_t a4, int64_t a6,
                         int64_t conductor, int eps_e, twl_curve** out) {
    if (require(out != nullptr, "twl_curve_new: out is NULL")) return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        *out = new twl_curve{CurveSpec::make(a1, a2, a3, a4, a6, conductor, eps_e)};
    });
}

void twl_curve_free(twl_curve* curve) { delete curve; }

twl_status twl_curve_count_points(const twl_curve* curve, int64_t p, int64_t* count) {
    if (require(curve && count, "twl_curve_count_points: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { *count = count_points_mod_p(curve->spec, p); });
}

twl_status twl_curve_trace(const twl_curve* curve, int64_t p, int64_t* ap) {
    if (require(curve && ap, "twl_curve_trace: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { *ap = trace_of_frobenius(curve->spec, p); });
}

// ---- characters ---------------------------------------------------------

twl_status twl_kronecker(int64_t a, int64_t b, int* out) {
    if (require(out != nullptr, "twl_kronecker: out is NULL")) return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { *out = kronecker(a, b); });
}

twl_status twl_is_fundamental(int64_t d, int* out) {
    if (require(out != nullptr, "twl_is_fundamental: out is NULL"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { *out = is_fundamental(d) ? 1 : 0; });
}

twl_status twl_root_number(const twl_curve* curve, int64_t d, int* out) {
    if (require(curve && out, "twl_root_number: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { *out = root_number(curve->spec, d); });
}

twl_status twl_gauss_tau(int64_t v, int64_t m, double* re, double* im) {
    if (require(re && im, "twl_gauss_tau: NULL argument")) return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        auto z = gauss_sum_tau(v, m);
        *re = z.real();
        *im = z.imag();
    });
}

twl_status twl_gauss_g(int64_t v, int64_t m, double* re, double* im) {
    if (require(re && im, "twl_gauss_g: NULL argument")) return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        auto z = gauss_sum_g(v, m);
        *re = z.real();
        *im = z.imag();
    });
}

// ---- table --------------------------------------------------------------

twl_status twl_table_build(const twl_curve* curve, int64_t p_max, int64_t n_max,
                           int threads, int64_t bsgs_threshold, twl_table** out) {
    if (require(curve && out, "twl_table_build: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        BuildOptions opts;
        opts.threads = threads;
        opts.point_count.bsgs_threshold = bsgs_threshold;
        *out = new twl_table{curve->spec,
                             CoefficientTable::build(curve->spec, p_max, n_max, opts)};
    });
}

twl_status twl_table_load(const twl_curve* curve, const char* path, twl_table** out) {
    if (require(curve && path && out, "twl_table_load: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        *out = new twl_table{curve->spec, load_table_cache(curve->spec, path)};
    });
}

twl_status twl_table_save(const twl_table* table, const char* path) {
    if (require(table && path, "twl_table_save: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { save_table_cache(table->table, path); });
}

void twl_table_free(twl_table* table) { delete table; }

int64_t twl_table_p_max(const twl_table* table) { return table ? table->table.p_max() : 0; }
int64_t twl_table_n_max(const twl_table* table) { return table ? table->table.n_max() : 0; }

twl_status twl_table_ap(const twl_table* table, int64_t p, int64_t* ap) {
    if (require(table && ap, "twl_table_ap: NULL argument")) return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { *ap = table->table.ap_int(p); });
}

twl_status twl_table_lambda(const twl_table* table, int64_t p, double* lam) {
    if (require(table && lam, "twl_table_lambda: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { *lam = table->table.lambda(p); });
}

twl_status twl_table_an(const twl_table* table, int64_t n, double* an) {
    if (require(table && an, "twl_table_an: NULL argument")) return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { *an = table->table.an(n); });
}

twl_status twl_table_lambda_e(const twl_table* table, int64_t n, int exclude_bad,
                              double* out) {
    if (require(table && out, "twl_table_lambda_e: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        *out = table->table.lambda_e(
            n, exclude_bad ? BadPrimeMode::kExclude : BadPrimeMode::kEuler);
    });
}

twl_status twl_satake(double lam_p, double* re, double* im) {
    if (require(re && im, "twl_satake: NULL argument")) return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        auto z = satake(lam_p);
        *re = z.real();
        *im = z.imag();
    });
}

// ---- analytic quantities --------------------------------------------------

double twl_fejer(double x) { return fejer(x); }
double twl_fejer_hat(double t) { return fejer_hat(t); }
double twl_digamma_re(double t) { return digamma_re(t); }

twl_status twl_afe_kernel(double x, double* out) {
    if (require(out != nullptr, "twl_afe_kernel: out is NULL")) return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { *out = afe_kernel(x); });
}

twl_status twl_central_value(const twl_curve* curve, const twl_table* table, int64_t d,
                             double tail_eps, double vanish_threshold, double* L_half,
                             int* vanished, int64_t* terms_used) {
    if (require(curve && table && L_half, "twl_central_value: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        AfeEvaluator afe(curve->spec, table->table, tail_eps, vanish_threshold);
        TwistCentralValue cv = afe.evaluate(d);
        *L_half = cv.L_half;
        if (vanished) *vanished = cv.vanished ? 1 : 0;
        if (terms_used) *terms_used = cv.terms_used;
    });
}

twl_status twl_ks_statistic(int64_t d, double L_half, double vanish_threshold,
                            double* out) {
    if (require(out != nullptr, "twl_ks_statistic: out is NULL"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { *out = ks_statistic(d, L_half, vanish_threshold); });
}

twl_status twl_prime_sum(const twl_curve* curve, const twl_table* table, int64_t d,
                         double x, double* out) {
    if (require(curve && table && out, "twl_prime_sum: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { *out = prime_sum_P(curve->spec, table->table, d, x, 0.0).value; });
}

twl_status twl_gaussian_moment(int k, double* out) {
    if (require(out != nullptr, "twl_gaussian_moment: out is NULL"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { *out = gaussian_moment(k); });
}

twl_status twl_zero_weight(const twl_curve* curve, const twl_table* table, int64_t d,
                           double L_param, int exclude_bad, double* weight,
                           double* archimedean, double* prime_side_out) {
    if (require(curve && table && weight, "twl_zero_weight: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        ZeroWeight zw = zero_weight(curve->spec, table->table, d, L_param,
                                    TestFunction::fejer_kernel(),
                                    exclude_bad ? BadPrimeMode::kExclude
                                                : BadPrimeMode::kEuler);
        *weight = zw.weight;
        if (archimedean) *archimedean = zw.archimedean;
        if (prime_side_out) *prime_side_out = zw.prime_side;
    });
}

twl_status twl_repulsion_integral(const twl_curve* curve, const twl_table* table,
                                  int64_t d, double x, int exclude_bad, double* out) {
    if (require(curve && table && out, "twl_repulsion_integral: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        *out = repulsion_integral(curve->spec, table->table, d, x,
                                  exclude_bad ? BadPrimeMode::kExclude
                                              : BadPrimeMode::kEuler);
    });
}

// ---- config and runs --------------------------------------------------------

twl_status twl_config_new(twl_config** out) {
    if (require(out != nullptr, "twl_config_new: out is NULL")) return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { *out = new twl_config{}; });
}

twl_status twl_config_load(const char* path, twl_config** out) {
    if (require(path && out, "twl_config_load: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { *out = new twl_config{ExperimentConfig::load(path)}; });
}

void twl_config_free(twl_config* cfg) { delete cfg; }

twl_status twl_config_set(twl_config* cfg, const char* key, const char* value) {
    if (require(cfg && key && value, "twl_config_set: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] { cfg->cfg.set(key, value); });
}

twl_status twl_config_get(const twl_config* cfg, const char* key, char* buf,
                          size_t buflen) {
    if (require(cfg && key && buf, "twl_config_get: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        const std::string v = cfg->cfg.get(key);
        if (v.size() + 1 > buflen) throw input_error("twl_config_get: buffer too small");
        std::memcpy(buf, v.c_str(), v.size() + 1);
    });
}

twl_status twl_run_coeffs(const twl_config* cfg, char** json_summary) {
    if (require(cfg != nullptr, "twl_run_coeffs: cfg is NULL")) return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        std::ostringstream log;
        CoeffsRunResult r = run_coeffs(cfg->cfg, &log);
        if (json_summary) {
            ordered_json j = {{"run", "coeffs"},
                              {"p_max", r.p_max},
                              {"n_max", r.n_max},
                              {"prime_count", r.prime_count},
                              {"cache_path", r.cache_path},
                              {"log", log.str()}};
            *json_summary = dup_string(j.dump());
        }
    });
}

twl_status twl_run_family(const twl_config* cfg, char** json_summary) {
    if (require(cfg != nullptr, "twl_run_family: cfg is NULL")) return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        FamilyRunResult r = run_family(cfg->cfg);
        if (json_summary) {
            ordered_json classes = ordered_json::array();
            for (const FamilyClass& fc : r.classes)
                classes.push_back({{"kappa", fc.kappa},
                                   {"a_mod_n0", fc.a_mod_n0},
                                   {"admissible", fc.admissible}});
            ordered_json j = {{"run", "family"},
                              {"member_count", r.records.size()},
                              {"csv_path", r.csv_path},
                              {"classes", classes}};
            *json_summary = dup_string(j.dump());
        }
    });
}

twl_status twl_run_sweep(const twl_config* cfg, char** json_summary) {
    if (require(cfg != nullptr, "twl_run_sweep: cfg is NULL")) return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        std::ostringstream log;
        SweepResult res = run_sweep(cfg->cfg, &log);
        if (json_summary) {
            ordered_json j = sweep_summary_json(res);
            j["log"] = log.str();
            *json_summary = dup_string(j.dump());
        }
    });
}

twl_status twl_run_density(const twl_config* cfg, char** json_summary) {
    if (require(cfg != nullptr, "twl_run_density: cfg is NULL"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        std::ostringstream log;
        DensityResult res = run_density(cfg->cfg, &log);
        if (json_summary) {
            ordered_json rows = ordered_json::array();
            for (size_t i = 0; i < res.ells.size(); ++i)
                rows.push_back({{"ell", res.ells[i]},
                                {"empirical", res.empirical[i]},
                                {"predicted", num_or_null(res.predicted[i])},
                                {"ratio", num_or_null(res.ratio[i])}});
            ordered_json j = {{"run", "density"},
                              {"X", res.X},
                              {"L", res.L_used},
                              {"sample_size", res.sample_size},
                              {"admissible_classes", res.num_admissible_classes},
                              {"averages", rows},
                              {"log", log.str()}};
            *json_summary = dup_string(j.dump());
        }
    });
}

twl_status twl_run_moments(const twl_config* cfg, char** json_summary) {
    if (require(cfg != nullptr, "twl_run_moments: cfg is NULL"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        std::ostringstream log;
        MomentsResult res = run_moments(cfg->cfg, &log);
        if (json_summary) {
            auto mj = [](const MomentReport& m) {
                return ordered_json{{"X", m.X},
                                    {"x", m.x},
                                    {"k_max", m.k_max},
                                    {"sample_size", m.sample_size},
                                    {"empirical", m.empirical},
                                    {"gaussian", m.gaussian}};
            };
            ordered_json per_class = ordered_json::array();
            for (const auto& [fc, rep] : res.per_class_plain)
                per_class.push_back({{"kappa", fc.kappa},
                                     {"a_mod_n0", fc.a_mod_n0},
                                     {"sample_size", rep.sample_size},
                                     {"empirical", rep.empirical}});
            ordered_json j = {{"run", "moments"},
                              {"plain", mj(res.pooled_plain)},
                              {"weighted", mj(res.pooled_weighted)},
                              {"per_class_plain", per_class},
                              {"log", log.str()}};
            *json_summary = dup_string(j.dump());
        }
    });
}

twl_status twl_run_report(const twl_config* cfg, const char* csv_path,
                          char** json_summary) {
    if (require(cfg && csv_path, "twl_run_report: NULL argument"))
        return TWL_ERR_INVALID_ARGUMENT;
    return guard([&] {
        SweepResult res = recompute_from_csv(cfg->cfg, csv_path);
        write_reports(res, res.jsonl_path, res.text_path);
        if (json_summary) {
            ordered_json j = sweep_summary_json(res);
            j["run"] = "report";
            *json_summary = dup_string(j.dump());
        }
    });
}

void twl_string_free(char* s) { delete[] s; }

} // extern "C"
