// twist — CLI front end for the twistlab shared library (C API only).
//
// Subcommands: coeffs, family, sweep, density, moments, report.
// Every configuration key is mirrored as a flag (underscores become
// dashes); --config loads a key=value file first, flags override it.

#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "twistlab.h"

namespace {

struct ConfigHandle {
    twl_config* cfg = nullptr;
    ~ConfigHandle() { twl_config_free(cfg); }
};

const char* const kKeys[] = {
    "a1", "a2", "a3", "a4", "a6", "conductor", "eps_e", "X", "x_policy", "L_policy",
    "k_max", "alpha", "beta", "tail_eps", "vanish_threshold", "bad_prime_mode",
    "normalization", "threads", "cache_path", "output_path", "bsgs_threshold",
    "p_max", "n_max", "window", "ell_list"};

struct SubcommandState {
    std::string config_path;
    // key -> (value, was set)
    std::vector<std::pair<std::string, std::string>> overrides;
    std::vector<std::unique_ptr<std::string>> storage;
};

void add_config_flags(CLI::App* cmd, SubcommandState& st) {
    cmd->add_option("--config", st.config_path, "key = value configuration file");
    for (const char* key : kKeys) {
        std::string flag = "--";
        for (const char* c = key; *c; ++c) flag += (*c == '_') ? '-' : *c;
        auto* slot = st.storage.emplace_back(std::make_unique<std::string>()).get();
        std::string k = key;
        cmd->add_option_function<std::string>(
            flag,
            [&st, k](const std::string& v) { st.overrides.emplace_back(k, v); },
            std::string("config key ") + key);
        (void)slot;
    }
}

int fail_status(twl_status rc, const char* where) {
    std::fprintf(stderr, "twist: %s failed (%d): %s\n", where, int(rc), twl_last_error());
    return int(rc);
}

int build_config(const SubcommandState& st, ConfigHandle& out) {
    twl_status rc = st.config_path.empty() ? twl_config_new(&out.cfg)
                                           : twl_config_load(st.config_path.c_str(), &out.cfg);
    if (rc != TWL_OK) return fail_status(rc, "config load");
    for (const auto& [key, value] : st.overrides) {
        rc = twl_config_set(out.cfg, key.c_str(), value.c_str());
        if (rc != TWL_OK) return fail_status(rc, ("--" + key).c_str());
    }
    return 0;
}

int run_and_print(twl_status (*runner)(const twl_config*, char**), const twl_config* cfg,
                  const char* name) {
    char* json = nullptr;
    twl_status rc = runner(cfg, &json);
    if (rc != TWL_OK) return fail_status(rc, name);
    if (json) {
        std::printf("%s\n", json);
        twl_string_free(json);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"twistlab: quadratic twist L-value experiments"};
    app.require_subcommand(1);

    SubcommandState st_coeffs, st_family, st_sweep, st_density, st_moments, st_report;
    std::string report_csv;

    CLI::App* coeffs = app.add_subcommand("coeffs", "build or refresh the coefficient cache");
    add_config_flags(coeffs, st_coeffs);
    CLI::App* family = app.add_subcommand("family", "enumerate the twist family and classes");
    add_config_flags(family, st_family);
    CLI::App* sweep = app.add_subcommand("sweep", "full per-discriminant run with reports");
    add_config_flags(sweep, st_sweep);
    CLI::App* density = app.add_subcommand("density", "one-level density averages over an ell-list");
    add_config_flags(density, st_density);
    CLI::App* moments = app.add_subcommand("moments", "prime-sum moments, plain and weighted");
    add_config_flags(moments, st_moments);
    CLI::App* report = app.add_subcommand("report", "recompute aggregates from an existing CSV");
    add_config_flags(report, st_report);
    report->add_option("--csv", report_csv, "sweep CSV to recompute from")->required();

    CLI11_PARSE(app, argc, argv);

    ConfigHandle cfg;
    if (coeffs->parsed()) {
        if (int rc = build_config(st_coeffs, cfg)) return rc;
        return run_and_print(twl_run_coeffs, cfg.cfg, "coeffs");
    }
    if (family->parsed()) {
        if (int rc = build_config(st_family, cfg)) return rc;
        return run_and_print(twl_run_family, cfg.cfg, "family");
    }
    if (sweep->parsed()) {
        if (int rc = build_config(st_sweep, cfg)) return rc;
        return run_and_print(twl_run_sweep, cfg.cfg, "sweep");
    }
    if (density->parsed()) {
        if (int rc = build_config(st_density, cfg)) return rc;
        return run_and_print(twl_run_density, cfg.cfg, "density");
    }
    if (moments->parsed()) {
        if (int rc = build_config(st_moments, cfg)) return rc;
        return run_and_print(twl_run_moments, cfg.cfg, "moments");
    }
    if (report->parsed()) {
        if (int rc = build_config(st_report, cfg)) return rc;
        char* json = nullptr;
        twl_status rc = twl_run_report(cfg.cfg, report_csv.c_str(), &json);
        if (rc != TWL_OK) return fail_status(rc, "report");
        if (json) {
            std::printf("%s\n", json);
            twl_string_free(json);
        }
        return 0;
    }
    return 1;
}
