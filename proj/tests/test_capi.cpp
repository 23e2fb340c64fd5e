#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "twistlab.h"

namespace {

struct Curve {
    twl_curve* c = nullptr;
    Curve() { REQUIRE(twl_curve_new(0, -1, 1, -10, -20, 11, 1, &c) == TWL_OK); }
    ~Curve() { twl_curve_free(c); }
};

} // namespace

TEST_CASE("c api: version and error reporting") {
    CHECK(std::strlen(twl_version()) > 0);
    twl_curve* bad = nullptr;
    CHECK(twl_curve_new(0, 0, 0, 0, 0, 11, 1, &bad) == TWL_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(twl_last_error()) > 0);
    Curve good;
    int64_t count = 0;
    CHECK(twl_curve_count_points(good.c, 2, &count) == TWL_OK);
    CHECK(std::strlen(twl_last_error()) == 0); // cleared on success
    CHECK(count == 5);
}

TEST_CASE("c api: arithmetic surface") {
    Curve cur;
    int64_t ap = 0;
    CHECK(twl_curve_trace(cur.c, 3, &ap) == TWL_OK);
    CHECK(ap == -1);
    CHECK(twl_curve_trace(cur.c, 4, &ap) == TWL_ERR_INVALID_ARGUMENT);

    int k = 0;
    CHECK(twl_kronecker(5, 2, &k) == TWL_OK);
    CHECK(k == -1);
    CHECK(twl_is_fundamental(-3, &k) == TWL_OK);
    CHECK(k == 1);
    CHECK(twl_is_fundamental(0, &k) == TWL_ERR_INVALID_ARGUMENT);
    CHECK(twl_root_number(cur.c, 5, &k) == TWL_OK);
    CHECK(k == 1);

    double re = 0, im = 0;
    CHECK(twl_gauss_tau(0, 9, &re, &im) == TWL_OK);
    CHECK(re == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(im == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(twl_gauss_tau(1, 6, &re, &im) == TWL_ERR_INVALID_ARGUMENT);
    CHECK(twl_gauss_g(1, 3, &re, &im) == TWL_OK);

    CHECK(twl_satake(0.0, &re, &im) == TWL_OK);
    CHECK(im == doctest::Approx(1.0));
    CHECK(twl_satake(2.5, &re, &im) == TWL_ERR_DOMAIN);

    CHECK(twl_fejer(0.0) == 1.0);
    CHECK(twl_fejer_hat(0.5) == 0.5);
    CHECK(twl_digamma_re(0.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-12));

    double m = 0;
    CHECK(twl_gaussian_moment(4, &m) == TWL_OK);
    CHECK(m == 3.0);
}

TEST_CASE("c api: table, central values, zero weights") {
    Curve cur;
    twl_table* table = nullptr;
    REQUIRE(twl_table_build(cur.c, 4000, 4000, 1, 0, &table) == TWL_OK);
    CHECK(twl_table_p_max(table) == 4000);
    CHECK(twl_table_n_max(table) == 4000);

    int64_t ap = 0;
    CHECK(twl_table_ap(table, 2, &ap) == TWL_OK);
    CHECK(ap == -2);
    CHECK(twl_table_ap(table, 4001, &ap) == TWL_ERR_TABLE_RANGE);

    double v = 0;
    CHECK(twl_table_lambda(table, 3, &v) == TWL_OK);
    CHECK(v == doctest::Approx(-1.0 / std::sqrt(3.0)));
    CHECK(twl_table_an(table, 6, &v) == TWL_OK);
    CHECK(v == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(twl_table_lambda_e(table, 9, 0, &v) == TWL_OK);
    CHECK(v == doctest::Approx(-(5.0 / 3.0) * std::log(3.0)));
    CHECK(twl_table_lambda_e(table, 2, 1, &v) == TWL_OK);
    CHECK(v == 0.0); // exclude mode zeroes p | N0

    // cache through the C surface
    CHECK(twl_table_save(table, "capi_cache.twl") == TWL_OK);
    twl_table* loaded = nullptr;
    CHECK(twl_table_load(cur.c, "capi_cache.twl", &loaded) == TWL_OK);
    CHECK(twl_table_n_max(loaded) == 4000);
    twl_table_free(loaded);
    CHECK(twl_table_load(cur.c, "missing.twl", &loaded) == TWL_ERR_IO);

    double L_half = 0;
    int vanished = 0;
    int64_t terms = 0;
    CHECK(twl_central_value(cur.c, table, 37, 1e-10, 1e-6, &L_half, &vanished, &terms) ==
          TWL_OK);
    CHECK(L_half > 0.0);
    CHECK(vanished == 0);
    CHECK(terms > 0);
    // odd-sign twist: exact zero
    CHECK(twl_central_value(cur.c, table, 21, 1e-10, 1e-6, &L_half, &vanished, &terms) ==
          TWL_OK);
    CHECK(L_half == 0.0);
    CHECK(vanished == 1);
    // insufficient coverage (needs n_cut far beyond 4000)
    CHECK(twl_central_value(cur.c, table, 4001 * 8 + 5, 1e-10, 1e-6, &L_half, &vanished,
                            &terms) != TWL_OK);

    double stat = 0;
    CHECK(twl_ks_statistic(10000, 1.0, 1e-6, &stat) == TWL_OK);
    CHECK(stat == doctest::Approx(0.745038053788).epsilon(1e-9));
    CHECK(twl_ks_statistic(5, 1.0, 1e-6, &stat) == TWL_ERR_DOMAIN);

    double P = 0;
    CHECK(twl_prime_sum(cur.c, table, 5, 3.0, &P) == TWL_OK);
    CHECK(P == doctest::Approx(1.0 / 3.0)); // lambda(3)/sqrt(3) * chi_5(3)

    double w = 0, arch = 0, ps = 0;
    CHECK(twl_zero_weight(cur.c, table, 37, 4.0, 0, &w, &arch, &ps) == TWL_OK);
    CHECK(w == doctest::Approx(arch - ps));
    CHECK(w >= -1e-6);

    double rep = 0;
    CHECK(twl_repulsion_integral(cur.c, table, 37, 10.0, 0, &rep) == TWL_OK);
    CHECK(rep >= -1e-6);
    CHECK(twl_repulsion_integral(cur.c, table, 37, 500.0, 0, &rep) == TWL_ERR_COVERAGE);

    twl_table_free(table);
}

TEST_CASE("c api: config and experiment runs") {
    twl_config* cfg = nullptr;
    REQUIRE(twl_config_new(&cfg) == TWL_OK);
    CHECK(twl_config_set(cfg, "X", "200") == TWL_OK);
    CHECK(twl_config_set(cfg, "cache_path", "capi_run_cache.twl") == TWL_OK);
    CHECK(twl_config_set(cfg, "output_path", "capi_sweep.csv") == TWL_OK);
    CHECK(twl_config_set(cfg, "threads", "2") == TWL_OK);
    CHECK(twl_config_set(cfg, "no_such_key", "1") == TWL_ERR_INVALID_ARGUMENT);

    char buf[64];
    CHECK(twl_config_get(cfg, "X", buf, sizeof buf) == TWL_OK);
    CHECK(std::string(buf) == "200");
    CHECK(twl_config_get(cfg, "X", buf, 2) == TWL_ERR_INVALID_ARGUMENT);

    char* json = nullptr;
    REQUIRE(twl_run_sweep(cfg, &json) == TWL_OK);
    REQUIRE(json != nullptr);
    std::string summary(json);
    twl_string_free(json);
    CHECK(summary.find("\"run\":\"sweep\"") != std::string::npos);
    CHECK(summary.find("\"family_size_window\"") != std::string::npos);

    // the CSV written by the run feeds the offline report
    json = nullptr;
    REQUIRE(twl_run_report(cfg, "capi_sweep.csv", &json) == TWL_OK);
    std::string report(json);
    twl_string_free(json);
    CHECK(report.find("\"run\":\"report\"") != std::string::npos);

    json = nullptr;
    REQUIRE(twl_run_family(cfg, &json) == TWL_OK);
    std::string family(json);
    twl_string_free(json);
    CHECK(family.find("\"classes\"") != std::string::npos);

    // density and moments on a small family
    CHECK(twl_config_set(cfg, "ell_list", "1,9") == TWL_OK);
    json = nullptr;
    REQUIRE(twl_run_density(cfg, &json) == TWL_OK);
    std::string density(json);
    twl_string_free(json);
    CHECK(density.find("\"averages\"") != std::string::npos);

    json = nullptr;
    REQUIRE(twl_run_moments(cfg, &json) == TWL_OK);
    std::string moments(json);
    twl_string_free(json);
    CHECK(moments.find("\"weighted\"") != std::string::npos);

    json = nullptr;
    REQUIRE(twl_run_coeffs(cfg, &json) == TWL_OK);
    std::string coeffs(json);
    twl_string_free(json);
    CHECK(coeffs.find("\"prime_count\"") != std::string::npos);

    twl_config_free(cfg);
}
