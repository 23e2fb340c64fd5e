#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cache.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "parallel.hpp"
#include "sweep.hpp"
#include "test_function.hpp"

using namespace twistlab;

namespace {

CurveSpec curve_11a1() { return CurveSpec::make(0, -1, 1, -10, -20, 11, +1); }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp_path(const std::string& name) {
    return "harness_test_" + name;
}

} // namespace

TEST_CASE("config: parsing, overrides, round trip, validation") {
    const std::string text =
        "# experiment\n"
        "X = 500        # window parameter\n"
        "x_policy = fixed:21.5\n"
        "L_policy = paper:0.2\n"
        "alpha = -2\n"
        "beta = 2\n"
        "bad_prime_mode = exclude\n"
        "normalization = per_X\n"
        "ell_list = 1, 3, 9, 25\n"
        "window = indicator\n";
    ExperimentConfig cfg = ExperimentConfig::from_text(text);
    CHECK(cfg.X == 500.0);
    CHECK(cfg.x_policy == XPolicy::kFixed);
    CHECK(cfg.resolve_x() == 21.5);
    CHECK(cfg.L_policy == LPolicy::kPaper);
    CHECK(cfg.resolve_L() == doctest::Approx((2.0 - 0.1) * std::log(500.0)));
    CHECK(cfg.bad_prime_mode == BadPrimeMode::kExclude);
    CHECK(cfg.normalization == Normalization::kPerX);
    CHECK(cfg.ell_list == std::vector<i64>{1, 3, 9, 25});
    CHECK(cfg.window_indicator);
    cfg.validate();

    // defaults: 11a1, power(1/3)
    ExperimentConfig def;
    CHECK(def.curve().n0 == 88);
    CHECK(def.resolve_x() == doctest::Approx(std::pow(def.X, 1.0 / 3.0)));
    CHECK(def.resolve_L() == doctest::Approx(std::log(def.X)));

    // round trip through text
    ExperimentConfig again = ExperimentConfig::from_text(cfg.to_text());
    CHECK(again.to_text() == cfg.to_text());

    CHECK_THROWS_AS(ExperimentConfig::from_text("nonsense = 1\n"), input_error);
    CHECK_THROWS_AS(ExperimentConfig::from_text("X 100\n"), input_error);
    CHECK_THROWS_AS(ExperimentConfig::from_text("eps_e = 3\n"), input_error);

    ExperimentConfig bad;
    bad.alpha = 1.0;
    bad.beta = -1.0;
    CHECK_THROWS_AS(bad.validate(), input_error);
    bad = ExperimentConfig{};
    bad.X = 10;
    CHECK_THROWS_AS(bad.validate(), input_error);
    bad = ExperimentConfig{};
    bad.tail_eps = 1e-3;
    CHECK_THROWS_AS(bad.validate(), input_error);

    // get/set mirror each other
    ExperimentConfig g;
    g.set("vanish_threshold", "1e-7");
    CHECK(g.vanish_threshold == 1e-7);
    CHECK(g.get("vanish_threshold") == "1e-07");
    CHECK_THROWS_AS(g.get("no_such_key"), input_error);
}

TEST_CASE("coefficient cache: bit-exact round trip and corruption detection") {
    const CurveSpec c = curve_11a1();
    const CoefficientTable t = CoefficientTable::build(c, 2000, 500);
    const std::string path = tmp_path("cache.twl");
    save_table_cache(t, path);

    const CoefficientTable r = load_table_cache(c, path);
    CHECK(r.p_max() == t.p_max());
    CHECK(r.n_max() == t.n_max());
    REQUIRE(r.lambdas().size() == t.lambdas().size());
    for (size_t i = 0; i < t.lambdas().size(); ++i)
        REQUIRE(r.lambdas()[i] == t.lambdas()[i]); // bit-exact
    for (i64 n = 1; n <= t.n_max(); ++n)
        REQUIRE(r.an_values()[size_t(n)] == t.an_values()[size_t(n)]);
    for (i64 p : {2LL, 3LL, 11LL, 1999LL}) CHECK(r.ap_int(p) == t.ap_int(p));

    // truncation detected by the length check
    {
        std::string data = slurp(path);
        std::ofstream out(tmp_path("cache_trunc.twl"), std::ios::binary);
        out.write(data.data(), std::streamsize(data.size() - 9));
    }
    CHECK_THROWS_AS(load_table_cache(c, tmp_path("cache_trunc.twl")), format_error);

    // flipped payload byte breaks the checksum
    {
        std::string data = slurp(path);
        data[100] = char(data[100] ^ 0x5a);
        std::ofstream out(tmp_path("cache_corrupt.twl"), std::ios::binary);
        out.write(data.data(), std::streamsize(data.size()));
    }
    CHECK_THROWS_AS(load_table_cache(c, tmp_path("cache_corrupt.twl")), format_error);

    // wrong curve: hash mismatch triggers rebuild in load_or_build
    const CurveSpec other = CurveSpec::make(0, 0, 1, -1, 0, 37, -1);
    CHECK_THROWS_AS(load_table_cache(other, path), format_error);
    std::ostringstream log;
    const CoefficientTable rebuilt = load_or_build(other, 500, 100, path, {}, &log);
    CHECK(rebuilt.p_max() == 500);
    CHECK(log.str().find("rebuilding") != std::string::npos);
    // and the overwritten cache now belongs to `other`
    CHECK_THROWS_AS(load_table_cache(c, path), format_error);
    CHECK(load_table_cache(other, path).n_max() == 100);

    CHECK_THROWS_AS(load_table_cache(c, "does_not_exist.twl"), io_error);
}

TEST_CASE("gaussian mass and normal cdf") {
    CHECK(gaussian_mass(-1.0, 1.0) == doctest::Approx(0.6826894921370859).epsilon(1e-10));
    CHECK(gaussian_mass(-20.0, 20.0) == doctest::Approx(1.0).epsilon(1e-9));
    // additivity (complement identity)
    CHECK(gaussian_mass(-1.0, 1.0) + gaussian_mass(1.0, 3.0) ==
          doctest::Approx(gaussian_mass(-1.0, 3.0)).epsilon(1e-12));
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(gaussian_mass(1.0, -1.0), input_error);
}

TEST_CASE("distribution report and theorem check on synthetic rows") {
    std::vector<TwistRow> rows;
    // 6 rows in the hard window (X = 100: |d| in (100, 200]), 2 outside
    auto add = [&](i64 d, double stat, bool vanished) {
        TwistRow r;
        r.d = d;
        r.statistic = vanished ? -std::numeric_limits<double>::infinity() : stat;
        r.vanished = vanished;
        r.L_half = vanished ? 0.0 : std::exp(stat);
        rows.push_back(r);
    };
    add(101, 0.0, false);
    add(-105, 0.5, false);
    add(109, -0.5, false);
    add(113, 2.5, false);
    add(-137, 0.0, true); // vanished
    add(197, -3.0, false);
    add(21, 0.0, false);   // outside hard window
    add(-301, 0.0, false); // outside hard window

    const auto rep = distribution_report(rows, 100.0, -1.0, 1.0);
    CHECK(rep.family_size == 6);
    CHECK(rep.counts == 3); // 0.0, 0.5, -0.5
    CHECK(rep.nonvanishing_fraction == doctest::Approx(5.0 / 6.0));
    CHECK(rep.quarter_bound == doctest::Approx(0.25 * rep.gaussian_mass * 6.0));

    // counts monotone under interval inclusion
    const auto wider = distribution_report(rows, 100.0, -2.0, 2.0);
    CHECK(wider.counts >= rep.counts);

    // (-20, 20) counts every non-vanished row
    const auto full = distribution_report(rows, 100.0, -20.0, 20.0);
    CHECK(full.counts == 5);

    const auto thm = theorem_check(rep);
    CHECK(thm.pass == (rep.counts >= rep.quarter_bound));
    CHECK(thm.margin == doctest::Approx(double(rep.counts) / rep.quarter_bound));

    // counts = family_size always passes; zero counts with mass fails
    DistributionReport fake = rep;
    fake.counts = fake.family_size;
    CHECK(theorem_check(fake).pass);
    fake.counts = 0;
    CHECK_FALSE(theorem_check(fake).pass);

    // histogram: vanished lands in underflow
    const auto hist = statistic_histogram(rows, 100.0);
    CHECK(hist.counts.size() == 32);
    CHECK(hist.underflow == 1);
    i64 total = hist.underflow + hist.overflow;
    for (i64 ct : hist.counts) total += ct;
    CHECK(total == 6);
}

TEST_CASE("csv io: exact round trip including -inf") {
    std::vector<TwistRow> rows(2);
    rows[0] = {89, 1, 1, 1, 1.2345678901234567, false, 0.25, -0.125, 2.5};
    rows[1] = {-103, -1, 73, 1, 0.0, true, -std::numeric_limits<double>::infinity(), 0.5, 3.25};
    const std::string path = tmp_path("roundtrip.csv");
    write_sweep_csv(path, rows);

    const std::string text = slurp(path);
    CHECK(text.rfind("d,kappa,a_class,eps_d,L_half,vanished,statistic,P_dx,zero_weight\n", 0) == 0);
    CHECK(text.find("-inf") != std::string::npos);

    const auto back = read_sweep_csv(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].d == 89);
    CHECK(back[0].L_half == rows[0].L_half); // 17 digits round-trip doubles exactly
    CHECK(back[1].vanished);
    CHECK(std::isinf(back[1].statistic));
    CHECK(back[1].statistic < 0);
    CHECK(back[1].zero_weight == 3.25);

    std::ofstream bad(tmp_path("bad.csv"), std::ios::binary);
    bad << "wrong,header\n";
    bad.close();
    CHECK_THROWS_AS(read_sweep_csv(tmp_path("bad.csv")), format_error);
}

TEST_CASE("small sweep: determinism across thread counts, reports, recompute") {
    ExperimentConfig cfg;
    cfg.X = 200.0;
    cfg.tail_eps = 1e-10;
    cfg.cache_path = tmp_path("sweep_cache.twl");
    cfg.output_path = tmp_path("sweep1.csv");
    cfg.threads = 1;

    const SweepResult r1 = run_sweep(cfg);
    REQUIRE_FALSE(r1.rows.empty());
    CHECK(r1.family_size_window == i64(r1.rows.size()));

    cfg.output_path = tmp_path("sweep2.csv");
    cfg.threads = 2;
    const SweepResult r2 = run_sweep(cfg);
    CHECK(slurp(tmp_path("sweep1.csv")) == slurp(tmp_path("sweep2.csv"))); // byte-identical

    // reports exist and are JSON-lines
    const std::string jsonl = slurp(r2.jsonl_path);
    CHECK(jsonl.find("\"report\":\"distribution\"") != std::string::npos);
    CHECK(jsonl.find("\"report\":\"histogram\"") != std::string::npos);
    CHECK(!slurp(r2.text_path).empty());

    // offline recomputation reproduces the aggregates exactly
    const SweepResult rr = recompute_from_csv(cfg, tmp_path("sweep2.csv"));
    CHECK(rr.distribution.counts == r2.distribution.counts);
    CHECK(rr.distribution.family_size == r2.distribution.family_size);
    CHECK(rr.theorem.margin == doctest::Approx(r2.theorem.margin).epsilon(1e-12));
    CHECK(rr.moments_plain.empirical[2] ==
          doctest::Approx(r2.moments_plain.empirical[2]).epsilon(1e-12));

    // sanity of the physical rows: sorted by |d|, all eps = +1
    for (size_t i = 1; i < r1.rows.size(); ++i)
        CHECK(std::abs(r1.rows[i - 1].d) < std::abs(r1.rows[i].d));
    for (const auto& row : r1.rows) CHECK(row.eps_d == 1);
}

TEST_CASE("golden regression: X = 200 sweep rows") {
    ExperimentConfig cfg;
    cfg.X = 200.0;
    cfg.cache_path = tmp_path("sweep_cache.twl");
    cfg.output_path = tmp_path("golden.csv");
    const SweepResult r = run_sweep(cfg);
    REQUIRE(r.rows.size() == 74);

    // row 0: d = -103 is a vanished (rank >= 2) twist; P(-103; 200^{1/3}) =
    // 1/3 - 1/5 by hand (chi(3) = chi(5) = -1, lambda(3)/sqrt3 = -1/3,
    // lambda(5)/sqrt5 = 1/5)
    CHECK(r.rows[0].d == -103);
    CHECK(r.rows[0].vanished);
    CHECK(std::abs(r.rows[0].L_half) < 1e-10);
    CHECK(r.rows[0].P_dx == doctest::Approx(1.0 / 3.0 - 1.0 / 5.0).epsilon(1e-14));
    CHECK(r.rows[0].zero_weight == doctest::Approx(2.1912415127104889).epsilon(1e-9));

    CHECK(r.rows[1].d == -111);
    CHECK(r.rows[1].L_half == doctest::Approx(0.27692949126063438).epsilon(1e-9));
    CHECK(r.rows[1].P_dx == doctest::Approx(0.2).epsilon(1e-14)); // only p = 5 survives

    CHECK(r.rows.back().d == -499);
    CHECK(r.rows.back().L_half == doctest::Approx(4.7020032525483071).epsilon(1e-9));
}

TEST_CASE("empty rows: aggregates degrade gracefully") {
    const std::string path = tmp_path("empty.csv");
    write_sweep_csv(path, {});
    ExperimentConfig cfg;
    cfg.X = 200.0;
    const SweepResult rr = recompute_from_csv(cfg, path);
    CHECK(rr.rows.empty());
    CHECK(rr.distribution.counts == 0);
    CHECK(rr.theorem.pass); // 0 >= 0
    CHECK(rr.moments_plain.sample_size == 0);
}

TEST_CASE("family run writes the member csv") {
    ExperimentConfig cfg;
    cfg.X = 200.0;
    cfg.output_path = tmp_path("family.csv");
    const FamilyRunResult fr = run_family(cfg);
    CHECK_FALSE(fr.records.empty());
    const std::string text = slurp(tmp_path("family.csv"));
    CHECK(text.rfind("d,kappa,a_class,eps_d\n", 0) == 0);
    // one line per record plus header
    CHECK(std::count(text.begin(), text.end(), '\n') == i64(fr.records.size()) + 1);
    // classes cover both signs; half of the valid residues are admissible for 11a1
    int adm = 0;
    for (const auto& fc : fr.classes) adm += fc.admissible ? 1 : 0;
    CHECK(adm == 20);
    CHECK(fr.classes.size() == 40);
}

TEST_CASE("bad prime mode: exclude drops N0 terms from zero weights only") {
    ExperimentConfig cfg;
    cfg.X = 200.0;
    cfg.cache_path = tmp_path("sweep_cache.twl");
    cfg.output_path = tmp_path("sweep_excl.csv");
    cfg.bad_prime_mode = BadPrimeMode::kExclude;
    const SweepResult r_excl = run_sweep(cfg);
    cfg.bad_prime_mode = BadPrimeMode::kEuler;
    cfg.output_path = tmp_path("sweep_incl.csv");
    const SweepResult r_incl = run_sweep(cfg);
    REQUIRE(r_excl.rows.size() == r_incl.rows.size());
    bool weight_differs = false;
    for (size_t i = 0; i < r_excl.rows.size(); ++i) {
        CHECK(r_excl.rows[i].L_half == r_incl.rows[i].L_half); // AFE untouched
        CHECK(r_excl.rows[i].P_dx == r_incl.rows[i].P_dx);     // p | N0 excluded anyway
        if (r_excl.rows[i].zero_weight != r_incl.rows[i].zero_weight) weight_differs = true;
        CHECK(r_excl.rows[i].zero_weight >= -1e-4);
    }
    CHECK(weight_differs);
}

TEST_CASE("normalization per_X changes the statistic scale") {
    ExperimentConfig cfg;
    cfg.X = 200.0;
    cfg.cache_path = tmp_path("sweep_cache.twl");
    cfg.output_path = tmp_path("sweep_perx.csv");
    cfg.normalization = Normalization::kPerX;
    const SweepResult r = run_sweep(cfg);
    const double ll = std::log(std::log(200.0));
    for (const auto& row : r.rows) {
        if (row.vanished || !std::isfinite(row.statistic)) continue;
        CHECK(row.statistic ==
              doctest::Approx((std::log(row.L_half) + 0.5 * ll) / std::sqrt(ll)).epsilon(1e-12));
    }
}

TEST_CASE("threads resolution: env fallback") {
    setenv("TWISTLAB_THREADS", "3", 1);
    CHECK(resolve_threads(0) == 3);
    CHECK(resolve_threads(5) == 5);
    unsetenv("TWISTLAB_THREADS");
    CHECK(resolve_threads(0) >= 1);
}
