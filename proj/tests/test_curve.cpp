#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "curve.hpp"
#include "errors.hpp"
#include "oracles.hpp"

using namespace twistlab;

namespace {

CurveSpec curve_11a1() { return CurveSpec::make(0, -1, 1, -10, -20, 11, +1); }
CurveSpec curve_37a1() { return CurveSpec::make(0, 0, 1, -1, 0, 37, -1); }

const CoefficientTable& table_11a1() {
    static CoefficientTable t = [] {
        BuildOptions opts;
        opts.point_count.bsgs_threshold = 2000;
        return CoefficientTable::build(curve_11a1(), 100'000, 20'000, opts);
    }();
    return t;
}

} // namespace

TEST_CASE("curve spec: invariants and discriminant") {
    CurveSpec c = curve_11a1();
    CHECK(c.n0 == 88);
    CHECK(c.n0 % 8 == 0);
    CHECK(c.n0 % c.conductor == 0);
    CHECK(i64(c.discriminant()) == -161051); // -11^5
    CHECK_THROWS_AS(CurveSpec::make(0, 0, 0, 0, 0, 11, 1), input_error);   // singular
    CHECK_THROWS_AS(CurveSpec::make(0, -1, 1, -10, -20, 11, 2), input_error);
    CHECK_THROWS_AS(CurveSpec::make(0, -1, 1, -10, -20, 0, 1), input_error);
}

TEST_CASE("point counts match exhaustive enumeration") {
    CurveSpec c = curve_11a1();
    CHECK(count_points_mod_p(c, 2) == 5); // a_2 = -2
    CHECK(count_points_mod_p(c, 3) == 5); // a_3 = -1
    CHECK(trace_of_frobenius(c, 2) == -2);
    CHECK(trace_of_frobenius(c, 3) == -1);
    CHECK_THROWS_AS(count_points_mod_p(c, 4), input_error);

    // enumeration oracle across both small-p and residue-table paths,
    // including the bad prime 11 (nonsingular count)
    for (i64 p : sieve_primes(240)) {
        CAPTURE(p);
        CHECK(count_points_mod_p(c, p) == oracle::count_points_naive(c, p));
        CHECK(count_points_mod_p(c, p) >= 1);
    }
    // split multiplicative reduction at 11: a_11 = +1
    CHECK(trace_of_frobenius(c, 11) == 1);

    CurveSpec c37 = curve_37a1();
    for (i64 p : sieve_primes(150)) {
        CAPTURE(p);
        CHECK(count_points_mod_p(c37, p) == oracle::count_points_naive(c37, p));
    }
    // nonsplit multiplicative at 37: the node's tangent slopes need sqrt(15),
    // a non-residue mod 37, so #E_ns = 38 and a_37 = -1
    CHECK(trace_of_frobenius(c37, 37) == -1);
}

TEST_CASE("baby-step/giant-step counting agrees with the residue table") {
    PointCountOptions bsgs;
    bsgs.bsgs_threshold = 101;
    for (CurveSpec c : {curve_11a1(), curve_37a1()}) {
        for (i64 p : sieve_primes(3000)) {
            if (p < 101 || c.conductor % p == 0) continue;
            CAPTURE(p);
            CHECK(count_points_mod_p(c, p, bsgs) == count_points_mod_p(c, p));
        }
    }
    // sampled large primes up to 1e6 (the BSGS regime of the big tables)
    const CurveSpec c = curve_11a1();
    SplitMix64 rng(97);
    int checked = 0;
    while (checked < 50) {
        i64 n = 20'000 + i64(rng.below(980'000));
        while (!is_prime(n)) ++n;
        CAPTURE(n);
        REQUIRE(count_points_mod_p(c, n, bsgs) == count_points_mod_p(c, n));
        ++checked;
    }
}

TEST_CASE("Hasse bound holds exactly for all sieved good primes") {
    const CoefficientTable& t = table_11a1();
    for (size_t i = 0; i < t.primes().size(); ++i) {
        const i64 p = t.primes()[i];
        const i64 ap = t.ap_int(p);
        if (p == 11) {
            CHECK(ap == 1);
            continue;
        }
        REQUIRE(i128(ap) * ap <= 4 * i128(p));
    }
}

TEST_CASE("normalized coefficients lambda(p)") {
    const CoefficientTable& t = table_11a1();
    CHECK(t.lambda(2) == doctest::Approx(-2.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(t.lambda(3) == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(t.lambda(11) == doctest::Approx(1.0 / std::sqrt(11.0)).epsilon(1e-12));
    for (i64 p : {5LL, 7LL, 13LL, 9973LL})
        CHECK(std::abs(t.lambda(p)) <= 2.0); // Hasse restated
    CHECK_THROWS_AS(t.lambda(1'000'003), table_range_error);
    CHECK_THROWS_AS(t.ap_int(6), table_range_error);
}

TEST_CASE("satake parameters") {
    CHECK(satake(2.0) == std::complex<double>(1.0, 0.0));
    CHECK(satake(0.0).real() == doctest::Approx(0.0));
    CHECK(satake(0.0).imag() == doctest::Approx(1.0));
    const auto a = satake(-1.0 / std::sqrt(3.0));
    CHECK(a.real() == doctest::Approx(-0.28867513459481287).epsilon(1e-10));
    CHECK(a.imag() == doctest::Approx(0.957427107756338).epsilon(1e-10));
    SplitMix64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const double lam = 4.0 * rng.uniform01() - 2.0;
        const auto al = satake(lam);
        CHECK(std::abs(std::abs(al) - 1.0) < 1e-12);
        CHECK(al.real() * 2.0 == doctest::Approx(lam).epsilon(1e-12));
    }
    CHECK_THROWS_AS(satake(2.1), domain_error);
}

TEST_CASE("von Mangoldt values Lambda_E") {
    const CoefficientTable& t = table_11a1();
    CHECK(t.lambda_e(6) == 0.0);  // not a prime power
    CHECK(t.lambda_e(1) == 0.0);
    CHECK(t.lambda_e(64) == doctest::Approx(t.lambda_e_prime_power(2, 6, BadPrimeMode::kEuler)));
    // Lambda_E(9) = (lambda(3)^2 - 2) log 3 = -(5/3) log 3
    CHECK(t.lambda_e(9) == doctest::Approx(-(5.0 / 3.0) * std::log(3.0)).epsilon(1e-12));
    // |Lambda_E(p^k)| <= 2 log p at good primes
    SplitMix64 rng(11);
    const auto& primes = t.primes();
    for (int i = 0; i < 300; ++i) {
        const i64 p = primes[rng.below(primes.size())];
        if (p == 11) continue;
        const int k = 1 + int(rng.below(5));
        i64 pk = 1;
        bool fits = true;
        for (int j = 0; j < k; ++j) {
            if (pk > t.p_max() / p) { fits = false; break; }
            pk *= p;
        }
        if (!fits) continue;
        CHECK(std::abs(t.lambda_e(pk)) <= 2.0 * std::log(double(p)) + 1e-12);
    }
    // Lambda_E(p^2) = (lambda^2 - 2) log p, cross-checked against Satake powers
    for (int i = 0; i < 100; ++i) {
        const i64 p = primes[2 + rng.below(100)];
        if (p == 11) continue;
        const double lam = t.lambda(p);
        const auto alpha = satake(lam);
        const double via_satake = 2.0 * std::pow(alpha, 2).real() * std::log(double(p));
        CHECK(t.lambda_e(p * p) == doctest::Approx(via_satake).epsilon(1e-10));
        CHECK(t.lambda_e(p * p) ==
              doctest::Approx((lam * lam - 2.0) * std::log(double(p))).epsilon(1e-10));
    }
    // bad prime (11 | N): degree-one Euler factor; exclude mode zeroes p | N0
    CHECK(t.lambda_e(11) == doctest::Approx(t.lambda(11) * std::log(11.0)));
    CHECK(t.lambda_e(121) == doctest::Approx(std::pow(t.lambda(11), 2) * std::log(11.0)));
    CHECK(t.lambda_e(11, BadPrimeMode::kExclude) == 0.0);
    CHECK(t.lambda_e(2, BadPrimeMode::kExclude) == 0.0); // 2 | N0 though 2 is good
    CHECK(t.lambda_e(2) == doctest::Approx(t.lambda(2) * std::log(2.0)));
}

TEST_CASE("Hecke coefficient table a(n)") {
    const CoefficientTable& t = table_11a1();
    CHECK(t.an(1) == 1.0);
    CHECK(t.an(4) == doctest::Approx(1.0).epsilon(1e-12));             // lambda(2)^2 - 1
    CHECK(t.an(6) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12)); // lambda(2) lambda(3)
    // Hecke recurrence at prime cubes
    for (i64 p : {2LL, 3LL, 5LL, 7LL, 13LL}) {
        CAPTURE(p);
        CHECK(t.an(p * p * p) ==
              doctest::Approx(t.lambda(p) * t.an(p * p) - t.an(p)).epsilon(1e-12));
    }
    // bad prime: an(11^k) = lambda(11)^k
    CHECK(t.an(121) == doctest::Approx(std::pow(t.lambda(11), 2)).epsilon(1e-12));

    // multiplicativity on 500 random coprime pairs
    SplitMix64 rng(13);
    int done = 0;
    while (done < 500) {
        const i64 m = 2 + i64(rng.below(140));
        const i64 n = 2 + i64(rng.below(140));
        if (gcd_i64(m, n) != 1 || m * n > t.n_max()) continue;
        CHECK(t.an(m * n) == doctest::Approx(t.an(m) * t.an(n)).epsilon(1e-12));
        ++done;
    }

    // divisor bound |a(n)| <= d(n)
    const auto dcounts = oracle::divisor_counts(t.n_max());
    for (i64 n = 1; n <= t.n_max(); ++n) {
        if (std::abs(t.an(n)) > double(dcounts[size_t(n)]) + 1e-9) {
            CAPTURE(n);
            REQUIRE(false);
        }
    }
    CHECK(std::abs(t.an(t.n_max())) <= double(dcounts.back()) + 1e-9);

    CHECK_THROWS_AS(t.an(t.n_max() + 1), table_range_error);
    CHECK_THROWS_AS(CoefficientTable::build(curve_11a1(), 2, 30'000'000), input_error);
}

TEST_CASE("Rankin-Selberg drift: S(y) tracks -log y") {
    const CoefficientTable& t = table_11a1();
    const CurveSpec c = curve_11a1();
    // S(y) = sum_{p <= y, p not | N0} (lambda^2 - 2) log p / p
    std::vector<double> ys = {1e2, 1e3, 1e4, 1e5};
    std::vector<double> s(ys.size(), 0.0);
    {
        double acc = 0.0;
        size_t yi = 0;
        for (size_t i = 0; i < t.primes().size() && yi < ys.size(); ++i) {
            const i64 p = t.primes()[i];
            while (yi < ys.size() && double(p) > ys[yi]) s[yi++] = acc;
            if (yi >= ys.size()) break;
            if (c.n0 % p == 0) continue;
            const double lam = t.lambdas()[i];
            acc += (lam * lam - 2.0) * std::log(double(p)) / double(p);
        }
        while (yi < ys.size()) s[yi++] = acc;
    }
    double max_dev = 0.0;
    for (size_t i = 0; i < ys.size(); ++i)
        max_dev = std::max(max_dev, std::abs(s[i] + std::log(ys[i])));
    MESSAGE("max |S(y) + log y| = ", max_dev); // empirical O(1) constant, reported
    CHECK(max_dev < 5.0);

    // OLS slope of S(y) against -log y must be near 1
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(ys.size());
    for (size_t i = 0; i < ys.size(); ++i) {
        const double x = -std::log(ys[i]);
        sx += x; sy += s[i]; sxx += x * x; sxy += x * s[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    MESSAGE("RS slope = ", slope);
    CHECK(slope > 0.8);
    CHECK(slope < 1.2);
}
