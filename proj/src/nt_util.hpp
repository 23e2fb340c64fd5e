#ifndef TWISTLAB_NT_UTIL_HPP
#define TWISTLAB_NT_UTIL_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace twistlab {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128_t;
using u128 = __uint128_t;

// ----------------------------------------------------------------------
// Prime sieves
// ----------------------------------------------------------------------

// All primes <= limit, ascending.
std::vector<i64> sieve_primes(i64 limit);

// Smallest prime factor for 0..limit (spf[0] = spf[1] = 0).
std::vector<std::uint32_t> sieve_spf(i64 limit);

// Deterministic Miller-Rabin, valid for all n < 3.3e24 with the fixed base set.
bool is_prime(i64 n);

// ----------------------------------------------------------------------
// Modular arithmetic (moduli < 2^62)
// ----------------------------------------------------------------------

inline u64 mulmod(u64 a, u64 b, u64 m) { return u64((u128)a * b % m); }

u64 powmod(u64 base, u64 exp, u64 m);

// Inverse of a mod m, gcd(a, m) = 1 required.
u64 invmod(u64 a, u64 m);

// Legendre symbol (a/p) for odd prime p, in {-1, 0, 1}.
int legendre(i64 a, i64 p);

// Square root of a mod odd prime p (Tonelli-Shanks); a must be a QR.
u64 sqrtmod(u64 a, u64 p);

inline i64 gcd_i64(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) { i64 t = a % b; a = b; b = t; }
    return a;
}

// ----------------------------------------------------------------------
// Deterministic RNG (splitmix64) — seeded per use site, never global
// ----------------------------------------------------------------------

struct SplitMix64 {
    u64 state;
    explicit SplitMix64(u64 seed) : state(seed) {}
    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    u64 below(u64 n) { return next() % n; }
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }
};

// ----------------------------------------------------------------------
// Deterministic reductions
// ----------------------------------------------------------------------

// Fixed-order pairwise summation tree; result independent of thread count
// because it always runs over the gathered array in index order.
double pairwise_sum(std::span<const double> v);

// Kahan compensated accumulator for long fixed-order sums.
struct KahanSum {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

} // namespace twistlab

#endif
