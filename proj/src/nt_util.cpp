#include "nt_util.hpp"

#include <cstddef>
#include <stdexcept>

namespace twistlab {

std::vector<i64> sieve_primes(i64 limit) {
    std::vector<i64> primes;
    if (limit < 2) return primes;
    std::vector<bool> comp(size_t(limit) + 1, false);
    for (i64 i = 2; i * i <= limit; ++i)
        if (!comp[size_t(i)])
            for (i64 j = i * i; j <= limit; j += i) comp[size_t(j)] = true;
    for (i64 i = 2; i <= limit; ++i)
        if (!comp[size_t(i)]) primes.push_back(i);
    return primes;
}

std::vector<std::uint32_t> sieve_spf(i64 limit) {
    if (limit > 0xFFFFFFFFLL) throw std::invalid_argument("sieve_spf: limit too large");
    std::vector<std::uint32_t> spf(size_t(limit) + 1, 0);
    for (i64 i = 2; i <= limit; ++i) {
        if (spf[size_t(i)] == 0) {
            for (i64 j = i; j <= limit; j += i)
                if (spf[size_t(j)] == 0) spf[size_t(j)] = std::uint32_t(i);
        }
    }
    return spf;
}

u64 powmod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    u64 d = u64(n - 1);
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = powmod(a, d, u64(n));
        if (x == 1 || x == u64(n - 1)) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, u64(n));
            if (x == u64(n - 1)) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

u64 invmod(u64 a, u64 m) {
    i64 t = 0, newt = 1;
    i64 r = i64(m), newr = i64(a % m);
    while (newr != 0) {
        i64 q = r / newr;
        i64 tmp = t - q * newt; t = newt; newt = tmp;
        tmp = r - q * newr; r = newr; newr = tmp;
    }
    if (r != 1) throw std::invalid_argument("invmod: not invertible");
    if (t < 0) t += i64(m);
    return u64(t);
}

int legendre(i64 a, i64 p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    u64 r = powmod(u64(a), u64((p - 1) / 2), u64(p));
    return r == 1 ? 1 : -1;
}

u64 sqrtmod(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    if (p == 2) return a;
    if (powmod(a, (p - 1) / 2, p) != 1) throw std::invalid_argument("sqrtmod: not a residue");
    if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
    // Tonelli-Shanks
    u64 q = p - 1;
    int s = 0;
    while ((q & 1) == 0) { q >>= 1; ++s; }
    u64 z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    u64 m = u64(s), c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        u64 t2 = t;
        u64 i = 0;
        while (t2 != 1) { t2 = mulmod(t2, t2, p); ++i; }
        u64 b = powmod(c, u64(1) << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

double pairwise_sum(std::span<const double> v) {
    const size_t n = v.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const size_t half = n / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

} // namespace twistlab
