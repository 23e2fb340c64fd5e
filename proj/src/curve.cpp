#include "curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "errors.hpp"
#include "parallel.hpp"

namespace twistlab {

// ----------------------------------------------------------------------
// CurveSpec
// ----------------------------------------------------------------------

CurveSpec CurveSpec::make(i64 a1, i64 a2, i64 a3, i64 a4, i64 a6,
                          i64 conductor, int eps_e) {
    CurveSpec c;
    c.a1 = a1; c.a2 = a2; c.a3 = a3; c.a4 = a4; c.a6 = a6;
    c.conductor = conductor;
    c.eps_e = eps_e;
    if (conductor < 1) throw input_error("CurveSpec: conductor must be positive");
    if (eps_e != 1 && eps_e != -1) throw input_error("CurveSpec: eps_e must be +-1");
    if (c.discriminant() == 0) throw input_error("CurveSpec: singular Weierstrass model");
    i64 g = gcd_i64(8, conductor);
    c.n0 = 8 / g * conductor;
    return c;
}

i128 CurveSpec::discriminant() const {
    const i128 B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
}

std::array<unsigned char, 32> CurveSpec::hash() const {
    // Four FNV-1a-64 lanes with distinct offsets over the LE serialization
    // of (a1, a2, a3, a4, a6, N).  Integrity keying, not cryptographic.
    unsigned char buf[48];
    const i64 vals[6] = {a1, a2, a3, a4, a6, conductor};
    for (int i = 0; i < 6; ++i) {
        u64 v = u64(vals[i]);
        for (int b = 0; b < 8; ++b) buf[i * 8 + b] = (unsigned char)(v >> (8 * b));
    }
    std::array<unsigned char, 32> out{};
    for (int lane = 0; lane < 4; ++lane) {
        u64 h = 0xcbf29ce484222325ULL ^ (0x9e3779b97f4a7c15ULL * u64(lane + 1));
        for (unsigned char byte : buf) {
            h ^= byte;
            h *= 0x100000001b3ULL;
        }
        for (int b = 0; b < 8; ++b) out[size_t(lane * 8 + b)] = (unsigned char)(h >> (8 * b));
    }
    return out;
}

// ----------------------------------------------------------------------
// Point counting
// ----------------------------------------------------------------------

namespace {

i64 mod_pos(i64 a, i64 p) {
    i64 r = a % p;
    return r < 0 ? r + p : r;
}

// Full affine enumeration with the original model; excludes singular
// points.  Used for p < 100 and always for p = 2, 3.
i64 count_enumerate(const CurveSpec& c, i64 p) {
    const i64 a1 = mod_pos(c.a1, p), a2 = mod_pos(c.a2, p), a3 = mod_pos(c.a3, p),
              a4 = mod_pos(c.a4, p), a6 = mod_pos(c.a6, p);
    i64 count = 1; // infinity
    for (i64 x = 0; x < p; ++x) {
        const i64 rhs = mod_pos(x * x * x + a2 * x * x + a4 * x + a6, p);
        for (i64 y = 0; y < p; ++y) {
            const i64 lhs = mod_pos(y * y + a1 * x * y + a3 * y, p);
            if (lhs != rhs) continue;
            // singular iff both partials vanish
            const i64 dgy = mod_pos(2 * y + a1 * x + a3, p);
            const i64 dgx = mod_pos(a1 * y - 3 * x * x - 2 * a2 * x - a4, p);
            if (dgy == 0 && dgx == 0) {
                if (c.conductor % p != 0)
                    throw input_error("count_points_mod_p: singular reduction at a good prime (non-minimal model?)");
                continue; // singular point, not in E_ns
            }
            ++count;
        }
    }
    return count;
}

// Completed-square count for odd p: y'^2 = f(x) = 4x^3 + b2 x^2 + 2 b4 x + b6.
// #points = 1 + p + sum_x chi(f(x)) - #{x: f(x)=f'(x)=0}.
i64 count_qr_table(const CurveSpec& c, i64 p) {
    const u64 up = u64(p);
    const u64 B2 = u64(mod_pos(c.b2(), p)), B4 = u64(mod_pos(c.b4(), p)),
              B6 = u64(mod_pos(c.b6(), p));
    std::vector<signed char> chi(size_t(p), -1);
    chi[0] = 0;
    for (u64 u = 1; u <= up / 2; ++u) chi[size_t(mulmod(u, u, up))] = 1;

    i64 sum = 0, singular = 0;
    for (u64 x = 0; x < up; ++x) {
        // Horner in u128: f = ((4x + b2)x + 2b4)x + b6 mod p
        u128 acc = (u128)(4 * x % up + B2) * x % up;
        acc = (acc + 2 * B4 % up) * x % up;
        u64 f = u64((acc + B6) % up);
        if (f == 0) {
            // f'(x) = (12x + 2b2)x + 2b4
            u128 d = (u128)(12 * x % up + 2 * B2 % up) * x % up;
            u64 fp = u64((d + 2 * B4 % up) % up);
            if (fp == 0) {
                if (c.conductor % p != 0)
                    throw input_error("count_points_mod_p: singular reduction at a good prime (non-minimal model?)");
                ++singular;
                continue;
            }
        }
        sum += chi[size_t(f)];
    }
    return 1 + p + sum - singular;
}

// ---- Shanks-Mestre order finding on the short model y^2 = x^3 + Ax + B ----

struct EcPoint {
    u64 x = 0, y = 0;
    bool inf = true;
};

struct EcCurve {
    u64 p, A, B;

    EcPoint add(const EcPoint& P, const EcPoint& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        if (P.x == Q.x) {
            if ((P.y + Q.y) % p == 0) return {}; // vertical
            return dbl(P);
        }
        u64 num = (Q.y + p - P.y) % p;
        u64 den = (Q.x + p - P.x) % p;
        u64 s = mulmod(num, invmod(den, p), p);
        u64 x3 = (mulmod(s, s, p) + 2 * p - P.x - Q.x) % p;
        u64 y3 = (mulmod(s, (P.x + p - x3) % p, p) + p - P.y) % p;
        return {x3, y3, false};
    }

    EcPoint dbl(const EcPoint& P) const {
        if (P.inf || P.y == 0) return {};
        u64 num = (mulmod(3, mulmod(P.x, P.x, p), p) + A) % p;
        u64 s = mulmod(num, invmod(2 * P.y % p, p), p);
        u64 x3 = (mulmod(s, s, p) + 2 * p - 2 * P.x % p) % p;
        u64 y3 = (mulmod(s, (P.x + p - x3) % p, p) + p - P.y) % p;
        return {x3, y3, false};
    }

    EcPoint mul(u64 k, EcPoint P) const {
        EcPoint R;
        while (k) {
            if (k & 1) R = add(R, P);
            P = dbl(P);
            k >>= 1;
        }
        return R;
    }
};

// All group-order candidates consistent with one random point: the set
// {n in [lo, hi] : nP = O} via baby-step/giant-step over the Hasse window.
std::vector<i64> order_candidates(const EcCurve& E, const EcPoint& P, i64 lo, i64 hi) {
    const i64 width = hi - lo + 1;
    const i64 m = i64(std::ceil(std::sqrt(double(width))));

    // baby steps: j -> jP for j in [0, m)
    std::unordered_map<u64, std::vector<std::pair<u64, i64>>> baby;
    baby.reserve(size_t(m) * 2);
    EcPoint J; // 0P
    for (i64 j = 0; j < m; ++j) {
        if (j > 0 && J.inf) {
            // ord(P) = j < m: candidates are multiples of j in window
            std::vector<i64> cands;
            i64 ord = j;
            for (i64 n = ((lo + ord - 1) / ord) * ord; n <= hi; n += ord) cands.push_back(n);
            return cands;
        }
        if (!J.inf) baby[J.x].push_back({J.y, j});
        J = E.add(J, P);
    }

    EcPoint G = E.mul(u64(m), P);
    EcPoint R = E.mul(u64(lo), P);
    std::vector<i64> ts;
    for (i64 i = 0; i * m <= (hi - lo) + m; ++i) {
        if (R.inf) ts.push_back(i * m); // t = i*m + 0
        else {
            auto it = baby.find(R.x);
            if (it != baby.end()) {
                for (auto [yj, j] : it->second) {
                    if (R.y == (E.p - yj) % E.p) ts.push_back(i * m + j); // R = -jP
                    if (R.y == yj && j != 0) ts.push_back(i * m - j);    // R = +jP
                }
            }
        }
        R = E.add(R, G);
    }
    std::vector<i64> cands;
    for (i64 t : ts) {
        i64 n = lo + t;
        if (n >= lo && n <= hi) cands.push_back(n);
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    return cands;
}

// Returns #E(F_p) or -1 when the candidate order stays ambiguous (caller
// falls back to the O(p) count).
i64 count_bsgs(const CurveSpec& c, i64 p) {
    const u64 up = u64(p);
    const i128 disc = c.discriminant();
    if (i64(disc % p) == 0) return -1; // good p but non-minimal model; let fallback report
    // short model via c4, c6 (valid for p >= 5): y^2 = x^3 - 27 c4 x - 54 c6
    const i128 B2 = c.b2(), B4 = c.b4(), B6 = c.b6();
    const i128 c4 = B2 * B2 - 24 * B4;
    const i128 c6 = -B2 * B2 * B2 + 36 * B2 * B4 - 216 * B6;
    auto mod_p = [&](i128 v) {
        i64 r = i64(v % p);
        return u64(r < 0 ? r + p : r);
    };
    EcCurve E{up, mod_p(-27 * c4), mod_p(-54 * c6)};

    const i64 hasse = i64(std::floor(2.0 * std::sqrt(double(p))));
    i64 lo = p + 1 - hasse, hi = p + 1 + hasse;
    // guard against rounding at the window edge
    while (i128(lo - 1) * (lo - 1) > 0 && i128(p + 1 - (lo - 1)) * (p + 1 - (lo - 1)) <= 4 * i128(p)) --lo;
    while (i128(hi + 1 - (p + 1)) * (hi + 1 - (p + 1)) <= 4 * i128(p)) ++hi;

    SplitMix64 rng(u64(p) * 0x9e3779b97f4a7c15ULL + 1);
    std::vector<i64> cands;
    for (int tries = 0; tries < 12; ++tries) {
        // random point
        EcPoint P;
        for (int k = 0; k < 256; ++k) {
            u64 x = rng.below(up);
            u64 t = (mulmod(mulmod(x, x, up), x, up) + mulmod(E.A, x, up) + E.B) % up;
            if (t == 0) { P = {x, 0, false}; break; }
            if (legendre(i64(t), p) == 1) { P = {x, sqrtmod(t, up), false}; break; }
        }
        if (P.inf) continue;
        std::vector<i64> cp = order_candidates(E, P, lo, hi);
        if (cands.empty()) {
            cands = cp;
        } else {
            std::vector<i64> both;
            std::set_intersection(cands.begin(), cands.end(), cp.begin(), cp.end(),
                                  std::back_inserter(both));
            cands = both;
        }
        if (cands.size() == 1) return cands[0];
        if (cands.empty()) return -1; // inconsistent (should not happen); fallback
    }
    return -1;
}

} // namespace

i64 count_points_mod_p(const CurveSpec& curve, i64 p, const PointCountOptions& opts) {
    if (!is_prime(p)) throw input_error("count_points_mod_p: p is not prime");
    if (p < 100) return count_enumerate(curve, p);
    if (opts.bsgs_threshold > 0 && p >= opts.bsgs_threshold && curve.conductor % p != 0) {
        i64 n = count_bsgs(curve, p);
        if (n >= 0) return n;
    }
    return count_qr_table(curve, p);
}

i64 trace_of_frobenius(const CurveSpec& curve, i64 p, const PointCountOptions& opts) {
    const i64 count = count_points_mod_p(curve, p, opts);
    if (curve.conductor % p == 0) return p - count; // nonsingular count
    return p + 1 - count;
}

// ----------------------------------------------------------------------
// CoefficientTable
// ----------------------------------------------------------------------

CoefficientTable CoefficientTable::build(const CurveSpec& curve, i64 p_max, i64 n_max,
                                         const BuildOptions& opts) {
    static constexpr i64 kMaxN = 20'000'000;
    if (n_max < 1) throw input_error("CoefficientTable: n_max must be >= 1");
    if (p_max < 2) throw input_error("CoefficientTable: p_max must be >= 2");
    if (n_max > kMaxN || p_max > kMaxN)
        throw input_error("CoefficientTable: requested range exceeds the configured memory cap");

    CoefficientTable t;
    t.p_max_ = std::max(p_max, n_max); // a(n) needs lambda(p) for all p <= n_max
    t.n_max_ = n_max;
    t.conductor_ = curve.conductor;
    t.n0_ = curve.n0;
    t.hash_ = curve.hash();
    t.primes_ = sieve_primes(t.p_max_);
    t.ap_.resize(t.primes_.size());
    t.lam_.resize(t.primes_.size());

    parallel_for(t.primes_.size(), opts.threads, [&](std::size_t i) {
        const i64 p = t.primes_[i];
        const i64 ap = trace_of_frobenius(curve, p, opts.point_count);
        if (curve.conductor % p != 0) {
            if (i128(ap) * ap > 4 * i128(p))
                throw numerics_error("CoefficientTable: Hasse bound violated (point counting bug)");
        } else if (ap < -1 || ap > 1) {
            throw numerics_error("CoefficientTable: bad-prime a_p outside {-1,0,1}");
        }
        t.ap_[i] = ap;
        t.lam_[i] = double(ap) / std::sqrt(double(p));
    });

    t.index_primes();
    t.build_an(curve);
    return t;
}

CoefficientTable CoefficientTable::from_arrays(const CurveSpec& curve, i64 p_max, i64 n_max,
                                               std::vector<double> lambdas,
                                               std::vector<double> an) {
    CoefficientTable t;
    t.p_max_ = p_max;
    t.n_max_ = n_max;
    t.conductor_ = curve.conductor;
    t.n0_ = curve.n0;
    t.hash_ = curve.hash();
    t.primes_ = sieve_primes(p_max);
    if (lambdas.size() != t.primes_.size() || an.size() != size_t(n_max) + 1)
        throw format_error("CoefficientTable: array sizes inconsistent with p_max/n_max");
    t.lam_ = std::move(lambdas);
    t.an_ = std::move(an);
    t.ap_.resize(t.primes_.size());
    for (size_t i = 0; i < t.primes_.size(); ++i) {
        const i64 p = t.primes_[i];
        const i64 ap = i64(std::llround(t.lam_[i] * std::sqrt(double(p))));
        if (i128(ap) * ap > 4 * i128(p) && curve.conductor % p != 0)
            throw format_error("CoefficientTable: lambda violates Hasse on load");
        t.ap_[i] = ap;
    }
    t.index_primes();
    return t;
}

void CoefficientTable::index_primes() {
    prime_index_.assign(size_t(p_max_) + 1, -1);
    for (size_t i = 0; i < primes_.size(); ++i) prime_index_[size_t(primes_[i])] = i64(i);
}

void CoefficientTable::build_an(const CurveSpec& curve) {
    an_.assign(size_t(n_max_) + 1, 0.0);
    an_[0] = 0.0;
    if (n_max_ >= 1) an_[1] = 1.0;
    if (n_max_ < 2) return;

    // prime powers first: Hecke recurrence at good p, lambda^k at p | N
    for (i64 p : primes_) {
        if (p > n_max_) break;
        const double lam = lam_[size_t(prime_index_[size_t(p)])];
        const bool bad = (curve.conductor % p == 0);
        double prev = 1.0, cur = lam;
        i64 pk = p;
        int k = 1;
        while (pk <= n_max_) {
            an_[size_t(pk)] = cur;
            if (pk > n_max_ / p) break;
            pk *= p;
            ++k;
            double next = bad ? std::pow(lam, double(k)) : lam * cur - prev;
            prev = cur;
            cur = next;
        }
    }

    // multiplicative fill via smallest prime factor
    std::vector<std::uint32_t> spf = sieve_spf(n_max_);
    for (i64 n = 2; n <= n_max_; ++n) {
        const i64 p = spf[size_t(n)];
        i64 pe = p, m = n / p;
        while (m % p == 0) { pe *= p; m /= p; }
        if (m > 1) an_[size_t(n)] = an_[size_t(m)] * an_[size_t(pe)];
    }
}

i64 CoefficientTable::ap_int(i64 p) const {
    if (p < 2 || p > p_max_ || prime_index_[size_t(p)] < 0)
        throw table_range_error("ap_int: prime outside sieved range");
    return ap_[size_t(prime_index_[size_t(p)])];
}

double CoefficientTable::lambda(i64 p) const {
    if (p < 2 || p > p_max_ || prime_index_[size_t(p)] < 0)
        throw table_range_error("lambda: prime outside sieved range");
    return lam_[size_t(prime_index_[size_t(p)])];
}

double CoefficientTable::an(i64 n) const {
    if (n < 1 || n > n_max_) throw table_range_error("an: index outside table");
    return an_[size_t(n)];
}

double CoefficientTable::lambda_e_prime_power(i64 p, int k, BadPrimeMode mode) const {
    if (k < 1) throw input_error("lambda_e_prime_power: k must be >= 1");
    if (n0_ % p == 0 && mode == BadPrimeMode::kExclude) return 0.0;
    const double logp = std::log(double(p));
    const double lam = lambda(p);
    if (conductor_ % p == 0) return std::pow(lam, double(k)) * logp;
    // alpha^k + conj(alpha)^k via the Chebyshev-style recurrence
    double prev = 2.0, cur = lam;
    for (int j = 1; j < k; ++j) {
        double next = lam * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur * logp;
}

double CoefficientTable::lambda_e(i64 n, BadPrimeMode mode) const {
    if (n < 2) return 0.0;
    // detect n = p^k by smallest factor
    i64 p = 0;
    for (i64 q = 2; q * q <= n; q = (q == 2 ? 3 : q + 2)) {
        if (n % q == 0) { p = q; break; }
    }
    int k = 1;
    if (p == 0) {
        p = n; // n itself prime
    } else {
        i64 m = n;
        k = 0;
        while (m % p == 0) { m /= p; ++k; }
        if (m != 1) return 0.0; // not a prime power
    }
    if (p > p_max_) throw table_range_error("lambda_e: prime outside sieved range");
    return lambda_e_prime_power(p, k, mode);
}

std::complex<double> satake(double lam_p) {
    if (std::abs(lam_p) > 2.0 + 1e-9)
        throw domain_error("satake: |lambda| > 2 signals a coefficient bug");
    const double half = 0.5 * lam_p;
    const double im = std::sqrt(std::max(0.0, 1.0 - half * half));
    return {half, im};
}

} // namespace twistlab
