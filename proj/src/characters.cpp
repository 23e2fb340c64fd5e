#include "characters.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"

namespace twistlab {

int kronecker(i64 a, i64 b) {
    if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (b & 1) == 0) return 0;
    int k = 1;
    // strip 2s from b; each costs a factor (a/2)
    int v = 0;
    while ((b & 1) == 0) { b /= 2; ++v; }
    if (v & 1) {
        int am8 = int(((a % 8) + 8) % 8);
        if (am8 == 3 || am8 == 5) k = -k;
    }
    if (b < 0) {
        b = -b;
        if (a < 0) k = -k; // (a/-1) = sign(a)
    }
    // b odd positive from here; standard Jacobi with reciprocity
    a %= b;
    if (a < 0) a += b;
    while (a != 0) {
        int v2 = 0;
        while ((a & 1) == 0) { a /= 2; ++v2; }
        if (v2 & 1) {
            i64 bm8 = b % 8;
            if (bm8 == 3 || bm8 == 5) k = -k;
        }
        if ((a % 4 == 3) && (b % 4 == 3)) k = -k;
        i64 t = b % a;
        b = a;
        a = t;
    }
    return b == 1 ? k : 0;
}

bool is_squarefree(i64 n) {
    if (n < 0) n = -n;
    if (n == 0) return false;
    if (n % 4 == 0) return false;
    for (i64 p = 2; p * p <= n; p = (p == 2 ? 3 : p + 2)) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return false;
        }
    }
    return true;
}

bool is_fundamental(i64 d) {
    if (d == 0) throw input_error("is_fundamental: d = 0");
    i64 m4 = ((d % 4) + 4) % 4;
    if (m4 == 1) return is_squarefree(d);
    if (m4 != 0) return false;
    i64 m = d / 4;
    i64 mm4 = ((m % 4) + 4) % 4;
    if (mm4 != 2 && mm4 != 3) return false;
    return is_squarefree(m);
}

namespace {

void require_odd_modulus(i64 m) {
    if (m < 1 || (m & 1) == 0)
        throw input_error("gauss sum: modulus must be odd and positive");
}

} // namespace

i64 gauss_sum_tau0(i64 m) {
    require_odd_modulus(m);
    i64 s = 0;
    for (i64 b = 0; b < m; ++b) s += kronecker(b, m);
    return s;
}

std::complex<double> gauss_sum_tau(i64 v, i64 m) {
    require_odd_modulus(m);
    const double two_pi = 2.0 * std::numbers::pi;
    double re = 0.0, im = 0.0;
    for (i64 b = 0; b < m; ++b) {
        int chi = kronecker(b, m);
        if (chi == 0) continue;
        i64 j = (i128(v) * b) % m;
        if (j < 0) j += m;
        double ang = two_pi * double(j) / double(m);
        re += chi * std::cos(ang);
        im += chi * std::sin(ang);
    }
    return {re, im};
}

std::complex<double> gauss_sum_g(i64 v, i64 m) {
    require_odd_modulus(m);
    const int eps = kronecker(-1, m); // +1 for m = 1 (4), -1 for m = 3 (4)
    const std::complex<double> factor =
        0.5 * (std::complex<double>(1.0, -1.0) +
               double(eps) * std::complex<double>(1.0, 1.0));
    return factor * gauss_sum_tau(v, m);
}

} // namespace twistlab
