#include "family.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace twistlab {

int root_number(const CurveSpec& curve, i64 d) {
    if (!is_fundamental(d)) throw input_error("root_number: d not fundamental");
    if (gcd_i64(d, 2 * curve.conductor) != 1)
        throw input_error("root_number: gcd(d, 2N) != 1");
    // chi_d(-N) = (d/-1)(d/N)
    return curve.eps_e * kronecker(d, -curve.conductor);
}

namespace {

// Root number shared by every d with sign kappa, d = a (mod N0): chi_d(-N)
// factors through (d/-1) = kappa and (d/p) for p | 2N, all of which are
// determined by d mod N0 (N0 = lcm(8, N)).
int class_root_number(const CurveSpec& curve, int kappa, i64 a) {
    i64 rep = (kappa > 0) ? a + curve.n0 : a - curve.n0; // |rep| > 1 always
    return curve.eps_e * kronecker(rep, -curve.conductor);
}

// Squarefree flags for |d| in [lo, hi] in one sieve pass (D8).
std::vector<bool> squarefree_window(i64 lo, i64 hi) {
    std::vector<bool> sf(size_t(hi - lo + 1), true);
    for (i64 q = 2; q * q <= hi; ++q) {
        const i64 qq = q * q;
        for (i64 m = ((lo + qq - 1) / qq) * qq; m <= hi; m += qq)
            sf[size_t(m - lo)] = false;
    }
    return sf;
}

} // namespace

std::vector<FamilyClass> family_classes(const CurveSpec& curve) {
    std::vector<FamilyClass> classes;
    for (int kappa : {+1, -1}) {
        for (i64 a = 0; a < curve.n0; ++a) {
            const i64 a8 = a % 8;
            if (a8 != 1 && a8 != 5) continue;
            if (gcd_i64(a, curve.conductor) != 1) continue;
            FamilyClass fc;
            fc.kappa = kappa;
            fc.a_mod_n0 = a;
            fc.admissible = (class_root_number(curve, kappa, a) == 1);
            classes.push_back(fc);
        }
    }
    return classes;
}

std::vector<DiscriminantRecord> enumerate_family(const CurveSpec& curve, int kappa,
                                                 i64 a_mod_n0, double X) {
    if (X < 20) throw input_error("enumerate_family: X >= 20 required");
    if (kappa != 1 && kappa != -1) throw input_error("enumerate_family: kappa must be +-1");
    if (a_mod_n0 < 0 || a_mod_n0 >= curve.n0)
        throw input_error("enumerate_family: residue outside [0, N0)");
    const i64 a8 = a_mod_n0 % 8;
    if (a8 != 1 && a8 != 5)
        throw input_error("enumerate_family: residue must be 1 or 5 mod 8");

    std::vector<DiscriminantRecord> out;
    if (gcd_i64(a_mod_n0, curve.conductor) != 1) return out; // empty class

    const i64 lo = i64(std::ceil(X / 2.0));
    const i64 hi = i64(std::floor(5.0 * X / 2.0));
    if (lo > hi) return out;
    const std::vector<bool> sf = squarefree_window(lo, hi);
    const int class_eps = class_root_number(curve, kappa, a_mod_n0);

    // first |d| = a (mod N0) of the right sign at or above lo
    i64 want = (kappa > 0) ? a_mod_n0 : ((curve.n0 - a_mod_n0) % curve.n0); // |d| mod N0
    i64 m = lo + ((want - lo) % curve.n0 + curve.n0) % curve.n0;
    for (; m <= hi; m += curve.n0) {
        if (m == 1 || !sf[size_t(m - lo)]) continue;
        const i64 d = kappa > 0 ? m : -m;
        DiscriminantRecord rec;
        rec.d = d;
        rec.kappa = kappa;
        rec.residue_a = a_mod_n0;
        rec.eps_d = root_number(curve, d);
        if (rec.eps_d != class_eps)
            throw numerics_error("enumerate_family: root number varies within a class "
                                 "(contradiction with the class decomposition)");
        out.push_back(rec);
    }
    return out;
}

std::vector<DiscriminantRecord> enumerate_admissible(const CurveSpec& curve, double X) {
    std::vector<DiscriminantRecord> all;
    for (const FamilyClass& fc : family_classes(curve)) {
        if (!fc.admissible) continue;
        auto part = enumerate_family(curve, fc.kappa, fc.a_mod_n0, X);
        all.insert(all.end(), part.begin(), part.end());
    }
    std::sort(all.begin(), all.end(), [](const DiscriminantRecord& a, const DiscriminantRecord& b) {
        i64 aa = a.d < 0 ? -a.d : a.d, bb = b.d < 0 ? -b.d : b.d;
        return aa != bb ? aa < bb : a.d < b.d;
    });
    return all;
}

std::vector<DiscriminantRecord> enumerate_window(const CurveSpec& curve, i64 lo, i64 hi) {
    std::vector<DiscriminantRecord> out;
    if (lo < 2) lo = 2; // |d| = 1 excluded
    if (lo > hi) return out;
    const std::vector<bool> sf = squarefree_window(lo, hi);
    for (i64 m = lo; m <= hi; ++m) {
        if (!sf[size_t(m - lo)]) continue;
        if (gcd_i64(m, 2 * curve.conductor) != 1) continue;
        for (int kappa : {+1, -1}) {
            const i64 d = kappa > 0 ? m : -m;
            if (((d % 4) + 4) % 4 != 1) continue; // odd fundamental: d = 1 (mod 4)
            DiscriminantRecord rec;
            rec.d = d;
            rec.kappa = kappa;
            rec.residue_a = ((d % curve.n0) + curve.n0) % curve.n0;
            rec.eps_d = root_number(curve, d);
            out.push_back(rec);
        }
    }
    return out;
}

} // namespace twistlab
