#ifndef TWISTLAB_FAMILY_HPP
#define TWISTLAB_FAMILY_HPP

#include <vector>

#include "characters.hpp"
#include "curve.hpp"

namespace twistlab {

// One twist discriminant: fundamental d coprime to 2N with its class data.
struct DiscriminantRecord {
    i64 d = 0;
    int kappa = 0;       // sign of d
    i64 residue_a = 0;   // d mod N0, in [0, N0)
    int eps_d = 0;       // eps_E(d) = eps_E * chi_d(-N)
};

// A residue class E(kappa, a): all its members share one root number.
struct FamilyClass {
    int kappa = 0;
    i64 a_mod_n0 = 0;
    bool admissible = false; // eps_E(d) = +1 on the class
};

// eps_E(d) = eps_E * chi_d(-N).  Requires d fundamental, gcd(d, 2N) = 1.
int root_number(const CurveSpec& curve, i64 d);

// All candidate classes (a = 1 or 5 mod 8, gcd(a, N) = 1), both signs,
// with admissibility computed from the class residue data.
std::vector<FamilyClass> family_classes(const CurveSpec& curve);

// Members of E(kappa, a) with |d| in [X/2, 5X/2], sorted by |d|.
// X >= 20 required.  |d| = 1 never appears (window floor is 10).
// Every member's root number is checked against the class admissibility;
// a contradiction aborts the run.
std::vector<DiscriminantRecord> enumerate_family(const CurveSpec& curve, int kappa,
                                                 i64 a_mod_n0, double X);

// Union of enumerate_family over all admissible classes, sorted by |d|.
std::vector<DiscriminantRecord> enumerate_admissible(const CurveSpec& curve, double X);

// Brute-force count of fundamental d coprime to 2N with |d| in [lo, hi]
// (all of E restricted to the window, both root numbers).
std::vector<DiscriminantRecord> enumerate_window(const CurveSpec& curve, i64 lo, i64 hi);

} // namespace twistlab

#endif
