#ifndef TWISTLAB_CHARACTERS_HPP
#define TWISTLAB_CHARACTERS_HPP

#include <complex>
#include <vector>

#include "nt_util.hpp"

namespace twistlab {

// ----------------------------------------------------------------------
// Kronecker symbol and fundamental discriminants
// ----------------------------------------------------------------------

// Kronecker symbol (a/b), extended to all integers.  (a/0) = [|a|=1],
// (a/-1) = sign(a), (a/2) = 0, +1, -1 for a even, a = +-1 (8), a = +-3 (8).
// The quadratic character chi_d(n) of a fundamental discriminant d is
// kronecker(d, n).
int kronecker(i64 a, i64 b);

// True iff d is the discriminant of a quadratic field:
// d = 1 (mod 4) squarefree, or d = 4m with m = 2, 3 (mod 4) squarefree.
// d = 0 is an input error.
bool is_fundamental(i64 d);

// Trial-division squarefree test (standalone; window enumeration sieves
// squarefree flags in one pass instead, see family.cpp).
bool is_squarefree(i64 n);

// ----------------------------------------------------------------------
// Gauss sums   tau_v(m) = sum_{b mod m} (b/m) e(vb/m),  m odd
// ----------------------------------------------------------------------

// tau_0 is a rational integer: the plain character sum.  Exact.
i64 gauss_sum_tau0(i64 m);

// Direct summation, the reference evaluation.
std::complex<double> gauss_sum_tau(i64 v, i64 m);

// G_v(m) = ((1-i)/2 + (-1/m)(1+i)/2) tau_v(m); inverse of the relation
// tau_v(m) = ((1+i)/2 + (-1/m)(1-i)/2) G_v(m).
std::complex<double> gauss_sum_g(i64 v, i64 m);

} // namespace twistlab

#endif
