#ifndef TWISTLAB_CURVE_HPP
#define TWISTLAB_CURVE_HPP

#include <array>
#include <complex>
#include <vector>

#include "nt_util.hpp"

namespace twistlab {

// ----------------------------------------------------------------------
// Curve data
// ----------------------------------------------------------------------

// Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
// Conductor and root number are inputs, not computed; a consistency
// warning against Waldspurger non-negativity is the runtime guard for a
// wrong eps_e (see sweep.cpp).
struct CurveSpec {
    i64 a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
    i64 conductor = 0;  // N
    int eps_e = 1;      // root number of E
    i64 n0 = 0;         // lcm(8, N)

    static CurveSpec make(i64 a1, i64 a2, i64 a3, i64 a4, i64 a6,
                          i64 conductor, int eps_e);

    // b-invariants and discriminant of the model
    i64 b2() const { return a1 * a1 + 4 * a2; }
    i64 b4() const { return 2 * a4 + a1 * a3; }
    i64 b6() const { return a3 * a3 + 4 * a6; }
    i64 b8() const {
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    }
    i128 discriminant() const;

    // 32-byte identity hash of (a1..a6, N); keys the coefficient cache.
    std::array<unsigned char, 32> hash() const;
};

// ----------------------------------------------------------------------
// Point counting mod p
// ----------------------------------------------------------------------

struct PointCountOptions {
    // Primes >= bsgs_threshold use baby-step/giant-step order finding
    // (Shanks-Mestre) instead of the O(p) residue-table count.
    // 0 disables BSGS entirely.
    i64 bsgs_threshold = 0;
};

// #E(F_p) including the point at infinity; for p | N the count is of
// nonsingular points of the reduced curve (again with infinity).
i64 count_points_mod_p(const CurveSpec& curve, i64 p,
                       const PointCountOptions& opts = {});

// a_p: p+1-#E(F_p) at good p; p - #E_ns(F_p) at bad p (+1 split
// multiplicative, -1 nonsplit, 0 additive).
i64 trace_of_frobenius(const CurveSpec& curve, i64 p,
                       const PointCountOptions& opts = {});

// ----------------------------------------------------------------------
// Coefficient table
// ----------------------------------------------------------------------

enum class BadPrimeMode {
    // Degree-one Euler factor at p | N: Lambda_E(p^k) = (a_p p^{-1/2})^k log p.
    kEuler,
    // Zero out p | N0 contributions, mirroring sums restricted to (n, N0)=1.
    kExclude,
};

struct BuildOptions {
    int threads = 0;  // 0 = hardware default / TWISTLAB_THREADS
    PointCountOptions point_count;
};

// Normalized Hecke data for a fixed curve: integer a_p for p <= p_max,
// lambda(p) = a_p/sqrt(p), and the multiplicative a(n) for n <= n_max
// (normalization |a(n)| <= d(n)).  Immutable once built; shareable across
// threads.
class CoefficientTable {
  public:
    static CoefficientTable build(const CurveSpec& curve, i64 p_max, i64 n_max,
                                  const BuildOptions& opts = {});

    i64 p_max() const { return p_max_; }
    i64 n_max() const { return n_max_; }
    const std::array<unsigned char, 32>& curve_hash() const { return hash_; }

    const std::vector<i64>& primes() const { return primes_; }
    const std::vector<double>& lambdas() const { return lam_; }
    const std::vector<double>& an_values() const { return an_; } // an_[n], index 0 unused

    i64 ap_int(i64 p) const;    // throws table_range_error if p not sieved
    double lambda(i64 p) const; // a_p / sqrt(p)
    double an(i64 n) const;     // throws table_range_error if n > n_max

    // Lambda_E(n): 0 unless n = p^k; (alpha_p^k + conj^k) log p at good p,
    // bad primes per mode.  kExclude zeroes p | N0 (including a good p = 2).
    double lambda_e(i64 n, BadPrimeMode mode = BadPrimeMode::kEuler) const;
    double lambda_e_prime_power(i64 p, int k, BadPrimeMode mode) const;

    bool divides_n0(i64 p) const { return n0_ % p == 0; }
    i64 conductor() const { return conductor_; }

    // Reassemble from raw arrays (cache load path).  Validates Hasse.
    static CoefficientTable from_arrays(const CurveSpec& curve, i64 p_max, i64 n_max,
                                        std::vector<double> lambdas,
                                        std::vector<double> an);

  private:
    CoefficientTable() = default;

    i64 p_max_ = 0, n_max_ = 0;
    i64 conductor_ = 0, n0_ = 0;
    std::array<unsigned char, 32> hash_{};
    std::vector<i64> primes_;
    std::vector<i64> prime_index_; // p -> index into primes_, or -1
    std::vector<i64> ap_;
    std::vector<double> lam_;
    std::vector<double> an_;

    void index_primes();
    void build_an(const CurveSpec& curve);
};

// Satake parameter alpha with alpha + conj(alpha) = lam_p, |alpha| = 1,
// Im alpha >= 0.  Throws domain_error if |lam_p| > 2 + 1e-9.
std::complex<double> satake(double lam_p);

} // namespace twistlab

#endif
