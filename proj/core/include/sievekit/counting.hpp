#pragma once

#include "sievekit/indicators.hpp"
#include "sievekit/linear_systems.hpp"
#include "sievekit/primes.hpp"
#include "sievekit/regions.hpp"
#include "sievekit/torus.hpp"

#include <vector>

namespace sievekit {

// Weight values over a contiguous integer domain [lo, lo + size - 1].
struct ValueTable {
    long long lo = 1;
    std::vector<double> v;

    long long hi() const { return lo + static_cast<long long>(v.size()) - 1; }
    bool covers(long long n) const { return n >= lo && n <= hi(); }
    double at(long long n) const { return v[static_cast<std::size_t>(n - lo)]; }
    // Adopts a 1-based weight array (entry 0 ignored), domain [1, size-1].
    static ValueTable one_based(const std::vector<double>& w);
};

// sum over lattice points n of prod_i weights_i(psi_i(n)); one table per
// form, or a single shared table.
double count_T(const AffineSystem& sys, const std::vector<ValueTable>& weights,
               const LatticeRegion& region, int threads = 0);

struct WTrickClass {
    std::vector<long long> a; // residue vector, entries in [1, W]
    AffineSystem reduced;     // psi'_i with psi_i(W n + a) = W psi'_i(n) + c_i
    std::vector<long long> c; // constants c_i in [1, W]
    LatticeRegion region;     // {n : W n + a in K}
};

struct WTrickDecomposition {
    long long w = 2;
    long long W = 2;
    ShiftTuple tuple;
    std::vector<WTrickClass> classes; // residues in ascending lex order
};

// W = product of primes <= w; one class per a in [W]^d with
// (psi_i(a) + h_j, W) = 1 for all i, j.
WTrickDecomposition w_trick_decompose(const AffineSystem& sys, const ShiftTuple& tuple,
                                      long long w, const LatticeRegion& region);

struct IdentityCheckResult {
    bool exact_equal = false;      // the two sides agree in exact arithmetic
    bool exact_arithmetic = false; // indicator weights, counted exactly
    double residual = 0;           // |lhs - rhs|
    double lhs = 0;
    double rhs = 0;
};

// Congruence-class identity: the theta-weighted sum over K, restricted to
// points whose arguments are free of prime factors <= w, equals
// (W/phi(W))^{rt} times the class sums of the W-tricked weights
// theta_{W,c}(x) = (phi(W)/W)^r theta(Wx + c). Exact rational arithmetic
// when theta is indicator-valued.
IdentityCheckResult w_trick_identity_check(const AffineSystem& sys, const ShiftTuple& tuple,
                                           long long w, const LatticeRegion& region,
                                           const WeightedIndicator& theta,
                                           const FactorTable& table, int threads = 0);

struct ScaledRegion {
    long long N = 0;
    LatticeRegion region;
};

struct DensityRow {
    long long N = 0;
    double T = 0;
    double prediction = 0; // constant * Vol
    double ratio = 0;      // T / prediction, 0 when the prediction vanishes
    double pred_error = 0; // constant_error * Vol
};

struct DensityReport {
    double constant = 0; // truncated local-factor product of the shifted system
    double constant_error = 0;
    std::vector<DensityRow> rows;
};

// Weighted counts against constant * Vol at each scale. The constant comes
// from the shifted system with duplicate forms removed (duplicates leave the
// local conditions unchanged but would inflate the normalization).
DensityReport density_report(const AffineSystem& sys, const WeightedIndicator& theta,
                             const std::vector<ScaledRegion>& regions, const FactorTable& table,
                             long long cutoff_prime = 10000, int threads = 0);

struct BohrReport {
    double mean_theta_xi = 0;
    double mean_xi = 0;
    double delta_hat = 0;    // mean_theta_xi / mean_xi
    double mean_theta = 0;   // unconditioned mean for comparison
    bool degenerate = false; // xi vanished identically
};

// Means over n in [1, N] of theta_{W,b}(n) = (phi(W)/W)^r theta(Wn + b)
// against the test sequence xi; xi must take values in [0, 1].
BohrReport bohr_density(const WeightedIndicator& theta, const NilsequenceSpec& xi, long long N,
                        long long W, long long b, const FactorTable& table, int threads = 0);

} // namespace sievekit
