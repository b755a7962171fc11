#pragma once

#include "sievekit/rational.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace sievekit {

// Integer affine form x -> coeffs.x + constant on Z^d.
struct AffineForm {
    std::vector<long long> coeffs;
    long long constant = 0;

    int dim() const { return static_cast<int>(coeffs.size()); }
    long long eval(const std::vector<long long>& x) const;
    bool homogeneous_is_zero() const;
};

struct AffineSystem {
    std::vector<AffineForm> forms;
    int d = 0;

    int t() const { return static_cast<int>(forms.size()); }
    static AffineSystem make(std::vector<AffineForm> forms);
    std::vector<long long> eval(const std::vector<long long>& x) const;
};

// Strictly increasing integer shifts h_1 < ... < h_m.
struct ShiftTuple {
    std::vector<long long> shifts;

    int m() const { return static_cast<int>(shifts.size()); }
    long long max_shift() const { return shifts.back(); }
    long long diameter() const { return shifts.back() - shifts.front(); }
    static ShiftTuple make(std::vector<long long> shifts);
};

struct SingularSeriesResult {
    long double value = 0;
    long double error_bound = 0;
    long long cutoff_prime = 0;
    std::vector<long long> exceptional_primes;
};

// Minimal s such that every i admits a partition of the other forms into
// <= s+1 parts with the i-th homogeneous part outside each part's span.
// Absent when two homogeneous parts are proportional over Q.
std::optional<int> complexity(const AffineSystem& sys);

// J_i ranges over nonempty subsets of the coordinate indices [d] of size
// <= s+1; requires prod_{j in J_i} coeff_i[j] != 0 while every other form
// k has some j in J_i with coeff_k[j] = 0.
bool is_normal_form(const AffineSystem& sys, int s);

// E_{a in (Z/p)^d} prod_i (p/(p-1)) 1_{psi_i(a) != 0 mod p}, exact.
Rat local_factor_bruteforce(const AffineSystem& sys, long long p);

// Same quantity via inclusion-exclusion over subsets of forms:
// (p/(p-1))^t p^{-d} sum_S (-1)^{|S|} N_S with N_S = p^{d-rank_S} when the
// subsystem {psi_i = 0 mod p : i in S} is consistent, else 0.
Rat local_factor_exact(const AffineSystem& sys, long long p);

// The rt-form system (psi_i + h_j), ordered (i, j) lexicographically.
AffineSystem shifted_system(const AffineSystem& sys, const ShiftTuple& tuple);

// Truncated product of local factors with a rigorous tail bound.
// Requires every homogeneous part nonzero and no two forms proportional
// as affine maps over Q; rejects cutoffs below the largest exceptional
// prime.
SingularSeriesResult singular_series(const AffineSystem& sys, long long cutoff);

// Primes where some subset of forms changes rank or consistency mod p
// relative to the generic (rational) behavior; beyond these, every local
// factor follows the system's generic subset profile.
std::vector<long long> exceptional_primes(const AffineSystem& sys);

// Generic bound |beta_p - 1| <= beta_deviation_constant(t) / p^2, valid for
// p > t beyond all exceptional primes.
long double beta_deviation_constant(int t);

// beta_p != 0 for every prime; finite check over p <= t plus the
// exceptional primes (larger non-exceptional p cannot be covered by t
// hyperplanes with nonconstant forms).
bool admissible_system(const AffineSystem& sys);

// For every prime p <= m the shifts miss at least one residue mod p.
bool admissible_tuple(const ShiftTuple& tuple);

// Injective homogeneous parametrization Z^{d-t} -> Z^d of the integer
// kernel lattice of mat (t x d, full row rank, t < d); canonical via row
// Hermite form of the kernel basis.
AffineSystem kernel_parametrization(const std::vector<std::vector<long long>>& mat);

// True iff the kernel of mat mod p contains a vector none of whose
// coordinates is forbidden. forbidden receives residues in [0, p).
bool local_solution_exists(const std::vector<std::vector<long long>>& mat, long long p,
                           const std::function<bool(long long)>& forbidden);

// Canonical forbidden-residue families for the solvability sweeps.
std::function<bool(long long)> chen_forbidden(long long p);           // x(x+2) = 0 mod p
std::function<bool(long long)> tuple_forbidden(ShiftTuple tuple, long long p); // prod (x+h_j) = 0
std::function<bool(long long)> two_squares_shift_forbidden(long long p); // {0}, plus {1} if p = 3 mod 4

} // namespace sievekit
