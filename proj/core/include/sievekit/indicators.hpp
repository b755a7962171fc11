#pragma once

#include "sievekit/linear_systems.hpp"
#include "sievekit/primes.hpp"
#include "sievekit/rational.hpp"

#include <vector>

namespace sievekit {

enum class WeightKind { Theta1, Theta2, Theta3, PrimeLog };

// Weighted indicator of an arithmetically constrained set:
//   Theta1:   (log n)^2 when n is prime, n+2 has at most two prime factors,
//             and p | n(n+2) implies p^10 >= n
//   Theta2:   (log n)^m when at least k of n+h_1..n+h_m are prime and
//             p | prod (n+h_j) implies p >= n^rho
//   Theta3:   (log 2n)^{3/2} when n is prime and n-1 is a sum of two squares
//   PrimeLog: log n on primes (diagnostic weight; densities follow the PNT)
struct WeightedIndicator {
    WeightKind kind = WeightKind::PrimeLog;
    ShiftTuple tuple = ShiftTuple::make({0});
    SmallRational rho{1, 20};
    int threshold_k = 2;
    long long n_min = 2;
    bool indicator_only = false; // replace the log power by 1 on the support

    static WeightedIndicator theta1();
    static WeightedIndicator theta2(ShiftTuple tuple, SmallRational rho, int k);
    static WeightedIndicator theta2_defaults(); // H={0,2,6,8,12}, rho=1/20, k=2
    static WeightedIndicator theta3();
    static WeightedIndicator prime_log();

    double r_exponent() const; // log-power bound: 2, m, 3/2, 1
    const ShiftTuple& effective_tuple() const { return tuple; }
    // 1 on the support, 0 elsewhere; exact integer answer
    bool supported(long long n, const FactorTable& table) const;
    double evaluate(long long n, const FactorTable& table) const;
};

double theta1(long long n, const FactorTable& table);
double theta2(long long n, const WeightedIndicator& spec, const FactorTable& table);
double theta3(long long n, const FactorTable& table);

// Omega(n) <= 2 and every prime factor >= z; n = 1 passes vacuously.
bool is_p2_rough(long long n, double z, const FactorTable& table);

// m representable as x^2 + y^2 with x, y >= 0 (so 0 and 1 qualify).
bool is_sum_of_two_squares(long long m, const FactorTable& table);

enum class BClass { B1, B2, Neither };

// Membership of n = p1 p2 p3 in the two almost-prime ranges
//   B1: x^{1/10} <= p1 <= x^{1/3-eps} <= p2, p1 p2^2 <= 2x, p3 >= x^{1/10}
//   B2: x^{1/3-eps} <= p1 <= p2, p1 p2^2 <= 2x, p3 >= x^{1/10}
// (closed endpoints, exact integer power comparisons). B1 wins overlaps.
BClass classify_B(long long n, long long x, SmallRational eps, const FactorTable& table);

// Divisibility/coprimality conditions enabling the shifted two-squares
// sieve for Kn + b: 216 | K; (b,K) = 1 and (b-1, s(K)) = 1 where s(K) is
// the product of primes p | K with p = 3 mod 4, p != 3; and
// b - 1 = 2^j 3^{2v} u with u = 1 mod 4, 3 not dividing u, and
// 2^{j+2} 3^{2v+1} | K.
bool is_amenable(long long K, long long b);

// {b in [1, W] : (b + h_j, W) = 1 for all j}.
std::vector<long long> residue_set_B_H(long long W, const ShiftTuple& tuple);

// Weight array a with a[n] = theta(n) for n in [1, N]; a[0] unused.
// Segment-parallel with fixed segment boundaries.
std::vector<double> enumerate_weights(const WeightedIndicator& spec, long long N,
                                      const FactorTable& table, int threads = 0);

// True iff every prime factor of each n + h_j exceeds w.
bool w_rough_support(long long n, const ShiftTuple& tuple, long long w, const FactorTable& table);

} // namespace sievekit
