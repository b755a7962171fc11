#pragma once

// Brute-force reference implementations used to pin expected values in the
// test suite. Everything here is written from first principles (trial
// division, exhaustive enumeration, direct sums) and deliberately shares no
// code with the library.

#include <complex>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

bool is_prime(long long n);
std::vector<long long> prime_factors(long long n); // with multiplicity, ascending
int mobius(long long n);                           // 0 on non-squarefree
long long euler_phi(long long n);

// p >= n^(num/den) decided exactly: p^den >= n^num over big integers.
bool rough_at_least(long long p, long long n, long long num, long long den);

// Support predicates for the three weighted prime indicators, written
// directly from their definitions via trial division.
bool theta1_support(long long n);
bool theta2_support(long long n, const std::vector<long long>& shifts, long long rho_num,
                    long long rho_den, int k);
bool theta3_support(long long n);

// m = x^2 + y^2 with x, y >= 0 by exhaustive search.
bool two_squares(long long m);

// Truncated Euler product 2 * prod_{2 < p <= cutoff} p(p-2)/(p-1)^2 over a
// locally sieved prime list.
long double twin_series(long long cutoff);

// Selberg weight log R * (sum_{d | n} mu(d) chi(log d / log R))^2 by full
// divisor enumeration, chi(x) = cos^2(pi x / 4) on (-2, 2).
double lambda_chi(long long n, double R);

// Direct multilinear Gowers average: 2^k-th root of the mean over
// (x, h_1..h_k) in Z_N^{k+1} of the alternating conjugated product.
double gowers_uk(const std::vector<std::complex<double>>& f, int k);

// Exact rational solve of Psi * y = x for an integer matrix given by
// columns of coefficient vectors; true iff an integer solution exists.
bool in_lattice_image(const std::vector<std::vector<long long>>& columns,
                      const std::vector<long long>& x);

// Residues a in [1, W] with gcd(a + h, W) = 1 for every shift h.
std::vector<long long> admissible_residues(long long W, const std::vector<long long>& shifts);

} // namespace oracle
