#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sievekit {

// Smallest-prime-factor table for [2, limit]. Built once, read-only afterwards;
// safe to share across threads.
class FactorTable {
  public:
    static constexpr std::uint64_t kMaxLimit = 200'000'000; // memory budget

    static FactorTable build(std::uint64_t limit);

    std::uint64_t limit() const { return limit_; }

    bool is_prime(std::uint64_t n) const { return n >= 2 && spf_[n] == n; }

    // smallest prime factor; n in [2, limit]
    std::uint32_t smallest_factor(std::uint64_t n) const { return spf_[n]; }

    // (prime, exponent) pairs in increasing prime order
    std::vector<std::pair<std::uint64_t, int>> factor(std::uint64_t n) const;
    std::vector<std::uint64_t> distinct_primes(std::uint64_t n) const;

    // number of prime factors with multiplicity
    int big_omega(std::uint64_t n) const;

    // Binary cache: magic, version, limit, raw 32-bit entries, little-endian.
    void save(const std::string& path) const;
    static std::optional<FactorTable> load(const std::string& path);

  private:
    FactorTable() = default;
    std::uint64_t limit_ = 0;
    std::vector<std::uint32_t> spf_; // spf_[0] = spf_[1] = 0
};

// Primes up to n inclusive (independent small sieve; no FactorTable needed).
std::vector<long long> primes_up_to(long long n);

// Deterministic primality for small arguments, by trial division.
bool is_prime_small(long long n);

// Euler phi by trial division (small arguments).
long long euler_phi(long long n);

// Deterministic 64-bit primality (Miller-Rabin with a fixed witness set).
bool is_prime_u64(unsigned long long n);

// Full factorization of any 64-bit integer, (prime, exponent) pairs in
// increasing prime order; Pollard rho with deterministic parameters.
std::vector<std::pair<unsigned long long, int>> factor_u64(unsigned long long n);

// Primorial: product of primes <= w. Throws budget_error if it overflows 63 bits.
long long primorial(long long w);

} // namespace sievekit
