#include "sievekit/primes.hpp"

#include "sievekit/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace sievekit {

namespace {

constexpr std::uint32_t kCacheMagic = 0x534b4654; // "SKFT"
constexpr std::uint32_t kCacheVersion = 1;

} // namespace

FactorTable FactorTable::build(std::uint64_t limit) {
    if (limit < 2) throw precondition_error("FactorTable: limit must be >= 2");
    if (limit > kMaxLimit)
        throw budget_error("FactorTable: limit exceeds 2e8 entry budget");

    FactorTable t;
    t.limit_ = limit;
    t.spf_.assign(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i)
        t.spf_[i] = static_cast<std::uint32_t>(i & 1 ? i : 2);
    for (std::uint64_t p = 3; p * p <= limit; p += 2) {
        if (t.spf_[p] != p) continue;
        for (std::uint64_t m = p * p; m <= limit; m += 2 * p)
            if (t.spf_[m] == m) t.spf_[m] = static_cast<std::uint32_t>(p);
    }
    return t;
}

std::vector<std::pair<std::uint64_t, int>> FactorTable::factor(std::uint64_t n) const {
    if (n < 2 || n > limit_)
        throw precondition_error("FactorTable::factor: argument out of range");
    std::vector<std::pair<std::uint64_t, int>> out;
    while (n > 1) {
        std::uint64_t p = spf_[n];
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.emplace_back(p, e);
    }
    return out;
}

std::vector<std::uint64_t> FactorTable::distinct_primes(std::uint64_t n) const {
    if (n < 2 || n > limit_)
        throw precondition_error("FactorTable::distinct_primes: argument out of range");
    std::vector<std::uint64_t> out;
    while (n > 1) {
        std::uint64_t p = spf_[n];
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    return out;
}

int FactorTable::big_omega(std::uint64_t n) const {
    if (n < 2 || n > limit_)
        throw precondition_error("FactorTable::big_omega: argument out of range");
    int count = 0;
    while (n > 1) {
        n /= spf_[n];
        ++count;
    }
    return count;
}

void FactorTable::save(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("FactorTable::save: cannot open " + path);
    std::uint32_t magic = kCacheMagic, version = kCacheVersion;
    std::uint64_t n = limit_;
    bool ok = std::fwrite(&magic, sizeof magic, 1, f) == 1 &&
              std::fwrite(&version, sizeof version, 1, f) == 1 &&
              std::fwrite(&n, sizeof n, 1, f) == 1 &&
              std::fwrite(spf_.data(), sizeof(std::uint32_t), spf_.size(), f) == spf_.size();
    ok = std::fclose(f) == 0 && ok;
    if (!ok) throw std::runtime_error("FactorTable::save: write failed for " + path);
}

std::optional<FactorTable> FactorTable::load(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) return std::nullopt;
    std::uint32_t magic = 0, version = 0;
    std::uint64_t n = 0;
    FactorTable t;
    bool ok = std::fread(&magic, sizeof magic, 1, f) == 1 &&
              std::fread(&version, sizeof version, 1, f) == 1 &&
              std::fread(&n, sizeof n, 1, f) == 1 &&
              magic == kCacheMagic && version == kCacheVersion && n >= 2 && n <= kMaxLimit;
    if (ok) {
        t.limit_ = n;
        t.spf_.resize(n + 1);
        ok = std::fread(t.spf_.data(), sizeof(std::uint32_t), t.spf_.size(), f) == t.spf_.size();
    }
    std::fclose(f);
    if (!ok) return std::nullopt;
    return t;
}

std::vector<long long> primes_up_to(long long n) {
    std::vector<long long> out;
    if (n < 2) return out;
    std::vector<bool> comp(static_cast<std::size_t>(n) + 1, false);
    for (long long i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (long long m = i * i; m <= n; m += i) comp[m] = true;
    }
    return out;
}

bool is_prime_small(long long n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (long long d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

long long euler_phi(long long n) {
    if (n < 1) throw precondition_error("euler_phi: argument must be positive");
    long long result = n;
    for (long long p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace {

using u64 = unsigned long long;
using u128 = unsigned __int128;

u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod_u64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

// deterministic for all 64-bit inputs with this witness set
constexpr u64 kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        while (d == 1) {
            x = (mulmod_u64(x, x, n) + c) % n;
            y = (mulmod_u64(y, y, n) + c) % n;
            y = (mulmod_u64(y, y, n) + c) % n;
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

} // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 w : kWitnesses) {
        if (n == w) return true;
        if (n % w == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while (d % 2 == 0) { d /= 2; ++s; }
    for (u64 w : kWitnesses) {
        u64 x = powmod_u64(w, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::pair<u64, int>> factor_u64(u64 n) {
    std::vector<u64> primes;
    std::vector<u64> stack;
    if (n > 1) stack.push_back(n);
    while (!stack.empty()) {
        u64 m = stack.back();
        stack.pop_back();
        if (is_prime_u64(m)) {
            primes.push_back(m);
            continue;
        }
        u64 d = pollard_rho(m);
        stack.push_back(d);
        stack.push_back(m / d);
    }
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<u64, int>> out;
    for (u64 p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1);
    }
    return out;
}

long long primorial(long long w) {
    long long prod = 1;
    for (long long p : primes_up_to(w)) {
        if (prod > (1LL << 62) / p)
            throw budget_error("primorial: product exceeds 63-bit range");
        prod *= p;
    }
    return prod;
}

} // namespace sievekit
