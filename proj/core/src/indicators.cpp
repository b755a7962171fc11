#include "sievekit/indicators.hpp"

#include "sievekit/errors.hpp"
#include "sievekit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sievekit {

namespace {

long long mod_pos(long long v, long long m) {
    long long r = v % m;
    return r < 0 ? r + m : r;
}

void check_range(long long n, long long need, const FactorTable& table, const char* who) {
    if (n < 1)
        throw precondition_error(std::string(who) + ": argument must be positive");
    if (need > static_cast<long long>(table.limit()))
        throw precondition_error(std::string(who) + ": factor table too small (need " +
                                 std::to_string(need) + ")");
}

// p >= n^(num/den) via exact integer comparison p^den >= n^num
bool rough_at_least(long long p, long long n, const SmallRational& rho) {
    return ipow(Int(p), static_cast<unsigned>(rho.den)) >=
           ipow(Int(n), static_cast<unsigned>(rho.num));
}

bool tuple_rough(long long n, const ShiftTuple& tuple, const SmallRational& rho,
                 const FactorTable& table) {
    for (long long h : tuple.shifts) {
        long long v = n + h;
        if (v < 1) return false;
        if (v == 1) continue;
        for (auto p : table.distinct_primes(static_cast<std::uint64_t>(v)))
            if (!rough_at_least(static_cast<long long>(p), n, rho)) return false;
    }
    return true;
}

} // namespace

WeightedIndicator WeightedIndicator::theta1() {
    WeightedIndicator w;
    w.kind = WeightKind::Theta1;
    w.tuple = ShiftTuple::make({0, 2});
    w.rho = SmallRational{1, 10};
    w.n_min = 3;
    return w;
}

WeightedIndicator WeightedIndicator::theta2(ShiftTuple tuple, SmallRational rho, int k) {
    if (rho.num <= 0 || rho.den <= 0 || rho.num >= rho.den)
        throw precondition_error("theta2: rho must lie in (0, 1)");
    if (k < 2) throw precondition_error("theta2: threshold must be >= 2");
    if (!admissible_tuple(tuple)) throw precondition_error("theta2: tuple is not admissible");
    WeightedIndicator w;
    w.kind = WeightKind::Theta2;
    w.tuple = std::move(tuple);
    w.rho = rho;
    w.threshold_k = k;
    w.n_min = 2;
    return w;
}

WeightedIndicator WeightedIndicator::theta2_defaults() {
    return theta2(ShiftTuple::make({0, 2, 6, 8, 12}), SmallRational{1, 20}, 2);
}

WeightedIndicator WeightedIndicator::theta3() {
    WeightedIndicator w;
    w.kind = WeightKind::Theta3;
    w.tuple = ShiftTuple::make({0});
    w.n_min = 2;
    return w;
}

WeightedIndicator WeightedIndicator::prime_log() {
    WeightedIndicator w;
    w.kind = WeightKind::PrimeLog;
    w.tuple = ShiftTuple::make({0});
    w.n_min = 2;
    return w;
}

double WeightedIndicator::r_exponent() const {
    switch (kind) {
        case WeightKind::Theta1: return 2.0;
        case WeightKind::Theta2: return static_cast<double>(tuple.m());
        case WeightKind::Theta3: return 1.5;
        case WeightKind::PrimeLog: return 1.0;
    }
    return 1.0;
}

bool WeightedIndicator::supported(long long n, const FactorTable& table) const {
    if (n < n_min) return false;
    switch (kind) {
        case WeightKind::Theta1: {
            check_range(n, n + 2, table, "theta1");
            if (!table.is_prime(static_cast<std::uint64_t>(n))) return false;
            if (table.big_omega(static_cast<std::uint64_t>(n + 2)) > 2) return false;
            return tuple_rough(n, tuple, SmallRational{1, 10}, table);
        }
        case WeightKind::Theta2: {
            check_range(n, n + tuple.max_shift(), table, "theta2");
            int primes = 0;
            for (long long h : tuple.shifts) {
                long long v = n + h;
                if (v >= 2 && table.is_prime(static_cast<std::uint64_t>(v))) ++primes;
            }
            if (primes < threshold_k) return false;
            return tuple_rough(n, tuple, rho, table);
        }
        case WeightKind::Theta3: {
            check_range(n, n, table, "theta3");
            if (!table.is_prime(static_cast<std::uint64_t>(n))) return false;
            return is_sum_of_two_squares(n - 1, table);
        }
        case WeightKind::PrimeLog: {
            check_range(n, n, table, "prime_log");
            return table.is_prime(static_cast<std::uint64_t>(n));
        }
    }
    return false;
}

double WeightedIndicator::evaluate(long long n, const FactorTable& table) const {
    if (!supported(n, table)) return 0.0;
    if (indicator_only) return 1.0;
    switch (kind) {
        case WeightKind::Theta1: {
            double l = std::log(static_cast<double>(n));
            return l * l;
        }
        case WeightKind::Theta2:
            return std::pow(std::log(static_cast<double>(n)), tuple.m());
        case WeightKind::Theta3:
            return std::pow(std::log(2.0 * static_cast<double>(n)), 1.5);
        case WeightKind::PrimeLog:
            return std::log(static_cast<double>(n));
    }
    return 0.0;
}

double theta1(long long n, const FactorTable& table) {
    return WeightedIndicator::theta1().evaluate(n, table);
}

double theta2(long long n, const WeightedIndicator& spec, const FactorTable& table) {
    if (spec.kind != WeightKind::Theta2) throw precondition_error("theta2: wrong weight kind");
    return spec.evaluate(n, table);
}

double theta3(long long n, const FactorTable& table) {
    return WeightedIndicator::theta3().evaluate(n, table);
}

bool is_p2_rough(long long n, double z, const FactorTable& table) {
    if (n < 1 || n > static_cast<long long>(table.limit()))
        throw precondition_error("is_p2_rough: argument out of table range");
    if (n == 1) return true;
    if (table.big_omega(static_cast<std::uint64_t>(n)) > 2) return false;
    for (auto p : table.distinct_primes(static_cast<std::uint64_t>(n)))
        if (static_cast<double>(p) < z) return false;
    return true;
}

bool is_sum_of_two_squares(long long m, const FactorTable& table) {
    if (m < 0) return false;
    if (m <= 1) return true;
    if (m > static_cast<long long>(table.limit()))
        throw precondition_error("is_sum_of_two_squares: argument out of table range");
    for (auto [p, e] : table.factor(static_cast<std::uint64_t>(m)))
        if (p % 4 == 3 && e % 2 == 1) return false;
    return true;
}

BClass classify_B(long long n, long long x, SmallRational eps, const FactorTable& table) {
    if (x < 2) throw precondition_error("classify_B: x must be >= 2");
    if (eps.num <= 0 || eps.den <= 0 || 3 * eps.num >= eps.den)
        throw precondition_error("classify_B: eps must lie in (0, 1/3)");
    if (n < 2 || n > static_cast<long long>(table.limit()))
        throw precondition_error("classify_B: n out of table range");
    if (table.big_omega(static_cast<std::uint64_t>(n)) != 3) return BClass::Neither;

    std::vector<long long> q;
    for (auto [p, e] : table.factor(static_cast<std::uint64_t>(n)))
        for (int i = 0; i < e; ++i) q.push_back(static_cast<long long>(p));

    // 1/3 - eps = a/b
    const long long a = eps.den - 3 * eps.num, b = 3 * eps.den;
    const Int xa = ipow(Int(x), static_cast<unsigned>(a));
    auto le_xa = [&](long long p) { return ipow(Int(p), static_cast<unsigned>(b)) <= xa; };
    auto ge_xa = [&](long long p) { return ipow(Int(p), static_cast<unsigned>(b)) >= xa; };
    auto ge_x10 = [&](long long p) { return ipow(Int(p), 10u) >= Int(x); };
    auto mid_ok = [&](long long p1, long long p2) { return Int(p1) * p2 * p2 <= 2 * Int(x); };

    bool in_b1 = false, in_b2 = false;
    std::sort(q.begin(), q.end());
    do {
        long long p1 = q[0], p2 = q[1], p3 = q[2];
        if (ge_x10(p1) && le_xa(p1) && ge_xa(p2) && mid_ok(p1, p2) && ge_x10(p3)) in_b1 = true;
        if (ge_xa(p1) && p1 <= p2 && mid_ok(p1, p2) && ge_x10(p3)) in_b2 = true;
    } while (std::next_permutation(q.begin(), q.end()));

    if (in_b1) return BClass::B1;
    if (in_b2) return BClass::B2;
    return BClass::Neither;
}

bool is_amenable(long long K, long long b) {
    if (K < 1) throw precondition_error("is_amenable: K must be positive");
    if (K % 216 != 0) return false;
    if (std::gcd(b, K) != 1) return false;

    long long sK = 1;
    for (auto [p, e] : factor_u64(static_cast<unsigned long long>(K))) {
        (void)e;
        if (p % 4 == 3 && p != 3) sK *= static_cast<long long>(p);
    }
    long long bm1 = b - 1;
    if (bm1 == 0) return false;
    if (std::gcd(bm1 < 0 ? -bm1 : bm1, sK) != 1) return false;

    // b - 1 = 2^j 3^v u with 3 not dividing u; need v even and u = 1 mod 4
    long long u = bm1;
    int j = 0, v = 0;
    while (u % 2 == 0) { u /= 2; ++j; }
    while (u % 3 == 0) { u /= 3; ++v; }
    if (v % 2 != 0) return false;
    if (mod_pos(u, 4) != 1) return false;

    long long rest = K;
    for (int i = 0; i < j + 2; ++i) {
        if (rest % 2 != 0) return false;
        rest /= 2;
    }
    for (int i = 0; i < v + 1; ++i) {
        if (rest % 3 != 0) return false;
        rest /= 3;
    }
    return true;
}

std::vector<long long> residue_set_B_H(long long W, const ShiftTuple& tuple) {
    if (W < 1) throw precondition_error("residue_set_B_H: W must be positive");
    std::vector<long long> out;
    for (long long bb = 1; bb <= W; ++bb) {
        bool ok = true;
        for (long long h : tuple.shifts)
            if (std::gcd(mod_pos(bb + h, W), W) != 1) { ok = false; break; }
        if (ok) out.push_back(bb);
    }
    return out;
}

std::vector<double> enumerate_weights(const WeightedIndicator& spec, long long N,
                                      const FactorTable& table, int threads) {
    if (N < 1) throw precondition_error("enumerate_weights: N must be positive");
    long long need = N + std::max<long long>(spec.tuple.max_shift(), 0);
    if (need > static_cast<long long>(table.limit()))
        throw precondition_error("enumerate_weights: factor table too small (need " +
                                 std::to_string(need) + ")");
    std::vector<double> a(static_cast<std::size_t>(N) + 1, 0.0);
    for_chunks(1LL, N + 1, 1 << 14, threads, [&](std::size_t, long long lo, long long hi) {
        for (long long n = lo; n < hi; ++n)
            a[static_cast<std::size_t>(n)] = spec.evaluate(n, table);
    });
    return a;
}

bool w_rough_support(long long n, const ShiftTuple& tuple, long long w, const FactorTable& table) {
    for (long long h : tuple.shifts) {
        long long v = n + h;
        if (v < 1) return false;
        if (v == 1) continue;
        if (v > static_cast<long long>(table.limit()))
            throw precondition_error("w_rough_support: factor table too small");
        if (static_cast<long long>(table.smallest_factor(static_cast<std::uint64_t>(v))) <= w)
            return false;
    }
    return true;
}

} // namespace sievekit
