#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace oracle {

bool is_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<long long> prime_factors(long long n) {
    std::vector<long long> out;
    for (long long d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            out.push_back(d);
            n /= d;
        }
    if (n > 1) out.push_back(n);
    return out;
}

int mobius(long long n) {
    auto fs = prime_factors(n);
    for (std::size_t i = 1; i < fs.size(); ++i)
        if (fs[i] == fs[i - 1]) return 0;
    return fs.size() % 2 == 0 ? 1 : -1;
}

long long euler_phi(long long n) {
    long long out = n;
    auto fs = prime_factors(n);
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    for (long long p : fs) out = out / p * (p - 1);
    return out;
}

bool rough_at_least(long long p, long long n, long long num, long long den) {
    BigInt lhs = 1, rhs = 1;
    for (long long i = 0; i < den; ++i) lhs *= p;
    for (long long i = 0; i < num; ++i) rhs *= n;
    return lhs >= rhs;
}

namespace {

bool tuple_rough(long long n, const std::vector<long long>& shifts, long long rho_num,
                 long long rho_den) {
    for (long long h : shifts) {
        long long v = n + h;
        if (v <= 0) return false;
        for (long long p : prime_factors(v))
            if (!rough_at_least(p, n, rho_num, rho_den)) return false;
    }
    return true;
}

} // namespace

bool theta1_support(long long n) {
    if (n < 3) return false;
    if (!is_prime(n)) return false;
    if (prime_factors(n + 2).size() > 2) return false;
    return tuple_rough(n, {0, 2}, 1, 10);
}

bool theta2_support(long long n, const std::vector<long long>& shifts, long long rho_num,
                    long long rho_den, int k) {
    if (n < 2) return false;
    int primes = 0;
    for (long long h : shifts)
        if (is_prime(n + h)) ++primes;
    if (primes < k) return false;
    return tuple_rough(n, shifts, rho_num, rho_den);
}

bool theta3_support(long long n) {
    return n >= 2 && is_prime(n) && two_squares(n - 1);
}

bool two_squares(long long m) {
    if (m < 0) return false;
    for (long long x = 0; x * x <= m; ++x) {
        long long rest = m - x * x;
        long long y = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(rest))));
        for (long long cand = std::max<long long>(0, y - 1); cand <= y + 1; ++cand)
            if (cand * cand == rest) return true;
    }
    return false;
}

long double twin_series(long long cutoff) {
    std::vector<bool> composite(static_cast<std::size_t>(cutoff) + 1, false);
    for (long long q = 4; q <= cutoff; q += 2) composite[static_cast<std::size_t>(q)] = true;
    long double prod = 2.0L;
    for (long long p = 3; p <= cutoff; ++p) {
        if (composite[static_cast<std::size_t>(p)]) continue;
        for (long long q = p * p; q <= cutoff; q += p) composite[static_cast<std::size_t>(q)] = true;
        long double pm1 = static_cast<long double>(p - 1);
        prod *= static_cast<long double>(p) * static_cast<long double>(p - 2) / (pm1 * pm1);
    }
    return prod;
}

double lambda_chi(long long n, double R) {
    double logR = std::log(R);
    double sum = 0;
    for (long long d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        double x = std::log(static_cast<double>(d)) / logR;
        if (x >= 2.0) continue;
        double c = std::cos(3.14159265358979323846 * x / 4.0);
        sum += mobius(d) * c * c;
    }
    return logR * sum * sum;
}

double gowers_uk(const std::vector<std::complex<double>>& f, int k) {
    long long N = static_cast<long long>(f.size());
    if (N == 0 || k < 1) throw std::invalid_argument("gowers_uk: bad input");
    std::vector<long long> h(static_cast<std::size_t>(k), 0);
    long double total = 0;
    long long combos = 1;
    for (int i = 0; i < k; ++i) combos *= N;
    for (long long idx = 0; idx < combos; ++idx) {
        long long rest = idx;
        for (int i = 0; i < k; ++i) {
            h[static_cast<std::size_t>(i)] = rest % N;
            rest /= N;
        }
        for (long long x = 0; x < N; ++x) {
            std::complex<double> prod = 1;
            for (int mask = 0; mask < (1 << k); ++mask) {
                long long arg = x;
                int bits = 0;
                for (int i = 0; i < k; ++i)
                    if (mask & (1 << i)) {
                        arg += h[static_cast<std::size_t>(i)];
                        ++bits;
                    }
                std::complex<double> v = f[static_cast<std::size_t>(arg % N)];
                prod *= bits % 2 == 0 ? v : std::conj(v);
            }
            total += prod.real();
        }
    }
    long double mean = total / (static_cast<long double>(combos) * N);
    if (mean < 0) mean = 0;
    return static_cast<double>(std::pow(static_cast<double>(mean), 1.0 / (1 << k)));
}

bool in_lattice_image(const std::vector<std::vector<long long>>& columns,
                      const std::vector<long long>& x) {
    if (columns.empty()) return std::all_of(x.begin(), x.end(), [](long long v) { return v == 0; });
    std::size_t rows = columns[0].size();
    std::size_t cols = columns.size();
    std::vector<std::vector<BigRat>> aug(rows, std::vector<BigRat>(cols + 1));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) aug[i][j] = BigRat(columns[j][i]);
        aug[i][cols] = BigRat(x[i]);
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && aug[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(aug[rank], aug[pivot]);
        BigRat lead = aug[rank][col];
        for (auto& v : aug[rank]) v /= lead;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || aug[i][col] == 0) continue;
            BigRat factor = aug[i][col];
            for (std::size_t j = col; j <= cols; ++j) aug[i][j] -= factor * aug[rank][j];
        }
        ++rank;
    }
    if (rank < cols) throw std::invalid_argument("in_lattice_image: columns not independent");
    // Inconsistent rows mean x is outside the rational span.
    for (std::size_t i = rank; i < rows; ++i)
        if (aug[i][cols] != 0) return false;
    // Unique rational solution: integral iff x is in the lattice image.
    for (std::size_t row = 0; row < rank; ++row)
        if (boost::multiprecision::denominator(aug[row][cols]) != 1) return false;
    return true;
}

std::vector<long long> admissible_residues(long long W, const std::vector<long long>& shifts) {
    std::vector<long long> out;
    for (long long a = 1; a <= W; ++a) {
        bool ok = true;
        for (long long h : shifts) {
            long long v = (a + h) % W;
            if (v < 0) v += W;
            if (std::gcd(v, W) != 1) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(a);
    }
    return out;
}

} // namespace oracle
