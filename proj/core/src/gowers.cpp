#include "sievekit/gowers.hpp"

#include "sievekit/errors.hpp"
#include "sievekit/parallel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <mutex>
#include <random>

namespace sievekit {

namespace {

constexpr long long kOpBudget = 1'000'000'000;

long long mod_pos(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

// N^e, saturating above the budget so comparisons stay safe.
long long pow_capped(long long N, int e) {
    __int128 v = 1;
    for (int i = 0; i < e; ++i) {
        v *= N;
        if (v > kOpBudget) return kOpBudget + 1;
    }
    return static_cast<long long>(v);
}

// 2^k-th power of the U^k norm, exact recursion on Delta_h f. Values are
// nonnegative reals at every level.
long double u_pow(const std::vector<std::complex<double>>& v, int k) {
    const std::size_t N = v.size();
    if (k == 1) {
        std::complex<long double> mean(0, 0);
        for (const auto& z : v) mean += std::complex<long double>(z.real(), z.imag());
        mean /= static_cast<long double>(N);
        return mean.real() * mean.real() + mean.imag() * mean.imag();
    }
    long double acc = 0;
    std::vector<std::complex<double>> diff(N);
    for (std::size_t h = 0; h < N; ++h) {
        for (std::size_t x = 0; x < N; ++x) {
            std::size_t y = x + h;
            if (y >= N) y -= N;
            diff[x] = v[y] * std::conj(v[x]);
        }
        acc += u_pow(diff, k - 1);
    }
    return acc / static_cast<long double>(N);
}

long double u_pow_top(const std::vector<std::complex<double>>& v, int k, int threads) {
    const std::size_t N = v.size();
    if (k == 1) return u_pow(v, 1);
    auto parts = map_chunks<long double>(
        0, static_cast<std::int64_t>(N), 64, threads,
        [&](std::size_t, std::int64_t lo, std::int64_t hi) {
            long double acc = 0;
            std::vector<std::complex<double>> diff(N);
            for (std::int64_t h = lo; h < hi; ++h) {
                for (std::size_t x = 0; x < N; ++x) {
                    std::size_t y = x + static_cast<std::size_t>(h);
                    if (y >= N) y -= N;
                    diff[x] = v[y] * std::conj(v[x]);
                }
                acc += u_pow(diff, k - 1);
            }
            return acc;
        });
    long double acc = 0;
    for (long double p : parts) acc += p;
    return acc / static_cast<long double>(N);
}

// Definitional U^2 average: E_{x,h1,h2} f(x) conj(f(x+h1)) conj(f(x+h2)) f(x+h1+h2).
long double u2_direct(const std::vector<std::complex<double>>& v, int threads) {
    const std::size_t N = v.size();
    auto parts = map_chunks<long double>(
        0, static_cast<std::int64_t>(N), 16, threads,
        [&](std::size_t, std::int64_t lo, std::int64_t hi) {
            long double acc = 0;
            for (std::int64_t x = lo; x < hi; ++x) {
                std::complex<long double> inner(0, 0);
                for (std::size_t h1 = 0; h1 < N; ++h1) {
                    std::size_t a = static_cast<std::size_t>(x) + h1;
                    if (a >= N) a -= N;
                    std::complex<double> fa = std::conj(v[a]);
                    for (std::size_t h2 = 0; h2 < N; ++h2) {
                        std::size_t b = static_cast<std::size_t>(x) + h2;
                        if (b >= N) b -= N;
                        std::size_t c = a + h2;
                        if (c >= N) c -= N;
                        std::complex<double> term =
                            v[static_cast<std::size_t>(x)] * fa * std::conj(v[b]) * v[c];
                        inner += std::complex<long double>(term.real(), term.imag());
                    }
                }
                acc += inner.real();
            }
            return acc;
        });
    long double acc = 0;
    for (long double p : parts) acc += p;
    long double scale = static_cast<long double>(N);
    return acc / (scale * scale * scale);
}

double root_2k(long double pow_value, int k) {
    if (pow_value < 0) pow_value = 0; // cancellation noise
    return static_cast<double>(std::pow(pow_value, 1.0L / static_cast<long double>(1LL << k)));
}

std::mutex fftw_plan_mutex;

} // namespace

CyclicFunction CyclicFunction::make(std::vector<std::complex<double>> v) {
    if (v.empty()) throw precondition_error("cyclic function needs at least one value");
    CyclicFunction f;
    f.N = static_cast<long long>(v.size());
    f.values = std::move(v);
    return f;
}

CyclicFunction CyclicFunction::constant(long long N, std::complex<double> c) {
    if (N < 1) throw precondition_error("cyclic function needs at least one value");
    CyclicFunction f;
    f.N = N;
    f.values.assign(static_cast<std::size_t>(N), c);
    return f;
}

NormResult gowers_norm_cyclic(const CyclicFunction& f, int k, int threads) {
    if (k < 1) throw precondition_error("gowers norm needs k >= 1");
    if (f.N < 1 || f.values.size() != static_cast<std::size_t>(f.N))
        throw precondition_error("cyclic function length must equal its modulus");

    NormResult result;
    result.k = k;
    if (k == 1) {
        result.method = NormMethod::Direct;
        result.value = root_2k(u_pow(f.values, 1), 1);
        return result;
    }
    if (k == 2 && pow_capped(f.N, 3) <= kOpBudget) {
        result.method = NormMethod::Direct;
        result.value = root_2k(u2_direct(f.values, threads), 2);
        return result;
    }
    if (pow_capped(f.N, k) > kOpBudget)
        throw budget_error("gowers norm budget: N^k too large");
    result.method = NormMethod::Recursive;
    result.value = root_2k(u_pow_top(f.values, k, threads), k);
    return result;
}

NormResult gowers_u2_fft(const CyclicFunction& f) {
    if (f.N < 1 || f.values.size() != static_cast<std::size_t>(f.N))
        throw precondition_error("cyclic function length must equal its modulus");
    if (f.N > std::numeric_limits<int>::max())
        throw budget_error("modulus too large for the FFT path");
    const int n = static_cast<int>(f.N);

    fftw_complex* in = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(n));
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        plan = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    for (int i = 0; i < n; ++i) {
        in[i][0] = f.values[static_cast<std::size_t>(i)].real();
        in[i][1] = f.values[static_cast<std::size_t>(i)].imag();
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }
    long double quartic = 0;
    for (int i = 0; i < n; ++i) {
        long double sq = static_cast<long double>(out[i][0]) * out[i][0] +
                         static_cast<long double>(out[i][1]) * out[i][1];
        quartic += sq * sq;
    }
    fftw_free(in);
    fftw_free(out);

    NormResult result;
    result.k = 2;
    result.method = NormMethod::Fft;
    result.value = static_cast<double>(std::pow(quartic, 0.25L) / static_cast<long double>(n));
    return result;
}

NormResult gowers_norm_interval(const std::vector<std::complex<double>>& f, int k,
                                long long modulus, int threads) {
    const long long N = static_cast<long long>(f.size());
    if (N < 1) throw precondition_error("interval function needs at least one value");
    const long long M = modulus == 0 ? 2 * N + 1 : modulus;
    if (M < 2 * N + 1)
        throw precondition_error("interval norm modulus must be at least 2N+1");

    CyclicFunction g = CyclicFunction::constant(M, 0.0);
    CyclicFunction ind = CyclicFunction::constant(M, 0.0);
    for (long long i = 0; i < N; ++i) {
        g.values[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(i)];
        ind.values[static_cast<std::size_t>(i)] = 1.0;
    }
    NormResult num = gowers_norm_cyclic(g, k, threads);
    NormResult den = gowers_norm_cyclic(ind, k, threads);
    NormResult result;
    result.k = k;
    result.method = num.method;
    result.value = num.value / den.value;
    return result;
}

double lp_norm(const std::vector<std::complex<double>>& f, double p) {
    if (f.empty()) throw precondition_error("lp norm of an empty function");
    if (p < 1.0) throw precondition_error("lp norm needs p >= 1");
    long double acc = 0;
    for (const auto& z : f) acc += std::pow(static_cast<long double>(std::abs(z)), p);
    acc /= static_cast<long double>(f.size());
    return static_cast<double>(std::pow(acc, 1.0L / p));
}

DeviationReport linear_forms_deviation(const CyclicFunction& nu, const AffineSystem& sys,
                                       long long samples) {
    if (!complexity(sys).has_value())
        throw precondition_error("system must have finite complexity");
    const long long N = nu.N;
    const int d = sys.d;

    DeviationReport rep;
    const long long exact_budget = 20'000'000;
    __int128 total = 1;
    for (int j = 0; j < d; ++j) {
        total *= N;
        if (total > exact_budget) break;
    }

    auto product_at = [&](const std::vector<long long>& x) {
        std::complex<long double> prod(1.0L, 0.0L);
        for (const auto& form : sys.forms) {
            const auto z = nu.values[static_cast<std::size_t>(mod_pos(form.eval(x), N))];
            prod *= std::complex<long double>(z.real(), z.imag());
        }
        return prod;
    };

    if (total <= exact_budget) {
        rep.exact = true;
        rep.samples = static_cast<long long>(total);
        std::complex<long double> sum(0, 0);
        std::vector<long long> x(static_cast<std::size_t>(d), 0);
        for (;;) {
            sum += product_at(x);
            int j = d - 1;
            while (j >= 0 && x[static_cast<std::size_t>(j)] == N - 1) {
                x[static_cast<std::size_t>(j)] = 0;
                --j;
            }
            if (j < 0) break;
            ++x[static_cast<std::size_t>(j)];
        }
        sum /= static_cast<long double>(total);
        rep.value = static_cast<double>(std::abs(sum - std::complex<long double>(1, 0)));
        return rep;
    }

    if (samples < 2) throw precondition_error("monte carlo path needs at least 2 samples");
    rep.exact = false;
    rep.samples = samples;
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<long long> coord(0, N - 1);
    std::vector<long long> x(static_cast<std::size_t>(d));
    std::complex<long double> sum(0, 0);
    std::vector<std::complex<long double>> draws;
    draws.reserve(static_cast<std::size_t>(samples));
    for (long long s = 0; s < samples; ++s) {
        for (int j = 0; j < d; ++j) x[static_cast<std::size_t>(j)] = coord(rng);
        const auto z = product_at(x);
        draws.push_back(z);
        sum += z;
    }
    const std::complex<long double> mean = sum / static_cast<long double>(samples);
    long double var = 0;
    for (const auto& z : draws) {
        const long double dev = std::abs(z - mean);
        var += dev * dev;
    }
    var /= static_cast<long double>(samples - 1);
    rep.value = static_cast<double>(std::abs(mean - std::complex<long double>(1, 0)));
    rep.std_error = static_cast<double>(
        std::sqrt(var / static_cast<long double>(samples)));
    return rep;
}

} // namespace sievekit
