#include "sievekit/gowers.hpp"
#include "sievekit/indicators.hpp"
#include "sievekit/linear_systems.hpp"
#include "sievekit/majorants.hpp"
#include "sievekit/primes.hpp"
#include "sievekit/torus.hpp"

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

using namespace sievekit;

namespace {

const FactorTable& shared_table() {
    static FactorTable table = FactorTable::build(7'000'000);
    return table;
}

std::vector<std::complex<double>> random_values(long long n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<std::complex<double>> v(static_cast<size_t>(n));
    for (auto& z : v) z = {unif(rng), unif(rng)};
    return v;
}

void BM_FactorTableBuild(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(FactorTable::build(state.range(0)));
}
BENCHMARK(BM_FactorTableBuild)->Arg(1'000'000)->Arg(10'000'000)->Unit(benchmark::kMillisecond);

void BM_LocalFactorExact(benchmark::State& state) {
    const auto sys = AffineSystem::make({{{1, 0}, 0}, {{1, 1}, 0}, {{1, 2}, 0}, {{1, 3}, 0}});
    const auto primes = primes_up_to(state.range(0));
    for (auto _ : state)
        for (long long p : primes) benchmark::DoNotOptimize(local_factor_exact(sys, p));
}
BENCHMARK(BM_LocalFactorExact)->Arg(100)->Arg(1000);

void BM_SingularSeries(benchmark::State& state) {
    const auto sys = AffineSystem::make({{{1}, 0}, {{1}, 2}});
    for (auto _ : state) benchmark::DoNotOptimize(singular_series(sys, state.range(0)));
}
BENCHMARK(BM_SingularSeries)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_LambdaChiTuple(benchmark::State& state) {
    const auto& table = shared_table();
    const auto spec =
        MajorantSpec::make(0.05, 6, 5, ShiftTuple::make({0, 2}), cosine_cutoff(), 1'000'000);
    long long n = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(lambda_chi_tuple(n, spec, table));
        n = n % 1'000'000 + 1;
    }
}
BENCHMARK(BM_LambdaChiTuple);

void BM_EnumerateWeights(benchmark::State& state) {
    const auto& table = shared_table();
    const auto theta = WeightedIndicator::theta2_defaults();
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_weights(theta, state.range(0), table));
}
BENCHMARK(BM_EnumerateWeights)->Arg(100'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_GowersCyclic(benchmark::State& state) {
    const auto f = CyclicFunction::make(random_values(state.range(1), 7));
    for (auto _ : state)
        benchmark::DoNotOptimize(gowers_norm_cyclic(f, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_GowersCyclic)->Args({2, 256})->Args({3, 128})->Args({3, 256})
    ->Unit(benchmark::kMillisecond);

void BM_GowersU2Fft(benchmark::State& state) {
    const auto f = CyclicFunction::make(random_values(state.range(0), 7));
    for (auto _ : state) benchmark::DoNotOptimize(gowers_u2_fft(f));
}
BENCHMARK(BM_GowersU2Fft)->Arg(256)->Arg(4096)->Arg(65536);

void BM_EquidistributionDiagnostic(benchmark::State& state) {
    const auto orbit = PolynomialOrbit::make({{0.0, 0.41421356237309515}});
    for (auto _ : state)
        benchmark::DoNotOptimize(equidistribution_diagnostic(orbit, state.range(0), 0.1, 16));
}
BENCHMARK(BM_EquidistributionDiagnostic)->Arg(10'000)->Arg(100'000)
    ->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
