#include "sievekit/torus.hpp"

#include "sievekit/errors.hpp"
#include "sievekit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace sievekit {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

double frac_unit(long double x) {
    long double r = x - std::floor(x);
    if (r >= 1.0L) r -= 1.0L;
    if (r < 0.0L) r += 1.0L;
    return static_cast<double>(r);
}

} // namespace

PolynomialOrbit PolynomialOrbit::make(std::vector<std::vector<double>> alpha) {
    if (alpha.empty()) throw precondition_error("orbit needs at least one coordinate");
    const std::size_t cols = alpha[0].size();
    if (cols < 2) throw precondition_error("orbit needs degree at least 1");
    for (auto& row : alpha) {
        if (row.size() != cols)
            throw precondition_error("orbit coefficient rows must have equal length");
        for (double& a : row) a = frac_unit(a);
    }
    PolynomialOrbit orbit;
    orbit.D = static_cast<int>(alpha.size());
    orbit.s = static_cast<int>(cols) - 1;
    orbit.alpha = std::move(alpha);
    return orbit;
}

std::vector<double> PolynomialOrbit::point(long long n) const {
    std::vector<double> out(static_cast<std::size_t>(D));
    for (int j = 0; j < D; ++j) {
        const auto& row = alpha[static_cast<std::size_t>(j)];
        // Horner with mod-1 reduction at each step: multiplying a unit-range
        // value by the integer n keeps the fractional part exact and the
        // intermediate magnitudes at |n|, not |n|^s.
        long double h = row[static_cast<std::size_t>(s)];
        for (int i = s - 1; i >= 0; --i) {
            h = h * static_cast<long double>(n) + row[static_cast<std::size_t>(i)];
            h -= std::floor(h);
        }
        out[static_cast<std::size_t>(j)] = frac_unit(h);
    }
    return out;
}

double Trapezoid::operator()(double x) const {
    double t = frac_unit(static_cast<long double>(x) - center);
    double dist = std::min(t, 1.0 - t);
    double v = (width / 2 + margin - dist) / margin;
    return std::clamp(v, 0.0, 1.0);
}

TorusFunction TorusFunction::fourier(int D, std::vector<FourierTerm> terms) {
    if (D < 1) throw precondition_error("torus dimension must be positive");
    double lip = 0;
    for (const auto& term : terms) {
        if (term.freq.size() != static_cast<std::size_t>(D))
            throw precondition_error("frequency vector dimension mismatch");
        double l1 = 0;
        for (long long k : term.freq) l1 += static_cast<double>(std::llabs(k));
        lip += kTwoPi * std::abs(term.amplitude) * l1;
    }
    TorusFunction f;
    f.kind = Kind::Fourier;
    f.D = D;
    f.terms = std::move(terms);
    f.lipschitz_bound = lip;
    return f;
}

TorusFunction TorusFunction::trapezoid_product(std::vector<Trapezoid> traps) {
    if (traps.empty()) throw precondition_error("trapezoid product needs a factor");
    double lip = 0;
    for (const auto& t : traps) {
        if (!(t.width > 0.0) || !(t.margin > 0.0))
            throw precondition_error("trapezoid needs positive width and margin");
        lip += 1.0 / t.margin;
    }
    TorusFunction f;
    f.kind = Kind::TrapezoidProduct;
    f.D = static_cast<int>(traps.size());
    f.traps = std::move(traps);
    f.lipschitz_bound = lip;
    return f;
}

double TorusFunction::operator()(const std::vector<double>& x) const {
    if (x.size() != static_cast<std::size_t>(D))
        throw precondition_error("torus point dimension mismatch");
    if (kind == Kind::Fourier) {
        double acc = 0;
        for (const auto& term : terms) {
            double phase = 0;
            for (std::size_t j = 0; j < x.size(); ++j)
                phase += static_cast<double>(term.freq[j]) * x[j];
            const std::complex<double> e(std::cos(kTwoPi * phase), std::sin(kTwoPi * phase));
            acc += (term.amplitude * e).real();
        }
        return acc;
    }
    double prod = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) prod *= traps[j](x[j]);
    return prod;
}

double evaluate(const NilsequenceSpec& spec, long long n) {
    if (spec.orbit.D != spec.function.D)
        throw precondition_error("orbit and function dimensions differ");
    return spec.function(spec.orbit.point(n));
}

EquidistributionReport equidistribution_diagnostic(const PolynomialOrbit& orbit, long long N,
                                                   double eta, long long freq_cutoff,
                                                   int threads) {
    if (!(eta > 0.0 && eta <= 1.0)) throw precondition_error("eta must lie in (0, 1]");
    if (N < 1 || static_cast<double>(N) * eta < 1.0 - 1e-12)
        throw precondition_error("need N >= 1/eta");
    if (freq_cutoff < 1) throw precondition_error("frequency cutoff must be positive");

    const int D = orbit.D;
    const long long side = 2 * freq_cutoff + 1;
    __int128 grid = 1;
    for (int j = 0; j < D; ++j) {
        grid *= side;
        if (grid > 200'000) throw budget_error("too many frequency vectors");
    }
    const long long n_freqs = static_cast<long long>(grid); // includes the zero vector
    const long long q_max = static_cast<long long>(1.0 / eta);
    if (static_cast<__int128>(n_freqs) * N * (q_max + 1) > 4'000'000'000LL)
        throw budget_error("equidistribution scan too large");

    // orbit points, flattened [n][j]
    std::vector<double> g(static_cast<std::size_t>(N) * static_cast<std::size_t>(D));
    for (long long n = 1; n <= N; ++n) {
        const auto p = orbit.point(n);
        for (int j = 0; j < D; ++j)
            g[static_cast<std::size_t>(n - 1) * D + static_cast<std::size_t>(j)] = p[static_cast<std::size_t>(j)];
    }

    auto decode = [&](long long idx) {
        std::vector<long long> k(static_cast<std::size_t>(D));
        for (int j = D - 1; j >= 0; --j) {
            k[static_cast<std::size_t>(j)] = idx % side - freq_cutoff;
            idx /= side;
        }
        return k;
    };

    struct Best {
        double max_abs = -1;
        long long freq_idx = -1;
        long long step = 0;
        long long offset = 0;
        long long length = 0;
    };
    const double min_len = eta * static_cast<double>(N) - 1e-9;
    auto parts = map_chunks<Best>(
        0, n_freqs, 8, threads, [&](std::size_t, std::int64_t lo, std::int64_t hi) {
            Best best;
            std::vector<std::complex<double>> z(static_cast<std::size_t>(N));
            for (std::int64_t idx = lo; idx < hi; ++idx) {
                const auto k = decode(idx);
                bool zero = true;
                for (long long kj : k) zero = zero && kj == 0;
                if (zero) continue;
                for (long long n = 1; n <= N; ++n) {
                    double phase = 0;
                    for (int j = 0; j < D; ++j)
                        phase += static_cast<double>(k[static_cast<std::size_t>(j)]) *
                                 g[static_cast<std::size_t>(n - 1) * D + static_cast<std::size_t>(j)];
                    z[static_cast<std::size_t>(n - 1)] =
                        std::complex<double>(std::cos(kTwoPi * phase), std::sin(kTwoPi * phase));
                }
                for (long long q = 1; q <= q_max; ++q) {
                    for (long long r = 1; r <= q; ++r) {
                        std::complex<double> sum(0, 0);
                        long long len = 0;
                        for (long long n = r; n <= N; n += q) {
                            sum += z[static_cast<std::size_t>(n - 1)];
                            ++len;
                        }
                        if (static_cast<double>(len) < min_len) continue;
                        const double val = std::abs(sum) / static_cast<double>(len);
                        if (val > best.max_abs) {
                            best.max_abs = val;
                            best.freq_idx = idx;
                            best.step = q;
                            best.offset = r;
                            best.length = len;
                        }
                    }
                }
            }
            return best;
        });

    Best overall;
    for (const auto& part : parts)
        if (part.max_abs > overall.max_abs) overall = part;

    EquidistributionReport rep;
    rep.eta = eta;
    if (overall.freq_idx >= 0) {
        rep.max_abs = overall.max_abs;
        rep.witness_freq = decode(overall.freq_idx);
        rep.witness_step = overall.step;
        rep.witness_offset = overall.offset;
        rep.witness_length = overall.length;
    }
    rep.flagged = rep.max_abs > eta;
    return rep;
}

NilsequenceSpec trapezoid_bohr_function(const std::vector<double>& alpha, double center,
                                        double width, double margin) {
    if (alpha.empty()) throw precondition_error("alpha must be nonempty");
    if (!(width > 0.0) || !(margin > 0.0))
        throw precondition_error("trapezoid needs positive width and margin");
    std::vector<std::vector<double>> rows;
    rows.reserve(alpha.size());
    for (double a : alpha) rows.push_back({0.0, a});
    std::vector<Trapezoid> traps(alpha.size(), Trapezoid{center, width, margin});

    NilsequenceSpec spec;
    spec.orbit = PolynomialOrbit::make(std::move(rows));
    spec.function = TorusFunction::trapezoid_product(std::move(traps));
    spec.claimed_dim = static_cast<int>(alpha.size());
    spec.claimed_height = spec.function.lipschitz_bound;
    spec.claimed_eta = 0;
    spec.claimed_scale = 0;
    return spec;
}

} // namespace sievekit
