#include "sievekit/majorants.hpp"

#include "sievekit/errors.hpp"
#include "sievekit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>

namespace sievekit {

namespace {

long long mod_pos(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

bool shifts_coprime_to_W(long long b, const ShiftTuple& tuple, long long W) {
    for (long long h : tuple.shifts)
        if (std::gcd(mod_pos(b + h, W), W) != 1) return false;
    return true;
}

} // namespace

MajorantSpec MajorantSpec::make(double gamma, long long W, long long b, ShiftTuple tuple,
                                SmoothCutoff cutoff, long long N) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw precondition_error("gamma must lie in (0, 1)");
    if (N < 2) throw precondition_error("scale N must be at least 2");
    if (W < 1) throw precondition_error("W must be positive");
    if (b < 0 || b > W) throw precondition_error("residue b must lie in [0, W]");
    if (!shifts_coprime_to_W(b, tuple, W))
        throw precondition_error("b + h_j must be coprime to W for every shift");
    MajorantSpec spec;
    spec.gamma = gamma;
    spec.W = W;
    spec.b = b;
    spec.tuple = std::move(tuple);
    spec.cutoff = std::move(cutoff);
    spec.N = N;
    return spec;
}

double lambda_chi(long long n, double R, const SmoothCutoff& cutoff, const FactorTable& table) {
    if (R <= 1.0) throw precondition_error("lambda_chi: R must exceed 1");
    if (n < 1 || static_cast<std::uint64_t>(n) > table.limit())
        throw precondition_error("lambda_chi: n = " + std::to_string(n) +
                                 " outside the factor table");
    const double logR = std::log(R);
    const double R2 = R * R;
    const auto primes = n == 1 ? std::vector<std::uint64_t>{}
                               : table.distinct_primes(static_cast<std::uint64_t>(n));

    double acc = 0.0;
    auto walk = [&](auto&& self, std::size_t idx, double ell, int sign) -> void {
        acc += sign * cutoff.chi(std::log(ell) / logR);
        for (std::size_t i = idx; i < primes.size(); ++i) {
            const double next = ell * static_cast<double>(primes[i]);
            if (next >= R2) break; // primes ascend, chi vanishes from here on
            self(self, i + 1, next, -sign);
        }
    };
    walk(walk, 0, 1.0, 1);
    return logR * acc * acc;
}

double lambda_chi_tuple(long long n, const MajorantSpec& spec, const FactorTable& table) {
    const double R = spec.R();
    double prod = 1.0;
    for (long long h : spec.tuple.shifts) prod *= lambda_chi(n + h, R, spec.cutoff, table);
    return prod;
}

double majorant_nu(long long n, const MajorantSpec& spec, const FactorTable& table) {
    if (spec.N < 1) throw precondition_error("majorant scale N must be positive");
    const long long m = mod_pos(n - 1, spec.N) + 1;
    const __int128 arg = static_cast<__int128>(spec.W) * m + spec.b;
    if (arg > static_cast<__int128>(INT64_MAX))
        throw precondition_error("majorant argument overflows");
    const double density =
        static_cast<double>(euler_phi(spec.W)) / static_cast<double>(spec.W);
    return std::pow(density, spec.r()) *
           lambda_chi_tuple(static_cast<long long>(arg), spec, table);
}

MajorizationReport majorization_scan(const WeightedIndicator& theta, const MajorantSpec& spec,
                                     long long N, double c, const FactorTable& table,
                                     int threads) {
    if (N != spec.N) throw precondition_error("scan scale must equal the majorant scale");
    if (!(c >= 0.0 && c < 1.0)) throw precondition_error("exponent c must lie in [0, 1)");
    if (theta.effective_tuple().shifts != spec.tuple.shifts)
        throw precondition_error("theta tuple must match the majorant tuple");

    MajorizationReport rep;
    rep.lo = std::max<long long>(
        1, static_cast<long long>(std::ceil(std::pow(static_cast<double>(N), c) - 1e-9)));
    rep.hi = N;
    switch (theta.kind) {
    case WeightKind::Theta1:
        rep.gamma_ok = spec.gamma < 0.05; // roughness exponent 1/10
        break;
    case WeightKind::Theta2:
        rep.gamma_ok = spec.gamma < 0.5 * theta.rho.to_double();
        break;
    default:
        rep.gamma_ok = true;
    }

    const double density =
        static_cast<double>(euler_phi(spec.W)) / static_cast<double>(spec.W);
    const double theta_scale = std::pow(density, theta.r_exponent());

    struct Part {
        double max_ratio = 0;
        long long argmax = 0;
        long long support = 0;
    };
    auto parts = map_chunks<Part>(
        rep.lo, rep.hi + 1, 1 << 13, threads,
        [&](std::size_t, std::int64_t lo, std::int64_t hi) {
            Part part;
            for (std::int64_t n = lo; n < hi; ++n) {
                const double tv = theta.evaluate(spec.W * n + spec.b, table);
                if (tv <= 0.0) continue;
                ++part.support;
                const double nu = majorant_nu(n, spec, table);
                const double ratio = theta_scale * tv / nu;
                if (ratio > part.max_ratio) {
                    part.max_ratio = ratio;
                    part.argmax = n;
                }
            }
            return part;
        });
    for (const auto& part : parts) {
        rep.support_points += part.support;
        if (part.max_ratio > rep.max_ratio) {
            rep.max_ratio = part.max_ratio;
            rep.argmax = part.argmax;
        }
    }
    return rep;
}

CorrelationReport correlation_estimate(const MajorantSpec& spec, const AffineSystem& sys,
                                       const LatticeRegion& region, const FactorTable& table,
                                       int threads) {
    if (sys.d != region.dim())
        throw precondition_error("system dimension must match region dimension");
    if (!complexity(sys).has_value())
        throw precondition_error("system must have finite complexity");

    CorrelationReport rep;
    rep.admissible_ok = shifts_coprime_to_W(spec.b, spec.tuple, spec.W);

    const double vol = volume(region).value;
    const double boost = static_cast<double>(spec.W) / static_cast<double>(euler_phi(spec.W));
    const int rt = spec.r() * sys.t();
    rep.prediction = vol * std::pow(boost, rt) * std::pow(spec.cutoff.c_chi, rt);

    if (region.box_empty()) return rep;
    const unsigned long long box_points = region.box_lattice_count();
    if (box_points > 200'000'000ULL) throw budget_error("region too large for correlation scan");

    const long long lead_lo = region.box[0][0];
    const long long lead_hi = region.box[0][1];
    const unsigned long long per_lead =
        box_points / static_cast<unsigned long long>(lead_hi - lead_lo + 1);
    const long long chunk =
        std::max<long long>(1, (1 << 16) / static_cast<long long>(std::max<unsigned long long>(1, per_lead)));

    struct Part {
        double sum = 0;
        unsigned long long points = 0;
    };
    auto parts = map_chunks<Part>(
        lead_lo, lead_hi + 1, chunk, threads,
        [&](std::size_t, std::int64_t lo, std::int64_t hi) {
            Part part;
            double s = 0.0, comp = 0.0;
            scan_lattice(region, lo, hi - 1, [&](const std::vector<long long>& x) {
                ++part.points;
                double prod = 1.0;
                for (const auto& f : sys.forms) {
                    const __int128 arg = static_cast<__int128>(spec.W) * f.eval(x) + spec.b;
                    if (arg < INT64_MIN || arg > INT64_MAX)
                        throw precondition_error("correlation argument overflows");
                    prod *= lambda_chi_tuple(static_cast<long long>(arg), spec, table);
                    if (prod == 0.0) break;
                }
                const double t = s + prod;
                if (std::abs(s) >= std::abs(prod))
                    comp += (s - t) + prod;
                else
                    comp += (prod - t) + s;
                s = t;
            });
            part.sum = s + comp;
            return part;
        });
    std::vector<double> sums;
    sums.reserve(parts.size());
    for (const auto& part : parts) {
        rep.points += part.points;
        sums.push_back(part.sum);
    }
    rep.sum = compensated_sum(sums);
    rep.ratio = rep.prediction != 0.0 ? rep.sum / rep.prediction : 0.0;
    return rep;
}

} // namespace sievekit
