#include "sievekit/counting.hpp"

#include "sievekit/errors.hpp"
#include "sievekit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>

namespace sievekit {

namespace {

long long mod_pos(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

// reduce into [1, m]
long long mod_one_based(long long a, long long m) {
    return mod_pos(a - 1, m) + 1;
}

std::string point_string(const std::vector<long long>& x) {
    std::ostringstream os;
    os << "(";
    for (std::size_t j = 0; j < x.size(); ++j) os << (j ? ", " : "") << x[j];
    os << ")";
    return os.str();
}

// value range of an affine form over the bounding box
std::pair<long long, long long> form_range(const AffineForm& form, const LatticeRegion& region) {
    __int128 lo = form.constant, hi = form.constant;
    for (std::size_t j = 0; j < form.coeffs.size(); ++j) {
        const __int128 c = form.coeffs[j];
        lo += c * (c >= 0 ? region.box[j][0] : region.box[j][1]);
        hi += c * (c >= 0 ? region.box[j][1] : region.box[j][0]);
    }
    if (lo < INT64_MIN || hi > INT64_MAX) throw budget_error("form values overflow");
    return {static_cast<long long>(lo), static_cast<long long>(hi)};
}

struct Neumaier {
    double s = 0, comp = 0;
    void add(double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            comp += (s - t) + x;
        else
            comp += (x - t) + s;
        s = t;
    }
    double total() const { return s + comp; }
};

constexpr unsigned long long kPointBudget = 200'000'000ULL;

long long lead_chunk(const LatticeRegion& region, unsigned long long box_points) {
    const unsigned long long lead_len =
        static_cast<unsigned long long>(region.box[0][1] - region.box[0][0] + 1);
    const unsigned long long per_lead = std::max<unsigned long long>(1, box_points / lead_len);
    return std::max<long long>(1, static_cast<long long>((1 << 16) / per_lead));
}

// theta at scale*m + offset, zeroed on arguments with some x + h_j sharing a
// factor with W when `rough` is set
double theta_at(const WeightedIndicator& theta, const FactorTable& table, long long x,
                bool rough, long long W, const ShiftTuple& tuple) {
    if (rough)
        for (long long h : tuple.shifts)
            if (std::gcd(mod_pos(x + h, W), W) != 1) return 0.0;
    return theta.evaluate(x, table);
}

struct FormWeights {
    bool tabulated = false;
    long long lo = 0;
    std::vector<double> vals; // weight of lattice value m at vals[m - lo]
};

// Precompute factor * theta(scale*m + offset) along a form's value range so
// lattice scans become array lookups. Falls back to per-point evaluation for
// oversized or out-of-table ranges.
FormWeights tabulate(const WeightedIndicator& theta, const FactorTable& table, long long vmin,
                     long long vmax, bool rough, long long W, const ShiftTuple& tuple,
                     long long scale, long long offset, double factor) {
    FormWeights fw;
    if (vmax < vmin) {
        fw.tabulated = true;
        fw.lo = vmin;
        return fw;
    }
    const __int128 span = static_cast<__int128>(vmax) - vmin + 1;
    const __int128 amin = static_cast<__int128>(scale) * vmin + offset;
    const __int128 amax = static_cast<__int128>(scale) * vmax + offset;
    if (span > 10'000'000 || amin < 1 ||
        amax > static_cast<__int128>(table.limit()))
        return fw;
    fw.tabulated = true;
    fw.lo = vmin;
    fw.vals.resize(static_cast<std::size_t>(span));
    for (long long m = vmin; m <= vmax; ++m)
        fw.vals[static_cast<std::size_t>(m - vmin)] =
            factor * theta_at(theta, table, scale * m + offset, rough, W, tuple);
    return fw;
}

struct SideResult {
    double sum = 0;
    unsigned long long count = 0; // points where every factor is nonzero
};

// sum over the region of prod_i factor * theta(scale*psi_i(n) + offset_i)
SideResult weighted_region_sum(const AffineSystem& sys, const LatticeRegion& region,
                               const WeightedIndicator& theta, const FactorTable& table,
                               bool rough, long long W, const ShiftTuple& tuple, long long scale,
                               const std::vector<long long>& offsets, double factor,
                               int threads) {
    SideResult result;
    if (region.box_empty()) return result;
    const unsigned long long box_points = region.box_lattice_count();
    if (box_points > kPointBudget) throw budget_error("region too large");

    const int t = sys.t();
    std::vector<FormWeights> tabs(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i) {
        const auto [vmin, vmax] = form_range(sys.forms[static_cast<std::size_t>(i)], region);
        tabs[static_cast<std::size_t>(i)] =
            tabulate(theta, table, vmin, vmax, rough, W, tuple, scale,
                     offsets[static_cast<std::size_t>(i)], factor);
    }

    struct Part {
        double sum = 0;
        unsigned long long count = 0;
    };
    auto parts = map_chunks<Part>(
        region.box[0][0], region.box[0][1] + 1, lead_chunk(region, box_points), threads,
        [&](std::size_t, std::int64_t lo, std::int64_t hi) {
            Part part;
            Neumaier acc;
            scan_lattice(region, lo, hi - 1, [&](const std::vector<long long>& x) {
                double prod = 1.0;
                for (int i = 0; i < t; ++i) {
                    const long long m = sys.forms[static_cast<std::size_t>(i)].eval(x);
                    const auto& tab = tabs[static_cast<std::size_t>(i)];
                    const double v =
                        tab.tabulated
                            ? tab.vals[static_cast<std::size_t>(m - tab.lo)]
                            : factor * theta_at(theta, table, scale * m +
                                                offsets[static_cast<std::size_t>(i)],
                                                rough, W, tuple);
                    if (v == 0.0) {
                        prod = 0.0;
                        break;
                    }
                    prod *= v;
                }
                if (prod != 0.0) {
                    ++part.count;
                    acc.add(prod);
                }
            });
            part.sum = acc.total();
            return part;
        });
    std::vector<double> sums;
    sums.reserve(parts.size());
    for (const auto& part : parts) {
        result.count += part.count;
        sums.push_back(part.sum);
    }
    result.sum = compensated_sum(sums);
    return result;
}

} // namespace

ValueTable ValueTable::one_based(const std::vector<double>& w) {
    if (w.size() < 2) throw precondition_error("weight array needs entries beyond index 0");
    ValueTable tab;
    tab.lo = 1;
    tab.v.assign(w.begin() + 1, w.end());
    return tab;
}

double count_T(const AffineSystem& sys, const std::vector<ValueTable>& weights,
               const LatticeRegion& region, int threads) {
    if (sys.d != region.dim())
        throw precondition_error("system dimension must match region dimension");
    if (weights.size() != static_cast<std::size_t>(sys.t()) && weights.size() != 1)
        throw precondition_error("need one weight table per form, or a single shared table");
    if (region.box_empty()) return 0.0;
    const unsigned long long box_points = region.box_lattice_count();
    if (box_points > kPointBudget) throw budget_error("region too large");

    const int t = sys.t();
    const bool shared = weights.size() == 1;
    auto parts = map_chunks<double>(
        region.box[0][0], region.box[0][1] + 1, lead_chunk(region, box_points), threads,
        [&](std::size_t, std::int64_t lo, std::int64_t hi) {
            Neumaier acc;
            scan_lattice(region, lo, hi - 1, [&](const std::vector<long long>& x) {
                double prod = 1.0;
                for (int i = 0; i < t; ++i) {
                    const long long v = sys.forms[static_cast<std::size_t>(i)].eval(x);
                    const auto& tab = weights[shared ? 0 : static_cast<std::size_t>(i)];
                    if (!tab.covers(v))
                        throw precondition_error(
                            "form " + std::to_string(i + 1) + " value " + std::to_string(v) +
                            " at " + point_string(x) + " is outside its weight table [" +
                            std::to_string(tab.lo) + ", " + std::to_string(tab.hi()) + "]");
                    prod *= tab.at(v);
                    if (prod == 0.0) break;
                }
                acc.add(prod);
            });
            return acc.total();
        });
    return compensated_sum(parts);
}

WTrickDecomposition w_trick_decompose(const AffineSystem& sys, const ShiftTuple& tuple,
                                      long long w, const LatticeRegion& region) {
    if (w < 2) throw precondition_error("w must be at least 2");
    if (sys.d != region.dim())
        throw precondition_error("system dimension must match region dimension");
    const long long W = primorial(w);
    __int128 grid = 1;
    for (int j = 0; j < sys.d; ++j) {
        grid *= W;
        if (grid > 100'000'000) throw budget_error("residue grid W^d too large");
    }

    WTrickDecomposition dec;
    dec.w = w;
    dec.W = W;
    dec.tuple = tuple;

    std::vector<long long> a(static_cast<std::size_t>(sys.d), 1);
    for (;;) {
        bool ok = true;
        for (const auto& form : sys.forms) {
            const long long va = form.eval(a);
            for (long long h : tuple.shifts)
                if (std::gcd(mod_pos(va + h, W), W) != 1) {
                    ok = false;
                    break;
                }
            if (!ok) break;
        }
        if (ok) {
            WTrickClass cls;
            cls.a = a;
            std::vector<AffineForm> reduced;
            reduced.reserve(sys.forms.size());
            for (const auto& form : sys.forms) {
                const long long va = form.eval(a);
                const long long c = mod_one_based(va, W);
                cls.c.push_back(c);
                AffineForm rf;
                rf.coeffs = form.coeffs;
                rf.constant = (va - c) / W;
                reduced.push_back(std::move(rf));
            }
            cls.reduced = AffineSystem::make(std::move(reduced));
            cls.region = scaled_preimage(region, W, a);
            dec.classes.push_back(std::move(cls));
        }
        int j = sys.d - 1;
        while (j >= 0 && a[static_cast<std::size_t>(j)] == W) {
            a[static_cast<std::size_t>(j)] = 1;
            --j;
        }
        if (j < 0) break;
        ++a[static_cast<std::size_t>(j)];
    }
    return dec;
}

IdentityCheckResult w_trick_identity_check(const AffineSystem& sys, const ShiftTuple& tuple,
                                           long long w, const LatticeRegion& region,
                                           const WeightedIndicator& theta,
                                           const FactorTable& table, int threads) {
    if (theta.effective_tuple().shifts != tuple.shifts)
        throw precondition_error("tuple must match the weight's shift tuple");

    const auto dec = w_trick_decompose(sys, tuple, w, region);
    const long long W = dec.W;
    const long long phi = euler_phi(W);
    const int t = sys.t();
    const double r = theta.r_exponent();
    const std::vector<long long> zero_offsets(static_cast<std::size_t>(t), 0);

    const SideResult lhs =
        weighted_region_sum(sys, region, theta, table, true, W, tuple, 1, zero_offsets, 1.0,
                            threads);

    const double class_factor = std::pow(static_cast<double>(phi) / W, r);
    std::vector<double> class_sums;
    class_sums.reserve(dec.classes.size());
    unsigned long long rhs_count = 0;
    for (const auto& cls : dec.classes) {
        const SideResult part = weighted_region_sum(cls.reduced, cls.region, theta, table, false,
                                                    W, tuple, W, cls.c, class_factor, threads);
        class_sums.push_back(part.sum);
        rhs_count += part.count;
    }
    const double rhs =
        std::pow(static_cast<double>(W) / phi, r * t) * compensated_sum(class_sums);

    IdentityCheckResult res;
    res.lhs = lhs.sum;
    res.rhs = rhs;
    res.residual = std::fabs(lhs.sum - rhs);
    if (theta.indicator_only) {
        res.exact_arithmetic = true;
        const long long rt_twice = llround(2.0 * r) * t;
        if (rt_twice % 2 == 0) {
            const unsigned rt = static_cast<unsigned>(rt_twice / 2);
            const Rat lhs_rat(static_cast<Int>(lhs.count));
            const Rat rhs_rat = rat_pow(Rat(W, phi), rt) *
                                (rat_pow(Rat(phi, W), rt) * Rat(static_cast<Int>(rhs_count)));
            res.exact_equal = lhs_rat == rhs_rat;
            res.lhs = static_cast<double>(lhs.count);
            res.rhs = to_double(rhs_rat);
            Rat diff = lhs_rat - rhs_rat;
            if (diff < 0) diff = -diff;
            res.residual = to_double(diff);
        } else {
            // half-integer exponent: the scalar factors are exact mutual
            // inverses, so the sides agree exactly iff the counts do
            res.exact_equal = lhs.count == rhs_count;
            res.lhs = static_cast<double>(lhs.count);
            res.rhs = static_cast<double>(rhs_count);
            res.residual = std::fabs(res.lhs - res.rhs);
        }
    }
    return res;
}

DensityReport density_report(const AffineSystem& sys, const WeightedIndicator& theta,
                             const std::vector<ScaledRegion>& regions, const FactorTable& table,
                             long long cutoff_prime, int threads) {
    const AffineSystem shifted = shifted_system(sys, theta.effective_tuple());
    std::vector<AffineForm> uniq;
    for (const auto& form : shifted.forms) {
        bool seen = false;
        for (const auto& kept : uniq)
            if (kept.coeffs == form.coeffs && kept.constant == form.constant) {
                seen = true;
                break;
            }
        if (!seen) uniq.push_back(form);
    }
    const auto series = singular_series(AffineSystem::make(std::move(uniq)), cutoff_prime);

    DensityReport rep;
    rep.constant = static_cast<double>(series.value);
    rep.constant_error = static_cast<double>(series.error_bound);
    for (const auto& scaled : regions) {
        if (sys.d != scaled.region.dim())
            throw precondition_error("system dimension must match region dimension");
        const std::vector<long long> zero_offsets(static_cast<std::size_t>(sys.t()), 0);
        const SideResult side = weighted_region_sum(sys, scaled.region, theta, table, false, 1,
                                                    theta.effective_tuple(), 1, zero_offsets,
                                                    1.0, threads);
        DensityRow row;
        row.N = scaled.N;
        row.T = side.sum;
        const double vol = volume(scaled.region).value;
        row.prediction = rep.constant * vol;
        row.pred_error = rep.constant_error * vol;
        row.ratio = row.prediction != 0.0 ? row.T / row.prediction : 0.0;
        rep.rows.push_back(row);
    }
    return rep;
}

BohrReport bohr_density(const WeightedIndicator& theta, const NilsequenceSpec& xi, long long N,
                        long long W, long long b, const FactorTable& table, int threads) {
    if (N < 1) throw precondition_error("N must be positive");
    if (W < 1) throw precondition_error("W must be positive");
    const double factor =
        std::pow(static_cast<double>(euler_phi(W)) / W, theta.r_exponent());
    if (static_cast<__int128>(W) * N + b > static_cast<__int128>(INT64_MAX))
        throw precondition_error("W*N + b overflows");

    struct Sums {
        double tx = 0, x = 0, t = 0;
    };
    auto parts = map_chunks<Sums>(
        1, N + 1, 1 << 13, threads, [&](std::size_t, std::int64_t lo, std::int64_t hi) {
            Neumaier tx, xs, ts;
            for (std::int64_t n = lo; n < hi; ++n) {
                double xv = evaluate(xi, n);
                if (xv < -1e-9 || xv > 1.0 + 1e-9)
                    throw precondition_error("xi(" + std::to_string(n) +
                                             ") = " + std::to_string(xv) + " outside [0, 1]");
                xv = std::clamp(xv, 0.0, 1.0);
                const double tv = factor * theta.evaluate(W * n + b, table);
                tx.add(tv * xv);
                xs.add(xv);
                ts.add(tv);
            }
            return Sums{tx.total(), xs.total(), ts.total()};
        });
    std::vector<double> txs, xss, tss;
    txs.reserve(parts.size());
    xss.reserve(parts.size());
    tss.reserve(parts.size());
    for (const auto& part : parts) {
        txs.push_back(part.tx);
        xss.push_back(part.x);
        tss.push_back(part.t);
    }
    BohrReport rep;
    rep.mean_theta_xi = compensated_sum(txs) / static_cast<double>(N);
    rep.mean_xi = compensated_sum(xss) / static_cast<double>(N);
    rep.mean_theta = compensated_sum(tss) / static_cast<double>(N);
    rep.degenerate = rep.mean_xi == 0.0;
    rep.delta_hat = rep.degenerate ? 0.0 : rep.mean_theta_xi / rep.mean_xi;
    return rep;
}

} // namespace sievekit
