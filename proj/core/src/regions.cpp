#include "sievekit/regions.hpp"

#include "sievekit/errors.hpp"
#include "sievekit/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

namespace sievekit {

long long floor_div(long long a, long long b) {
    long long q = a / b;
    long long r = a % b;
    return r < 0 ? q - 1 : q;
}

long long ceil_div(long long a, long long b) {
    long long q = a / b;
    long long r = a % b;
    return r > 0 ? q + 1 : q;
}

bool LatticeRegion::box_empty() const {
    for (const auto& iv : box)
        if (iv[1] < iv[0]) return true;
    return false;
}

unsigned long long LatticeRegion::box_lattice_count() const {
    if (box_empty()) return 0;
    unsigned __int128 n = 1;
    for (const auto& iv : box) {
        n *= static_cast<unsigned __int128>(static_cast<__int128>(iv[1]) - iv[0] + 1);
        if (n > static_cast<unsigned __int128>(UINT64_MAX))
            throw budget_error("bounding box has more than 2^64 lattice points");
    }
    return static_cast<unsigned long long>(n);
}

bool LatticeRegion::contains(const std::vector<long long>& x) const {
    if (x.size() != box.size())
        throw precondition_error("point dimension does not match region");
    for (std::size_t j = 0; j < box.size(); ++j)
        if (x[j] < box[j][0] || x[j] > box[j][1]) return false;
    for (const auto& h : cuts) {
        if (h.a.size() != box.size())
            throw precondition_error("halfspace dimension does not match region");
        __int128 s = 0;
        for (std::size_t j = 0; j < x.size(); ++j)
            s += static_cast<__int128>(h.a[j]) * x[j];
        if (s > h.b) return false;
    }
    return true;
}

LatticeRegion LatticeRegion::make_box(std::vector<std::array<long long, 2>> b) {
    LatticeRegion r;
    r.box = std::move(b);
    return r;
}

namespace {

VolumeResult volume_1d(const LatticeRegion& region) {
    Rat lo(region.box[0][0]);
    Rat hi(region.box[0][1]);
    for (const auto& h : region.cuts) {
        long long a = h.a[0];
        if (a == 0) {
            if (h.b < 0) return {0.0, 0.0, true};
        } else if (a > 0) {
            hi = std::min(hi, Rat(h.b, a));
        } else {
            // two-argument construction rejects negative denominators
            lo = std::max(lo, Rat(h.b) / a);
        }
    }
    if (hi <= lo) return {0.0, 0.0, true};
    return {to_double(hi - lo), 0.0, true};
}

struct RatPoint {
    Rat x, y;
};

// Sutherland-Hodgman clipping of the box rectangle by each halfspace,
// all-rational so degenerate contacts stay exact.
VolumeResult volume_2d(const LatticeRegion& region) {
    Rat x0(region.box[0][0]), x1(region.box[0][1]);
    Rat y0(region.box[1][0]), y1(region.box[1][1]);
    std::vector<RatPoint> poly = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    for (const auto& h : region.cuts) {
        if (poly.empty()) break;
        std::vector<RatPoint> clipped;
        std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            const RatPoint& cur = poly[i];
            const RatPoint& nxt = poly[(i + 1) % n];
            Rat sc = h.a[0] * cur.x + h.a[1] * cur.y - h.b;
            Rat sn = h.a[0] * nxt.x + h.a[1] * nxt.y - h.b;
            if (sc <= 0) clipped.push_back(cur);
            if ((sc < 0 && sn > 0) || (sc > 0 && sn < 0)) {
                Rat t = sc / (sc - sn);
                clipped.push_back({cur.x + t * (nxt.x - cur.x),
                                   cur.y + t * (nxt.y - cur.y)});
            }
        }
        poly = std::move(clipped);
    }
    if (poly.size() < 3) return {0.0, 0.0, true};
    Rat twice = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const RatPoint& p = poly[i];
        const RatPoint& q = poly[(i + 1) % poly.size()];
        twice += p.x * q.y - q.x * p.y;
    }
    if (twice < 0) twice = -twice;
    return {to_double(twice / 2), 0.0, true};
}

double halton(unsigned long long i, unsigned base) {
    double f = 1.0, r = 0.0;
    while (i) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

VolumeResult volume_qmc(const LatticeRegion& region) {
    static const unsigned kBases[4] = {2, 3, 5, 7};
    const int d = region.dim();
    const int n_shifts = 8;
    const int n_points = 1 << 15;

    double boxvol = 1;
    std::vector<double> lo(d), len(d);
    for (int j = 0; j < d; ++j) {
        lo[j] = static_cast<double>(region.box[j][0]);
        len[j] = static_cast<double>(region.box[j][1] - region.box[j][0]);
        boxvol *= len[j];
    }
    if (boxvol == 0) return {0.0, 0.0, true};

    std::mt19937_64 rng(911);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> est(n_shifts);
    std::vector<double> shift(d), x(d);
    for (int s = 0; s < n_shifts; ++s) {
        for (int j = 0; j < d; ++j) shift[j] = unif(rng);
        long long inside = 0;
        for (int i = 1; i <= n_points; ++i) {
            for (int j = 0; j < d; ++j) {
                double u = halton(static_cast<unsigned long long>(i), kBases[j]) + shift[j];
                u -= std::floor(u);
                x[j] = lo[j] + u * len[j];
            }
            bool ok = true;
            for (const auto& h : region.cuts) {
                double lhs = -static_cast<double>(h.b);
                for (int j = 0; j < d; ++j) lhs += static_cast<double>(h.a[j]) * x[j];
                if (lhs > 0) {
                    ok = false;
                    break;
                }
            }
            if (ok) ++inside;
        }
        est[s] = boxvol * static_cast<double>(inside) / n_points;
    }
    double mean = 0;
    for (double e : est) mean += e;
    mean /= n_shifts;
    double var = 0;
    for (double e : est) var += (e - mean) * (e - mean);
    return {mean, std::sqrt(var / (n_shifts * (n_shifts - 1.0))), false};
}

} // namespace

VolumeResult volume(const LatticeRegion& region) {
    const int d = region.dim();
    if (d == 0) throw precondition_error("volume: region has no coordinates");
    if (d > 4) throw budget_error("volume supports d <= 4");
    for (const auto& h : region.cuts)
        if (static_cast<int>(h.a.size()) != d)
            throw precondition_error("halfspace dimension does not match region");
    if (region.box_empty()) return {0.0, 0.0, true};

    if (region.cuts.empty()) {
        double v = 1;
        for (const auto& iv : region.box)
            v *= static_cast<double>(iv[1] - iv[0]);
        return {v, 0.0, true};
    }
    if (d == 1) return volume_1d(region);
    if (d == 2) return volume_2d(region);
    return volume_qmc(region);
}

LatticeRegion scaled_preimage(const LatticeRegion& region, long long scale,
                              const std::vector<long long>& offset) {
    if (scale <= 0) throw precondition_error("scale must be positive");
    if (offset.size() != region.box.size())
        throw precondition_error("offset dimension does not match region");
    LatticeRegion out;
    out.box.resize(region.box.size());
    for (std::size_t j = 0; j < region.box.size(); ++j) {
        out.box[j][0] = ceil_div(region.box[j][0] - offset[j], scale);
        out.box[j][1] = floor_div(region.box[j][1] - offset[j], scale);
    }
    for (const auto& h : region.cuts) {
        Halfspace g;
        g.a.resize(h.a.size());
        __int128 b = h.b;
        for (std::size_t j = 0; j < h.a.size(); ++j) {
            __int128 c = static_cast<__int128>(h.a[j]) * scale;
            if (c > INT64_MAX || c < INT64_MIN)
                throw budget_error("scaled halfspace coefficient overflows");
            g.a[j] = static_cast<long long>(c);
            b -= static_cast<__int128>(h.a[j]) * offset[j];
        }
        if (b > INT64_MAX || b < INT64_MIN)
            throw budget_error("scaled halfspace bound overflows");
        g.b = static_cast<long long>(b);
        out.cuts.push_back(std::move(g));
    }
    return out;
}

} // namespace sievekit
