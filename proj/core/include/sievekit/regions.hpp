#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace sievekit {

// Closed halfspace a.x <= b with integer data. Rational cuts are expected
// to be cleared to integers by the caller.
struct Halfspace {
    std::vector<long long> a;
    long long b = 0;
};

// Axis-aligned integer box (closed intervals) with optional halfspace cuts.
// Invariant: every lattice point satisfying the cuts lies inside the box.
struct LatticeRegion {
    std::vector<std::array<long long, 2>> box; // {lo, hi} per coordinate
    std::vector<Halfspace> cuts;

    int dim() const { return static_cast<int>(box.size()); }
    bool box_empty() const;
    unsigned long long box_lattice_count() const; // cuts ignored
    bool contains(const std::vector<long long>& x) const;

    static LatticeRegion make_box(std::vector<std::array<long long, 2>> b);
};

struct VolumeResult {
    double value = 0;
    double std_error = 0; // zero on exact paths
    bool exact = true;
};

// Continuous volume. Pure boxes and cut regions with d <= 2 are exact;
// d in {3,4} with cuts falls back to shifted quasi-Monte Carlo.
VolumeResult volume(const LatticeRegion& region);

// Integer points x with scale*x + offset inside `region`, as a region in x.
LatticeRegion scaled_preimage(const LatticeRegion& region, long long scale,
                              const std::vector<long long>& offset);

long long floor_div(long long a, long long b); // b > 0
long long ceil_div(long long a, long long b);  // b > 0

// Visits every lattice point of the region whose leading coordinate lies in
// [lead_lo, lead_hi], in lexicographic order. Chunking by leading coordinate
// keeps parallel decompositions deterministic.
template <typename Fn>
void scan_lattice(const LatticeRegion& region, long long lead_lo, long long lead_hi, Fn&& fn) {
    const std::size_t d = region.box.size();
    if (d == 0 || region.box_empty() || lead_hi < lead_lo) return;
    std::vector<long long> x(d);
    for (std::size_t j = 1; j < d; ++j) x[j] = region.box[j][0];
    for (x[0] = lead_lo; x[0] <= lead_hi; ++x[0]) {
        for (;;) {
            bool ok = true;
            for (const auto& h : region.cuts) {
                __int128 s = 0;
                for (std::size_t j = 0; j < d; ++j) s += static_cast<__int128>(h.a[j]) * x[j];
                if (s > h.b) {
                    ok = false;
                    break;
                }
            }
            if (ok) fn(x);
            std::size_t j = d - 1;
            while (j >= 1 && x[j] == region.box[j][1]) {
                x[j] = region.box[j][0];
                --j;
            }
            if (j < 1) break;
            ++x[j];
        }
    }
}

} // namespace sievekit
