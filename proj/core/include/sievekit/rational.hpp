#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>

namespace sievekit {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Small exact fraction for parameters (roughness exponents etc.).
struct SmallRational {
    long long num = 0;
    long long den = 1;

    double to_double() const { return double(num) / double(den); }
};

inline Int ipow(Int base, unsigned e) {
    Int r = 1;
    while (e) {
        if (e & 1u) r *= base;
        base *= base;
        e >>= 1u;
    }
    return r;
}

inline Rat rat_pow(const Rat& base, unsigned e) {
    Rat r = 1;
    Rat b = base;
    unsigned k = e;
    while (k) {
        if (k & 1u) r *= b;
        b *= b;
        k >>= 1u;
    }
    return r;
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }
inline long double to_long_double(const Rat& r) { return r.convert_to<long double>(); }

} // namespace sievekit
