#include "sievekit/cutoffs.hpp"

#include "sievekit/errors.hpp"

#include <cmath>

namespace sievekit {

namespace {

constexpr double kPi = 3.14159265358979323846;

double cos_chi(double x) {
    x = std::fabs(x);
    if (x >= 2.0) return 0.0;
    double c = std::cos(kPi * x / 4.0);
    return c * c;
}

double cos_chi_prime(double x) {
    if (std::fabs(x) >= 2.0) return 0.0;
    return -(kPi / 4.0) * std::sin(kPi * x / 2.0);
}

double bump_chi(double x) {
    x = std::fabs(x);
    if (x >= 2.0) return 0.0;
    double u = (x / 2.0) * (x / 2.0);
    return std::exp(1.0 - 1.0 / (1.0 - u));
}

double bump_chi_prime(double x) {
    if (std::fabs(x) >= 2.0) return 0.0;
    double u = (x / 2.0) * (x / 2.0);
    double denom = (1.0 - u) * (1.0 - u);
    return -bump_chi(x) * (x / 2.0) / denom;
}

} // namespace

double energy_quadrature(const SmoothCutoff& cutoff, int n) {
    if (n < 2 || n % 2 != 0) throw precondition_error("energy_quadrature: n must be even, >= 2");
    auto f = [&](double x) {
        double d = cutoff.chi_prime(x);
        return d * d;
    };
    double h = 2.0 / n;
    double sum = f(0.0) + f(2.0);
    for (int i = 1; i < n; ++i) sum += f(i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

SmoothCutoff cosine_cutoff() {
    SmoothCutoff c;
    c.name = "cosine";
    c.chi = cos_chi;
    c.chi_prime = cos_chi_prime;
    c.c_chi = kPi * kPi / 16.0;
    return c;
}

SmoothCutoff bump_cutoff() {
    SmoothCutoff c;
    c.name = "bump";
    c.chi = bump_chi;
    c.chi_prime = bump_chi_prime;
    c.c_chi = 0; // set below via quadrature
    c.c_chi = energy_quadrature(c, 4096);
    return c;
}

SmoothCutoff cutoff_by_name(const std::string& name) {
    if (name == "cosine") return cosine_cutoff();
    if (name == "bump") return bump_cutoff();
    throw precondition_error("unknown cutoff name: " + name + " (expected cosine or bump)");
}

} // namespace sievekit
