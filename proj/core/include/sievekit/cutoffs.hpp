#pragma once

#include <functional>
#include <string>

namespace sievekit {

// Even weight function with chi(0) = 1 supported on [-2, 2], plus its
// derivative and energy c_chi = integral of chi'(x)^2 over [0, 2]. The
// energy is carried explicitly through every main-term prediction instead
// of normalizing chi to unit energy.
struct SmoothCutoff {
    std::string name;
    std::function<double(double)> chi;
    std::function<double(double)> chi_prime;
    double c_chi = 0;
};

// chi(x) = cos^2(pi x / 4) on [-2, 2]; c_chi = pi^2 / 16 analytically.
SmoothCutoff cosine_cutoff();

// chi(x) = exp(1 - 1/(1 - (x/2)^2)) on (-2, 2); c_chi by quadrature.
SmoothCutoff bump_cutoff();

SmoothCutoff cutoff_by_name(const std::string& name);

// Simpson quadrature of chi'(x)^2 over [0, 2] with n panels (n even).
double energy_quadrature(const SmoothCutoff& cutoff, int n);

} // namespace sievekit
