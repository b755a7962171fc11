#pragma once

#include "sievekit/cutoffs.hpp"
#include "sievekit/indicators.hpp"
#include "sievekit/linear_systems.hpp"
#include "sievekit/primes.hpp"
#include "sievekit/regions.hpp"

#include <cmath>

namespace sievekit {

// Parameters of the W-tricked smoothed divisor-sum majorant
//   nu(n) = (phi(W)/W)^r Lambda_{chi,gamma,H}(W n' + b)
// where n' is n reduced into [N] and r = |H|.
struct MajorantSpec {
    double gamma = 0.05;
    long long W = 1;
    long long b = 0;
    ShiftTuple tuple = ShiftTuple::make({0});
    SmoothCutoff cutoff = cosine_cutoff();
    long long N = 2;

    double R() const { return std::pow(static_cast<double>(N), gamma); }
    int r() const { return tuple.m(); }
    // Validates gamma in (0,1), N >= 2, W >= 1, 0 <= b <= W, and
    // (b + h_j, W) = 1 for every shift.
    static MajorantSpec make(double gamma, long long W, long long b, ShiftTuple tuple,
                             SmoothCutoff cutoff, long long N);
};

// log R * (sum over squarefree l | n with l < R^2 of mu(l) chi(log l / log R))^2
double lambda_chi(long long n, double R, const SmoothCutoff& cutoff, const FactorTable& table);

// prod over h in H of lambda_chi(n + h, R)
double lambda_chi_tuple(long long n, const MajorantSpec& spec, const FactorTable& table);

// (phi(W)/W)^r lambda_chi_tuple(W n' + b); periodic in n with period N
double majorant_nu(long long n, const MajorantSpec& spec, const FactorTable& table);

struct MajorizationReport {
    double max_ratio = 0;
    long long argmax = 0;         // smallest maximizing n; 0 when theta never fires
    long long lo = 0;
    long long hi = 0;
    long long support_points = 0; // n in [lo, hi] with theta(Wn + b) > 0
    bool gamma_ok = true;         // gamma < rho/2 against theta's roughness
};

// max over n in [N^c, N] of theta_{W,b}(n) / nu(n), 0/0 counted as 0, where
// theta_{W,b}(n) = (phi(W)/W)^{r_theta} theta(Wn + b).
MajorizationReport majorization_scan(const WeightedIndicator& theta, const MajorantSpec& spec,
                                     long long N, double c, const FactorTable& table,
                                     int threads = 0);

struct CorrelationReport {
    double sum = 0;
    double prediction = 0; // Vol(K) * (W/phi(W))^{rt} * c_chi^{rt}
    double ratio = 0;
    unsigned long long points = 0;
    bool admissible_ok = true; // (b + h_j, W) = 1 held for every shift
};

// Exact lattice sum of prod_i Lambda_{chi,gamma,H}(W psi_i(n) + b) over the
// region, against the smooth main-term prediction.
CorrelationReport correlation_estimate(const MajorantSpec& spec, const AffineSystem& sys,
                                       const LatticeRegion& region, const FactorTable& table,
                                       int threads = 0);

} // namespace sievekit
