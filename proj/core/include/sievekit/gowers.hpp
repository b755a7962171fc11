#pragma once

#include "sievekit/linear_systems.hpp"

#include <complex>
#include <vector>

namespace sievekit {

struct CyclicFunction {
    long long N = 0;
    std::vector<std::complex<double>> values;

    static CyclicFunction make(std::vector<std::complex<double>> v);
    static CyclicFunction constant(long long N, std::complex<double> c);
};

enum class NormMethod { Direct, Recursive, Fft };

struct NormResult {
    double value = 0;
    int k = 0;
    NormMethod method = NormMethod::Direct;
};

// U^k norm on Z/NZ. k = 1 is |mean|; k = 2 uses the definitional average
// when N^3 fits the budget; otherwise the exact E_h ||Delta_h f||^{2^{k-1}}
// recursion (N^k budget). Extended-precision accumulation throughout.
NormResult gowers_norm_cyclic(const CyclicFunction& f, int k, int threads = 0);

// U^2 norm via the Fourier identity ||f||_{U^2}^4 = sum_xi |f_hat(xi)|^4.
NormResult gowers_u2_fft(const CyclicFunction& f);

// ||f 1_[N]||_{U^k(Z_M)} / ||1_[N]||_{U^k(Z_M)} with M >= 2N+1; the value
// does not depend on M. modulus = 0 picks M = 2N+1.
NormResult gowers_norm_interval(const std::vector<std::complex<double>>& f, int k,
                                long long modulus = 0, int threads = 0);

// (E_{x in [N]} |f(x)|^p)^{1/p}
double lp_norm(const std::vector<std::complex<double>>& f, double p);

struct DeviationReport {
    double value = 0;     // |E prod_i nu(psi_i(n)) - 1|
    double std_error = 0; // zero on the exact path
    bool exact = true;
    long long samples = 0;
};

// Deviation of the linear-forms average from 1: exact full-lattice sum over
// (Z/NZ)^d when N^d is small, else fixed-seed Monte Carlo.
DeviationReport linear_forms_deviation(const CyclicFunction& nu, const AffineSystem& sys,
                                       long long samples);

} // namespace sievekit
