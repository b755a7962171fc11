#pragma once

#include <complex>
#include <vector>

namespace sievekit {

// g(n) in [0,1)^D with g_j(n) = sum_i alpha[j][i] n^i mod 1.
struct PolynomialOrbit {
    int D = 1;
    int s = 1;
    std::vector<std::vector<double>> alpha; // [D][s+1], entries reduced mod 1

    static PolynomialOrbit make(std::vector<std::vector<double>> alpha);
    std::vector<double> point(long long n) const;
};

// Piecewise-linear bump on the circle: 1 within width/2 of the center,
// 0 beyond width/2 + margin, linear in between.
struct Trapezoid {
    double center = 0;
    double width = 0.2;
    double margin = 0.05;

    double operator()(double x) const;
};

struct FourierTerm {
    std::vector<long long> freq;
    std::complex<double> amplitude;
};

// Lipschitz test function on the D-torus under the sup metric: a real finite
// Fourier series or a product of per-coordinate trapezoids. The declared
// bound is conservative (sum of per-term or per-factor constants).
struct TorusFunction {
    enum class Kind { Fourier, TrapezoidProduct };

    Kind kind = Kind::TrapezoidProduct;
    int D = 1;
    std::vector<FourierTerm> terms;
    std::vector<Trapezoid> traps;
    double lipschitz_bound = 0;

    static TorusFunction fourier(int D, std::vector<FourierTerm> terms);
    static TorusFunction trapezoid_product(std::vector<Trapezoid> traps);
    double operator()(const std::vector<double>& x) const;
};

// Orbit, test function, and the claimed class parameters carried along for
// reporting.
struct NilsequenceSpec {
    PolynomialOrbit orbit;
    TorusFunction function;
    int claimed_dim = 1;
    double claimed_height = 1;
    double claimed_eta = 0;
    long long claimed_scale = 0;
};

// F(g(n)), deterministic.
double evaluate(const NilsequenceSpec& spec, long long n);

struct EquidistributionReport {
    double max_abs = 0;
    std::vector<long long> witness_freq;
    long long witness_step = 0;
    long long witness_offset = 0;
    long long witness_length = 0;
    double eta = 0;
    bool flagged = false; // max_abs > eta
};

// Max Weyl sum |E_{n in P} e(k.g(n))| over nonzero frequency vectors with
// |k|_inf <= freq_cutoff and subprogressions P of [1, N] with |P| >= eta N
// (every step q <= floor(1/eta), every offset; q = 1 covers the full
// interval). Witness ties break toward the lexicographically first
// frequency, then smallest step and offset.
EquidistributionReport equidistribution_diagnostic(const PolynomialOrbit& orbit, long long N,
                                                   double eta, long long freq_cutoff,
                                                   int threads = 0);

// xi(n) = prod_j trapezoid(alpha_j n mod 1); Lipschitz bound sum_j 1/margin.
NilsequenceSpec trapezoid_bohr_function(const std::vector<double>& alpha, double center,
                                        double width, double margin);

} // namespace sievekit
