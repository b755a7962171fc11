#include "sievekit/linear_systems.hpp"

#include "sievekit/errors.hpp"
#include "sievekit/primes.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>

namespace sievekit {

namespace {

long long checked_ll(const __int128 v, const char* what) {
    if (v > LLONG_MAX || v < LLONG_MIN)
        throw budget_error(std::string(what) + ": value exceeds 64-bit range");
    return static_cast<long long>(v);
}

} // namespace

long long AffineForm::eval(const std::vector<long long>& x) const {
    if (x.size() != coeffs.size())
        throw precondition_error("AffineForm::eval: dimension mismatch");
    __int128 acc = constant;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        acc += __int128(coeffs[j]) * x[j];
    return checked_ll(acc, "AffineForm::eval");
}

bool AffineForm::homogeneous_is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](long long c) { return c == 0; });
}

AffineSystem AffineSystem::make(std::vector<AffineForm> forms) {
    if (forms.empty()) throw precondition_error("AffineSystem: needs at least one form");
    int d = forms.front().dim();
    if (d < 1) throw precondition_error("AffineSystem: dimension must be positive");
    for (const auto& f : forms)
        if (f.dim() != d) throw precondition_error("AffineSystem: mixed dimensions");
    AffineSystem s;
    s.forms = std::move(forms);
    s.d = d;
    return s;
}

std::vector<long long> AffineSystem::eval(const std::vector<long long>& x) const {
    std::vector<long long> out(forms.size());
    for (std::size_t i = 0; i < forms.size(); ++i) out[i] = forms[i].eval(x);
    return out;
}

ShiftTuple ShiftTuple::make(std::vector<long long> shifts) {
    if (shifts.empty()) throw precondition_error("ShiftTuple: needs at least one shift");
    for (std::size_t i = 1; i < shifts.size(); ++i)
        if (shifts[i] <= shifts[i - 1])
            throw precondition_error("ShiftTuple: shifts must be strictly increasing");
    ShiftTuple t;
    t.shifts = std::move(shifts);
    return t;
}

namespace {

// ---- exact rational-rank machinery ----

using IMat = std::vector<std::vector<Int>>;

int rank_q(IMat m) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            Int a = m[r][c], b = m[i][c];
            for (std::size_t j = c; j < cols; ++j)
                m[i][j] = m[i][j] * a - m[r][j] * b;
        }
        ++r;
    }
    return static_cast<int>(r);
}

IMat homog_rows(const AffineSystem& sys, std::uint32_t mask) {
    IMat m;
    for (int i = 0; i < sys.t(); ++i)
        if (mask >> i & 1) {
            std::vector<Int> row(sys.forms[i].coeffs.begin(), sys.forms[i].coeffs.end());
            m.push_back(std::move(row));
        }
    return m;
}

IMat aug_rows(const AffineSystem& sys, std::uint32_t mask) {
    IMat m = homog_rows(sys, mask);
    std::size_t i = 0;
    for (int k = 0; k < sys.t(); ++k)
        if (mask >> k & 1) m[i++].push_back(Int(sys.forms[k].constant));
    return m;
}

bool forms_affinely_proportional(const AffineForm& a, const AffineForm& b) {
    // all 2x2 minors of the stacked (coeffs, constant) vectors vanish
    std::vector<long long> u(a.coeffs), v(b.coeffs);
    u.push_back(a.constant);
    v.push_back(b.constant);
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = i + 1; j < u.size(); ++j)
            if (__int128(u[i]) * v[j] != __int128(u[j]) * v[i]) return false;
    return true;
}

bool homog_proportional(const AffineForm& a, const AffineForm& b) {
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        for (std::size_t j = i + 1; j < a.coeffs.size(); ++j)
            if (__int128(a.coeffs[i]) * b.coeffs[j] != __int128(a.coeffs[j]) * b.coeffs[i])
                return false;
    // 1-dimensional: proportional unless exactly one is zero
    if (a.coeffs.size() == 1) return (a.coeffs[0] == 0) == (b.coeffs[0] == 0);
    return true;
}

// ---- F_p elimination ----

long long mod_p(long long v, long long p) {
    long long r = v % p;
    return r < 0 ? r + p : r;
}

long long mulmod(long long a, long long b, long long p) {
    return static_cast<long long>(__int128(a) * b % p);
}

long long powmod(long long a, long long e, long long p) {
    long long r = 1 % p;
    a = mod_p(a, p);
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

long long invmod(long long a, long long p) { return powmod(a, p - 2, p); }

// Row-reduce rows over F_p in place; returns rank over the first `cols`
// columns. Extra columns ride along (augmented part).
int fp_echelon(std::vector<std::vector<long long>>& m, std::size_t cols, long long p) {
    std::size_t rows = m.size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        long long inv = invmod(m[r][c], p);
        for (auto& v : m[r]) v = mulmod(v, inv, p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            long long f = m[i][c];
            for (std::size_t j = 0; j < m[i].size(); ++j)
                m[i][j] = mod_p(m[i][j] - mulmod(f, m[r][j], p), p);
        }
        ++r;
    }
    return static_cast<int>(r);
}

} // namespace

std::optional<int> complexity(const AffineSystem& sys) {
    const int t = sys.t();
    if (t > 8) throw budget_error("complexity: exhaustive partition search limited to t <= 8");
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j)
            if (homog_proportional(sys.forms[i], sys.forms[j])) return std::nullopt;

    std::unordered_map<std::uint32_t, int> rank_memo;
    auto rank_of = [&](std::uint32_t mask) {
        auto it = rank_memo.find(mask);
        if (it != rank_memo.end()) return it->second;
        int r = rank_q(homog_rows(sys, mask));
        rank_memo.emplace(mask, r);
        return r;
    };
    // psi_i outside the span of the masked forms
    auto part_ok = [&](std::uint32_t mask, int i) {
        return rank_of(mask | (1u << i)) == rank_of(mask) + 1;
    };

    int result = 0;
    for (int i = 0; i < t; ++i) {
        std::vector<int> others;
        for (int j = 0; j < t; ++j)
            if (j != i) others.push_back(j);
        int best = static_cast<int>(others.size()); // all-singletons partition is valid
        std::vector<std::uint32_t> parts;
        auto search = [&](auto&& self, std::size_t idx) -> void {
            if (static_cast<int>(parts.size()) >= best) return;
            if (idx == others.size()) {
                best = static_cast<int>(parts.size());
                return;
            }
            std::uint32_t bit = 1u << others[idx];
            for (auto& pm : parts) {
                std::uint32_t grown = pm | bit;
                if (!part_ok(grown, i)) continue; // supersets stay invalid
                std::uint32_t saved = pm;
                pm = grown;
                self(self, idx + 1);
                pm = saved;
            }
            parts.push_back(bit);
            self(self, idx + 1);
            parts.pop_back();
        };
        if (!others.empty()) search(search, 0);
        else best = 0;
        result = std::max(result, best - 1);
    }
    return std::max(result, 0);
}

bool is_normal_form(const AffineSystem& sys, int s) {
    if (s < 0) return false;
    const int d = sys.d, t = sys.t();
    const int max_size = std::min(s + 1, d);
    for (int i = 0; i < t; ++i) {
        const auto& ci = sys.forms[i].coeffs;
        std::vector<int> J;
        bool found = false;
        auto ok = [&]() {
            for (int k = 0; k < t; ++k) {
                if (k == i) continue;
                bool kills = false;
                for (int j : J)
                    if (sys.forms[k].coeffs[j] == 0) { kills = true; break; }
                if (!kills) return false;
            }
            return true;
        };
        auto choose = [&](auto&& self, int from) -> void {
            if (found) return;
            if (!J.empty() && ok()) { found = true; return; }
            if (static_cast<int>(J.size()) == max_size) return;
            for (int j = from; j < d; ++j) {
                if (ci[j] == 0) continue; // product over J must stay nonzero
                J.push_back(j);
                self(self, j + 1);
                J.pop_back();
                if (found) return;
            }
        };
        choose(choose, 0);
        if (!found) return false;
    }
    return true;
}

Rat local_factor_bruteforce(const AffineSystem& sys, long long p) {
    const int d = sys.d, t = sys.t();
    long double points = powl(static_cast<long double>(p), d);
    if (points > 1e8L)
        throw budget_error("local_factor_bruteforce: p^d exceeds the enumeration budget");

    std::vector<long long> digits(d, 0);
    std::vector<long long> vals(t); // current form values mod p
    for (int i = 0; i < t; ++i) vals[i] = mod_p(sys.forms[i].constant, p);
    std::vector<std::vector<long long>> step(t, std::vector<long long>(d));
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < d; ++j) step[i][j] = mod_p(sys.forms[i].coeffs[j], p);

    unsigned long long total = 1;
    for (int j = 0; j < d; ++j) total *= static_cast<unsigned long long>(p);
    unsigned long long count = 0;
    for (unsigned long long it = 0; it < total; ++it) {
        bool all_nonzero = true;
        for (int i = 0; i < t; ++i)
            if (vals[i] == 0) { all_nonzero = false; break; }
        if (all_nonzero) ++count;
        // odometer; p increments of a digit add p*step = 0 mod p, so the
        // reduced form values are already correct after a rollover
        for (int j = 0; j < d; ++j) {
            ++digits[j];
            for (int i = 0; i < t; ++i) {
                vals[i] += step[i][j];
                if (vals[i] >= p) vals[i] -= p;
            }
            if (digits[j] < p) break;
            digits[j] = 0;
        }
    }
    return rat_pow(Rat(p, p - 1), t) * Rat(Int(count), Int(total));
}

Rat local_factor_exact(const AffineSystem& sys, long long p) {
    const int d = sys.d, t = sys.t();
    if (t > 20) throw budget_error("local_factor_exact: limited to t <= 20 forms");
    Int sum = 0;
    for (std::uint32_t mask = 0; mask < (1u << t); ++mask) {
        int size = __builtin_popcount(mask);
        int rank = 0;
        bool consistent = true;
        if (mask) {
            std::vector<std::vector<long long>> m;
            for (int i = 0; i < t; ++i) {
                if (!(mask >> i & 1)) continue;
                std::vector<long long> row(d + 1);
                for (int j = 0; j < d; ++j) row[j] = mod_p(sys.forms[i].coeffs[j], p);
                row[d] = mod_p(-sys.forms[i].constant, p); // psi_i(x) = 0  <=>  coeffs.x = -const
                m.push_back(std::move(row));
            }
            rank = fp_echelon(m, d, p);
            for (const auto& row : m) {
                bool zero_left = std::all_of(row.begin(), row.end() - 1,
                                             [](long long v) { return v == 0; });
                if (zero_left && row.back() != 0) { consistent = false; break; }
            }
        }
        if (!consistent) continue;
        Int term = ipow(Int(p), d - rank);
        sum += (size % 2 == 0) ? term : -term;
    }
    return rat_pow(Rat(p, p - 1), t) * Rat(sum, ipow(Int(p), d));
}

AffineSystem shifted_system(const AffineSystem& sys, const ShiftTuple& tuple) {
    std::vector<AffineForm> forms;
    forms.reserve(static_cast<std::size_t>(sys.t()) * tuple.m());
    for (const auto& f : sys.forms)
        for (long long h : tuple.shifts) {
            AffineForm g = f;
            g.constant = checked_ll(__int128(f.constant) + h, "shifted_system");
            forms.push_back(std::move(g));
        }
    return AffineSystem::make(std::move(forms));
}

namespace {

// Smith invariant factors (nonnegative, divisibility chain) of an integer
// matrix; standard pivot-and-reduce algorithm, exact arithmetic.
std::vector<Int> smith_invariant_factors(IMat m) {
    std::vector<Int> out;
    if (m.empty() || m[0].empty()) return out;
    std::size_t rows = m.size(), cols = m[0].size();
    std::size_t pos = 0;
    while (pos < rows && pos < cols) {
        // locate minimal-abs nonzero entry in the trailing submatrix
        std::size_t pi = pos, pj = pos;
        bool any = false;
        for (std::size_t i = pos; i < rows; ++i)
            for (std::size_t j = pos; j < cols; ++j) {
                if (m[i][j] == 0) continue;
                if (!any || abs(m[i][j]) < abs(m[pi][pj])) { pi = i; pj = j; any = true; }
            }
        if (!any) break;
        std::swap(m[pos], m[pi]);
        for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][pos], m[i][pj]);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = pos + 1; i < rows; ++i) {
                if (m[i][pos] == 0) continue;
                Int q = m[i][pos] / m[pos][pos];
                for (std::size_t j = pos; j < cols; ++j) m[i][j] -= q * m[pos][j];
                if (m[i][pos] != 0) { // remainder becomes the new, smaller pivot
                    std::swap(m[pos], m[i]);
                    clean = false;
                }
            }
            for (std::size_t j = pos + 1; j < cols; ++j) {
                if (m[pos][j] == 0) continue;
                Int q = m[pos][j] / m[pos][pos];
                for (std::size_t i = pos; i < rows; ++i) m[i][j] -= q * m[i][pos];
                if (m[pos][j] != 0) {
                    for (std::size_t i = pos; i < rows; ++i) std::swap(m[i][pos], m[i][j]);
                    clean = false;
                }
            }
            if (!clean) continue;
            // pivot must divide every remaining entry
            for (std::size_t i = pos + 1; i < rows && clean; ++i)
                for (std::size_t j = pos + 1; j < cols && clean; ++j)
                    if (m[i][j] % m[pos][pos] != 0) {
                        for (std::size_t jj = pos; jj < cols; ++jj) m[pos][jj] += m[i][jj];
                        clean = false;
                    }
        }
        ++pos;
    }
    for (std::size_t i = 0; i < pos; ++i) out.push_back(abs(m[i][i]));
    return out;
}

void add_prime_factors(const Int& value, std::set<long long>& out) {
    Int v = abs(value);
    if (v <= 1) return;
    if (v > Int(ULLONG_MAX))
        throw budget_error("exceptional_primes: invariant factor exceeds 64-bit range");
    for (auto [p, e] : factor_u64(v.convert_to<unsigned long long>())) {
        (void)e;
        if (p > static_cast<unsigned long long>(LLONG_MAX))
            throw budget_error("exceptional_primes: prime factor exceeds 63-bit range");
        out.insert(static_cast<long long>(p));
    }
}

struct SubsetProfile {
    int size = 0;
    int grank = 0;     // rank of the homogeneous rows over Q
    bool consistent = true;
};

// Profiles of every nonempty subset plus the primes at which some subset's
// rank or consistency deviates from the generic behavior.
void subset_profiles(const AffineSystem& sys, std::vector<SubsetProfile>& profiles,
                     std::set<long long>& primes) {
    const int t = sys.t();
    if (t > 16) throw budget_error("subset analysis limited to t <= 16 forms");
    profiles.assign(std::size_t(1) << t, SubsetProfile{});
    for (std::uint32_t mask = 1; mask < (1u << t); ++mask) {
        IMat hom = homog_rows(sys, mask);
        IMat aug = aug_rows(sys, mask);
        SubsetProfile prof;
        prof.size = __builtin_popcount(mask);
        prof.grank = rank_q(hom);
        prof.consistent = (rank_q(aug) == prof.grank);
        auto hf = smith_invariant_factors(std::move(hom));
        auto af = smith_invariant_factors(std::move(aug));
        if (!hf.empty()) add_prime_factors(hf.back(), primes);
        if (!af.empty()) add_prime_factors(af.back(), primes);
        profiles[mask] = prof;
    }
}

} // namespace

std::vector<long long> exceptional_primes(const AffineSystem& sys) {
    std::vector<SubsetProfile> profiles;
    std::set<long long> primes;
    subset_profiles(sys, profiles, primes);
    return {primes.begin(), primes.end()};
}

long double beta_deviation_constant(int t) {
    if (t < 1 || t > 40) throw precondition_error("beta_deviation_constant: t out of range");
    return 6.0L * (powl(2.0L, t) - 1 - t);
}

SingularSeriesResult singular_series(const AffineSystem& sys, long long cutoff) {
    const int t = sys.t(), d = sys.d;
    if (cutoff < 2) throw precondition_error("singular_series: cutoff must be >= 2");
    if (t > 12) throw budget_error("singular_series: limited to t <= 12 forms");
    for (const auto& f : sys.forms)
        if (f.homogeneous_is_zero())
            throw precondition_error("singular_series: a form has zero homogeneous part");
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j)
            if (forms_affinely_proportional(sys.forms[i], sys.forms[j]))
                throw precondition_error(
                    "singular_series: two forms are proportional; the product diverges or degenerates");

    std::vector<SubsetProfile> profiles;
    std::set<long long> exc;
    subset_profiles(sys, profiles, exc);
    if (!exc.empty() && *exc.rbegin() > cutoff)
        throw precondition_error("singular_series: cutoff " + std::to_string(cutoff) +
                                 " is below the largest exceptional prime " +
                                 std::to_string(*exc.rbegin()) + "; increase the cutoff");

    // generic subset polynomial: poly(x) = sum over consistent subsets of
    // (-1)^{|S|} x^{grank}; for primes beyond the exceptional set,
    // beta_p = (1 - 1/p)^{-t} poly(1/p) exactly
    std::vector<Int> poly(static_cast<std::size_t>(std::min(t, d)) + 1, Int(0));
    poly[0] = 1; // empty subset
    for (std::uint32_t mask = 1; mask < profiles.size(); ++mask) {
        const auto& prof = profiles[mask];
        if (!prof.consistent) continue;
        poly[prof.grank] += (prof.size % 2 == 0) ? 1 : -1;
    }

    long double value = 1.0L;
    for (long long p : primes_up_to(cutoff)) {
        Rat beta;
        if (exc.count(p)) {
            beta = local_factor_exact(sys, p);
        } else {
            Rat acc(0);
            for (std::size_t k = 0; k < poly.size(); ++k)
                if (poly[k] != 0) acc += Rat(poly[k], ipow(Int(p), static_cast<unsigned>(k)));
            beta = rat_pow(Rat(p, p - 1), t) * acc;
        }
        value *= to_long_double(beta);
    }

    // tail: h(x) = poly(x) - (1-x)^t vanishes to order 2 at 0 (all
    // homogeneous parts nonzero makes every singleton consistent of rank 1),
    // so |beta_p - 1| <= c_sys / p^2 for p > cutoff with
    // c_sys = (1 - 1/P)^{-t} sum_k |r_k| P^{-k}, h(x) = x^2 r(x)
    std::size_t hlen = std::max<std::size_t>(poly.size(), static_cast<std::size_t>(t) + 1);
    std::vector<Int> h(hlen, Int(0));
    for (std::size_t k = 0; k < poly.size(); ++k) h[k] = poly[k];
    Int binom = 1;
    for (int k = 0; k <= t; ++k) {
        h[k] -= (k % 2 == 0) ? binom : -binom;
        binom = binom * (t - k) / (k + 1);
    }
    if (h[0] != 0 || (hlen > 1 && h[1] != 0))
        throw std::logic_error("singular_series: tail expansion lost its double zero");

    const long double P = static_cast<long double>(cutoff);
    long double csys = 0.0L, scale = 1.0L;
    for (std::size_t k = 2; k < hlen; ++k, scale /= P)
        csys += fabsl(to_long_double(Rat(h[k]))) * scale;
    csys *= powl(1.0L - 1.0L / P, -t);
    long double umax = csys / ((P + 1) * (P + 1));
    if (umax >= 0.5L)
        throw precondition_error("singular_series: cutoff too small for a meaningful tail bound");
    long double slog = csys / (2.0L * (P - 1)) / (1.0L - umax);

    SingularSeriesResult res;
    res.value = value;
    res.error_bound = fabsl(value) * expm1l(slog) * (1.0L + 1e-9L);
    res.cutoff_prime = cutoff;
    res.exceptional_primes.assign(exc.begin(), exc.end());
    return res;
}

bool admissible_system(const AffineSystem& sys) {
    std::set<long long> checks;
    for (long long p : primes_up_to(sys.t())) checks.insert(p);
    for (long long p : exceptional_primes(sys)) checks.insert(p);
    for (long long p : checks)
        if (local_factor_exact(sys, p) == 0) return false;
    return true;
}

bool admissible_tuple(const ShiftTuple& tuple) {
    for (long long p : primes_up_to(tuple.m())) {
        std::vector<bool> hit(static_cast<std::size_t>(p), false);
        for (long long h : tuple.shifts) hit[static_cast<std::size_t>(mod_p(h, p))] = true;
        if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) return false;
    }
    return true;
}

namespace {

Int floordiv(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

// In-place row Hermite form: pivots positive, zeros below, entries above
// reduced into [0, pivot). Assumes full row rank; returns false otherwise.
bool hermite_rows(IMat& m) {
    if (m.empty()) return true;
    std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        while (true) {
            std::size_t piv = rows;
            for (std::size_t i = r; i < rows; ++i)
                if (m[i][c] != 0 && (piv == rows || abs(m[i][c]) < abs(m[piv][c]))) piv = i;
            if (piv == rows) break;
            std::swap(m[r], m[piv]);
            bool reduced = true;
            for (std::size_t i = r + 1; i < rows; ++i) {
                if (m[i][c] == 0) continue;
                Int q = floordiv(m[i][c], m[r][c]);
                for (std::size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
                if (m[i][c] != 0) reduced = false;
            }
            if (reduced) break;
        }
        if (m[r][c] == 0) continue;
        if (m[r][c] < 0)
            for (auto& v : m[r]) v = -v;
        for (std::size_t i = 0; i < r; ++i) {
            Int q = floordiv(m[i][c], m[r][c]);
            if (q == 0) continue;
            for (std::size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
        }
        ++r;
    }
    return r == rows;
}

} // namespace

AffineSystem kernel_parametrization(const std::vector<std::vector<long long>>& mat) {
    if (mat.empty() || mat[0].empty())
        throw precondition_error("kernel_parametrization: empty matrix");
    const int t = static_cast<int>(mat.size());
    const int d = static_cast<int>(mat[0].size());
    for (const auto& row : mat)
        if (static_cast<int>(row.size()) != d)
            throw precondition_error("kernel_parametrization: ragged matrix");
    if (t >= d)
        throw precondition_error("kernel_parametrization: need t < d for a nontrivial kernel");

    // unimodular row reduction of [mat^T | I_d]: rows whose left block
    // vanishes carry a kernel lattice basis in the right block
    IMat a(static_cast<std::size_t>(d), std::vector<Int>(static_cast<std::size_t>(t + d), Int(0)));
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < t; ++i) a[j][i] = mat[i][j];
        a[j][t + j] = 1;
    }
    std::size_t r = 0;
    for (int c = 0; c < t && r < a.size(); ++c) {
        while (true) {
            std::size_t piv = a.size();
            for (std::size_t i = r; i < a.size(); ++i)
                if (a[i][c] != 0 && (piv == a.size() || abs(a[i][c]) < abs(a[piv][c]))) piv = i;
            if (piv == a.size()) break;
            std::swap(a[r], a[piv]);
            bool done = true;
            for (std::size_t i = r + 1; i < a.size(); ++i) {
                if (a[i][c] == 0) continue;
                Int q = floordiv(a[i][c], a[r][c]);
                for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= q * a[r][j];
                if (a[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (a[r][c] != 0) ++r;
    }
    if (static_cast<int>(r) < t)
        throw precondition_error("kernel_parametrization: rows are linearly dependent");

    IMat kernel;
    for (std::size_t i = r; i < a.size(); ++i)
        kernel.emplace_back(a[i].begin() + t, a[i].end());
    if (!hermite_rows(kernel))
        throw std::logic_error("kernel_parametrization: kernel basis lost rank");

    const int k = d - t;
    std::vector<AffineForm> forms(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        forms[j].coeffs.resize(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            if (kernel[i][j] > Int(LLONG_MAX) || kernel[i][j] < Int(LLONG_MIN))
                throw budget_error("kernel_parametrization: basis entry exceeds 64-bit range");
            forms[j].coeffs[i] = kernel[i][j].convert_to<long long>();
        }
        forms[j].constant = 0;
    }
    return AffineSystem::make(std::move(forms));
}

bool local_solution_exists(const std::vector<std::vector<long long>>& mat, long long p,
                           const std::function<bool(long long)>& forbidden) {
    if (mat.empty() || mat[0].empty())
        throw precondition_error("local_solution_exists: empty matrix");
    if (p > 10000) throw budget_error("local_solution_exists: p limited to 10^4");
    const int d = static_cast<int>(mat[0].size());
    std::vector<std::vector<long long>> m;
    for (const auto& row : mat) {
        if (static_cast<int>(row.size()) != d)
            throw precondition_error("local_solution_exists: ragged matrix");
        std::vector<long long> mr(row.size());
        for (int j = 0; j < d; ++j) mr[j] = mod_p(row[j], p);
        m.push_back(std::move(mr));
    }
    int rank = fp_echelon(m, static_cast<std::size_t>(d), p);
    int k = d - rank;

    std::vector<int> pivot_col(static_cast<std::size_t>(rank));
    std::vector<bool> is_pivot(static_cast<std::size_t>(d), false);
    for (int i = 0; i < rank; ++i) {
        int c = 0;
        while (m[i][c] == 0) ++c;
        pivot_col[i] = c;
        is_pivot[c] = true;
    }
    // nullspace basis: one vector per free column
    std::vector<std::vector<long long>> basis;
    for (int f = 0; f < d; ++f) {
        if (is_pivot[f]) continue;
        std::vector<long long> v(static_cast<std::size_t>(d), 0);
        v[f] = 1;
        for (int i = 0; i < rank; ++i) v[pivot_col[i]] = mod_p(-m[i][f], p);
        basis.push_back(std::move(v));
    }

    long double work = powl(static_cast<long double>(p), k) * d;
    if (work > 2e8L)
        throw budget_error("local_solution_exists: kernel enumeration exceeds budget");

    std::vector<long long> coef(static_cast<std::size_t>(k), 0);
    std::vector<long long> x(static_cast<std::size_t>(d), 0);
    while (true) {
        bool good = true;
        for (int j = 0; j < d; ++j)
            if (forbidden(x[j])) { good = false; break; }
        if (good) return true;
        int pos = 0;
        while (pos < k) {
            ++coef[pos];
            for (int j = 0; j < d; ++j) {
                x[j] += basis[pos][j];
                if (x[j] >= p) x[j] -= p;
            }
            if (coef[pos] < p) break;
            coef[pos] = 0; // x is back to the pos-digit-zero state after p increments
            ++pos;
        }
        if (pos == k) break;
    }
    return false;
}

std::function<bool(long long)> chen_forbidden(long long p) {
    return [p](long long x) { return x % p == 0 || (x + 2) % p == 0; };
}

std::function<bool(long long)> tuple_forbidden(ShiftTuple tuple, long long p) {
    return [tuple = std::move(tuple), p](long long x) {
        for (long long h : tuple.shifts)
            if (mod_p(x + h, p) == 0) return true;
        return false;
    };
}

std::function<bool(long long)> two_squares_shift_forbidden(long long p) {
    return [p](long long x) { return x == 0 || (p % 4 == 3 && x == 1); };
}

} // namespace sievekit
