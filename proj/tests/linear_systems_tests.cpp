#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "sievekit/errors.hpp"
#include "sievekit/linear_systems.hpp"

#include <random>

using namespace sievekit;

namespace {

AffineForm form(std::vector<long long> coeffs, long long constant) {
    return AffineForm{std::move(coeffs), constant};
}

AffineSystem ap_system(int k) {
    std::vector<AffineForm> forms;
    for (int j = 0; j < k; ++j) forms.push_back(form({1, j}, 0));
    return AffineSystem::make(std::move(forms));
}

AffineSystem random_system(std::mt19937& rng, int max_d, int max_t) {
    std::uniform_int_distribution<int> dd(1, max_d), dt(1, max_t);
    std::uniform_int_distribution<long long> dc(-3, 3);
    int d = dd(rng), t = dt(rng);
    std::vector<AffineForm> forms;
    for (int i = 0; i < t; ++i) {
        std::vector<long long> coeffs(static_cast<std::size_t>(d));
        for (auto& c : coeffs) c = dc(rng);
        forms.push_back(form(std::move(coeffs), dc(rng)));
    }
    return AffineSystem::make(std::move(forms));
}

bool affinely_proportional(const AffineForm& f, const AffineForm& g) {
    auto a = f.coeffs;
    a.push_back(f.constant);
    auto b = g.coeffs;
    b.push_back(g.constant);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (a[i] * b[j] - a[j] * b[i] != 0) return false;
    return true;
}

} // namespace

TEST_CASE("system constructors reject malformed input") {
    CHECK_THROWS_AS(AffineSystem::make({}), precondition_error);
    CHECK_THROWS_AS(AffineSystem::make({form({1}, 0), form({1, 2}, 0)}), precondition_error);
    CHECK_THROWS_AS(ShiftTuple::make({}), precondition_error);
    CHECK_THROWS_AS(ShiftTuple::make({2, 0}), precondition_error);
    CHECK_THROWS_AS(ShiftTuple::make({0, 0}), precondition_error);
    CHECK(ShiftTuple::make({0, 2, 6}).diameter() == 6);
}

TEST_CASE("complexity of arithmetic progressions is length minus two") {
    for (int k = 3; k <= 5; ++k) {
        auto c = complexity(ap_system(k));
        REQUIRE(c.has_value());
        CHECK(*c == k - 2);
    }
}

TEST_CASE("complexity edge cases") {
    CHECK(complexity(AffineSystem::make({form({1}, 0)})) == 0);
    // identical homogeneous parts in one variable: no finite value
    CHECK_FALSE(complexity(AffineSystem::make({form({1}, 0), form({1}, 1)})).has_value());
    CHECK(complexity(AffineSystem::make({form({1, 0}, 0), form({0, 1}, 0)})) == 0);
    std::vector<AffineForm> many(9, form({1, 1}, 0));
    for (int i = 0; i < 9; ++i) many[static_cast<std::size_t>(i)].constant = i * i;
    CHECK_THROWS_AS(complexity(AffineSystem::make(many)), budget_error);
}

TEST_CASE("normal form membership") {
    CHECK(is_normal_form(AffineSystem::make({form({1, 0}, 0), form({0, 1}, 0)}), 0));
    CHECK_FALSE(is_normal_form(ap_system(3), 1));
    // a vanishing homogeneous part can never satisfy the nonzero product
    CHECK_FALSE(is_normal_form(AffineSystem::make({form({0, 0}, 5), form({1, 0}, 0)}), 2));
}

TEST_CASE("local factor brute force on pinned cases") {
    AffineSystem twin = AffineSystem::make({form({1}, 0), form({1}, 2)});
    CHECK(local_factor_bruteforce(twin, 3) == Rat(3, 4));
    CHECK(local_factor_bruteforce(twin, 2) == Rat(2));
    AffineSystem line = AffineSystem::make({form({1}, 0)});
    for (long long p : {2, 3, 5, 13}) CHECK(local_factor_bruteforce(line, p) == Rat(1));
    AffineSystem wide = AffineSystem::make(
        {form({1, 0, 0, 0, 0}, 0), form({0, 1, 0, 0, 0}, 1)});
    CHECK_THROWS_AS(local_factor_bruteforce(wide, 101), budget_error);
}

TEST_CASE("local factor via inclusion-exclusion matches pinned values") {
    AffineSystem twin = AffineSystem::make({form({1}, 0), form({1}, 2)});
    CHECK(local_factor_exact(twin, 5) == Rat(15, 16));
    CHECK(local_factor_exact(twin, 2) == Rat(2));
    // surviving points mod 3: (1,1) and (2,2), so (3/2)^3 * 2/9
    AffineSystem sum = AffineSystem::make({form({1, 0}, 0), form({0, 1}, 0), form({1, 1}, 0)});
    CHECK(local_factor_exact(sum, 3) == Rat(3, 4));
}

TEST_CASE("both local factor routes agree exactly on random systems") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
        AffineSystem sys = random_system(rng, 3, 4);
        for (long long p : {2, 3, 5, 7, 11, 13})
            CHECK(local_factor_exact(sys, p) == local_factor_bruteforce(sys, p));
    }
}

TEST_CASE("generic local factors stay within the deviation bound") {
    std::mt19937 rng(999);
    int checked = 0;
    while (checked < 60) {
        AffineSystem sys = random_system(rng, 3, 4);
        bool generic = true;
        for (const auto& f : sys.forms)
            if (f.homogeneous_is_zero()) generic = false;
        for (int i = 0; generic && i < sys.t(); ++i)
            for (int j = i + 1; j < sys.t(); ++j)
                if (affinely_proportional(sys.forms[static_cast<std::size_t>(i)],
                                          sys.forms[static_cast<std::size_t>(j)]))
                    generic = false;
        if (!generic) continue;
        ++checked;
        long double c = beta_deviation_constant(sys.t());
        for (long long p : {19, 23, 101, 199}) {
            Rat beta = local_factor_exact(sys, p);
            long double dev = std::abs(to_long_double(beta) - 1.0L);
            CHECK(dev * p * p <= c * (1 + 1e-15L));
        }
    }
}

TEST_CASE("deviation constant bookkeeping") {
    CHECK(beta_deviation_constant(1) == 0.0L);
    CHECK(beta_deviation_constant(2) == 6.0L);
    CHECK(beta_deviation_constant(3) == 24.0L);
    CHECK(beta_deviation_constant(4) == 66.0L);
    CHECK_THROWS_AS(beta_deviation_constant(0), precondition_error);
}

TEST_CASE("shifted system layout") {
    AffineSystem line = AffineSystem::make({form({1}, 0)});
    AffineSystem s = shifted_system(line, ShiftTuple::make({0, 2}));
    REQUIRE(s.t() == 2);
    CHECK(s.forms[0].constant == 0);
    CHECK(s.forms[1].constant == 2);

    AffineSystem pair = AffineSystem::make({form({1, 0}, 0), form({0, 1}, 0)});
    AffineSystem id = shifted_system(pair, ShiftTuple::make({0}));
    CHECK(id.t() == 2);
    CHECK(id.forms[0].coeffs == std::vector<long long>{1, 0});
    CHECK(id.forms[1].coeffs == std::vector<long long>{0, 1});

    AffineSystem s3 = shifted_system(line, ShiftTuple::make({0, 2, 6}));
    REQUIRE(s3.t() == 3);
    CHECK(s3.forms[2].constant == 6);

    // (i, j) ordering: form index varies slower than shift index
    AffineSystem both = shifted_system(pair, ShiftTuple::make({0, 1}));
    REQUIRE(both.t() == 4);
    CHECK(both.forms[0].coeffs == std::vector<long long>{1, 0});
    CHECK(both.forms[1].coeffs == std::vector<long long>{1, 0});
    CHECK(both.forms[1].constant == 1);
    CHECK(both.forms[2].coeffs == std::vector<long long>{0, 1});
}

TEST_CASE("twin singular series against the independent Euler product") {
    AffineSystem twin = AffineSystem::make({form({1}, 0), form({1}, 2)});
    SingularSeriesResult r = singular_series(twin, 10000);
    long double reference = oracle::twin_series(1000000);
    CHECK(std::abs(static_cast<double>(r.value) - 1.32032) <= 2e-4);
    CHECK(r.error_bound <= 1e-4);
    CHECK(std::abs(r.value - reference) <= r.error_bound);
    CHECK(r.exceptional_primes == std::vector<long long>{2});
}

TEST_CASE("singular series degenerate and trivial cases") {
    AffineSystem line = AffineSystem::make({form({1}, 0)});
    SingularSeriesResult one = singular_series(line, 1000);
    CHECK(one.value == 1.0L);
    CHECK(one.error_bound == 0.0L);

    AffineSystem consecutive = AffineSystem::make({form({1}, 0), form({1}, 1)});
    CHECK(singular_series(consecutive, 1000).value == 0.0L);

    AffineSystem scaled = AffineSystem::make({form({1}, 0), form({2}, 0)});
    CHECK_THROWS_AS(singular_series(scaled, 1000), precondition_error);
    CHECK_THROWS_AS(
        singular_series(AffineSystem::make({form({0}, 1), form({1}, 0)}), 1000),
        precondition_error);
}

TEST_CASE("singular series stabilizes as the cutoff grows") {
    AffineSystem twin = AffineSystem::make({form({1}, 0), form({1}, 2)});
    SingularSeriesResult lo = singular_series(twin, 1000);
    SingularSeriesResult hi = singular_series(twin, 10000);
    CHECK(hi.error_bound <= lo.error_bound);
    CHECK(std::abs(lo.value - hi.value) <= lo.error_bound);

    AffineSystem spread = AffineSystem::make({form({1}, 0), form({1}, 5)});
    CHECK_THROWS_AS(singular_series(spread, 3), precondition_error);
}

TEST_CASE("admissibility checks") {
    CHECK(admissible_system(AffineSystem::make({form({1}, 0), form({1}, 2)})));
    CHECK_FALSE(admissible_system(AffineSystem::make({form({1}, 0), form({1}, 1)})));
    CHECK(admissible_system(AffineSystem::make({form({1}, 0), form({1}, 2), form({1}, 6)})));
    CHECK_FALSE(admissible_system(AffineSystem::make({form({1}, 0), form({1}, 2), form({1}, 4)})));

    CHECK(admissible_tuple(ShiftTuple::make({0, 2})));
    CHECK_FALSE(admissible_tuple(ShiftTuple::make({0, 2, 4})));
    CHECK(admissible_tuple(ShiftTuple::make({0, 2, 6, 8, 12, 18, 20, 26, 30, 32})));
}

TEST_CASE("kernel parametrization pinned outputs") {
    AffineSystem k1 = kernel_parametrization({{1, 1, -1}});
    REQUIRE(k1.d == 2);
    REQUIRE(k1.t() == 3);
    CHECK(k1.forms[0].coeffs == std::vector<long long>{1, 0});
    CHECK(k1.forms[1].coeffs == std::vector<long long>{0, 1});
    CHECK(k1.forms[2].coeffs == std::vector<long long>{1, 1});
    for (const auto& f : k1.forms) CHECK(f.constant == 0);

    AffineSystem k2 = kernel_parametrization({{1, 0}});
    REQUIRE(k2.d == 1);
    CHECK(k2.forms[0].coeffs == std::vector<long long>{0});
    CHECK(k2.forms[1].coeffs == std::vector<long long>{1});

    AffineSystem k3 = kernel_parametrization({{2, -1, 0}, {0, 1, -1}});
    REQUIRE(k3.d == 1);
    CHECK(k3.forms[0].coeffs == std::vector<long long>{1});
    CHECK(k3.forms[1].coeffs == std::vector<long long>{2});
    CHECK(k3.forms[2].coeffs == std::vector<long long>{2});

    CHECK_THROWS_AS(kernel_parametrization({{1, 1, 0}, {2, 2, 0}}), precondition_error);
    CHECK_THROWS_AS(kernel_parametrization({{1, 0}, {0, 1}}), precondition_error);
}

TEST_CASE("kernel parametrization spans exactly the kernel lattice") {
    std::mt19937 rng(777);
    std::uniform_int_distribution<long long> dc(-3, 3);
    std::uniform_int_distribution<int> dd(2, 5);
    int done = 0;
    while (done < 40) {
        int d = dd(rng);
        int t = 1 + (rng() % 2 == 0 && d > 2 ? 1 : 0);
        std::vector<std::vector<long long>> mat(static_cast<std::size_t>(t),
                                                std::vector<long long>(static_cast<std::size_t>(d)));
        for (auto& row : mat)
            for (auto& v : row) v = dc(rng);
        AffineSystem psi;
        try {
            psi = kernel_parametrization(mat);
        } catch (const precondition_error&) {
            continue; // rank-deficient draw
        }
        ++done;
        REQUIRE(psi.d == d - t);
        REQUIRE(psi.t() == d);
        // mat * psi = 0 as polynomial identity in the parameters
        for (int i = 0; i < t; ++i)
            for (int col = 0; col < psi.d; ++col) {
                long long acc = 0;
                for (int j = 0; j < d; ++j)
                    acc += mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                           psi.forms[static_cast<std::size_t>(j)]
                               .coeffs[static_cast<std::size_t>(col)];
                CHECK(acc == 0);
            }
        // every small kernel vector is hit by an integer parameter
        std::vector<std::vector<long long>> columns(
            static_cast<std::size_t>(psi.d),
            std::vector<long long>(static_cast<std::size_t>(d)));
        for (int col = 0; col < psi.d; ++col)
            for (int j = 0; j < d; ++j)
                columns[static_cast<std::size_t>(col)][static_cast<std::size_t>(j)] =
                    psi.forms[static_cast<std::size_t>(j)].coeffs[static_cast<std::size_t>(col)];
        std::vector<long long> x(static_cast<std::size_t>(d), -2);
        while (true) {
            bool in_kernel = true;
            for (int i = 0; i < t && in_kernel; ++i) {
                long long acc = 0;
                for (int j = 0; j < d; ++j)
                    acc += mat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                           x[static_cast<std::size_t>(j)];
                in_kernel = acc == 0;
            }
            if (in_kernel) CHECK(oracle::in_lattice_image(columns, x));
            int pos = 0;
            while (pos < d && ++x[static_cast<std::size_t>(pos)] > 2)
                x[static_cast<std::size_t>(pos++)] = -2;
            if (pos == d) break;
        }
    }
}

TEST_CASE("kernel parametrization is deterministic") {
    AffineSystem a = kernel_parametrization({{3, -1, 2, 0}, {0, 2, -1, 1}});
    AffineSystem b = kernel_parametrization({{3, -1, 2, 0}, {0, 2, -1, 1}});
    REQUIRE(a.t() == b.t());
    for (int i = 0; i < a.t(); ++i)
        CHECK(a.forms[static_cast<std::size_t>(i)].coeffs ==
              b.forms[static_cast<std::size_t>(i)].coeffs);
}

TEST_CASE("local kernel solvability with forbidden residues") {
    CHECK(local_solution_exists({{1, 1, -1}}, 5, chen_forbidden(5)));
    auto all_forbidden = [](long long) { return true; };
    CHECK_FALSE(local_solution_exists({{1, -1}}, 3, all_forbidden));
    // kernel mod 2 of x+y-z is {0, (1,0,1), (0,1,1), (1,1,0)}; each has a 0 coordinate
    CHECK_FALSE(local_solution_exists({{1, 1, -1}}, 2, chen_forbidden(2)));
    CHECK_THROWS_AS(
        local_solution_exists({{1, 1, 1, 1, 1, 1, 1, 1}}, 9973, chen_forbidden(9973)),
        budget_error);
    CHECK_THROWS_AS(local_solution_exists({{1, -1}}, 10007, chen_forbidden(10007)), budget_error);
}

TEST_CASE("forbidden residue families") {
    auto chen5 = chen_forbidden(5);
    CHECK(chen5(0));
    CHECK(chen5(3));
    CHECK_FALSE(chen5(1));
    CHECK_FALSE(chen5(4));

    auto tup = tuple_forbidden(ShiftTuple::make({0, 2, 6}), 7);
    CHECK(tup(0));
    CHECK(tup(5));
    CHECK(tup(1));
    CHECK_FALSE(tup(2));

    auto sq3 = two_squares_shift_forbidden(3);
    CHECK(sq3(0));
    CHECK(sq3(1));
    CHECK_FALSE(sq3(2));
    auto sq5 = two_squares_shift_forbidden(5);
    CHECK(sq5(0));
    CHECK_FALSE(sq5(1));
}
