#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "zetamoments/arith.hpp"
#include "zetamoments/errors.hpp"
#include "zetamoments/primes.hpp"

using namespace zm;

namespace {

u64 trial_spf(u64 n) {
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return d;
    return n;
}

// sigma_X(n) straight from the definition: sum over n1 n2 n3 = n of n1^{-x1} n2^{-x2} n3^{-x3}.
cplx sigma_by_definition(const std::vector<cplx>& X, u64 n) {
    cplx total = 0;
    if (X.size() == 1) return std::pow(static_cast<double>(n), -X[0]);
    for (u64 d = 1; d <= n; ++d) {
        if (n % d) continue;
        std::vector<cplx> rest(X.begin() + 1, X.end());
        total += std::pow(static_cast<double>(d), -X[0]) * sigma_by_definition(rest, n / d);
    }
    return total;
}

}  // namespace

TEST_CASE("factorize reproduces n and agrees with trial division") {
    for (u64 n = 2; n <= 5000; ++n) {
        const auto f = factorize(n);
        u64 prod = 1;
        for (const auto& pe : f.factors)
            for (int e = 0; e < pe.e; ++e) prod *= pe.p;
        CHECK(prod == n);
        CHECK(f.factors.front().p == trial_spf(n));
        CHECK(is_prime(n) == (trial_spf(n) == n));
    }
    CHECK(factorize(1).factors.empty());
}

TEST_CASE("divisors are sorted and complete") {
    for (u64 n : {1ull, 12ull, 97ull, 360ull, 1001ull}) {
        const auto d = divisors(n);
        std::vector<u64> brute;
        for (u64 k = 1; k <= n; ++k)
            if (n % k == 0) brute.push_back(k);
        CHECK(d == brute);
    }
}

TEST_CASE("prime tables") {
    CHECK(primes_up_to(100).size() == 25);
    CHECK(primes_up_to(1'000'000).size() == 78498);
    const auto spf = smallest_prime_factor_table(3000);
    for (u64 n = 2; n <= 3000; ++n) CHECK(spf[n] == trial_spf(n));
    const auto mu = mobius_table(3000);
    for (u64 n = 1; n <= 3000; ++n) CHECK(mu[n] == mobius(n));
}

TEST_CASE("mobius, phi and Ramanujan sums against definitions") {
    for (u64 n = 1; n <= 300; ++n) {
        u64 phi = 0;
        for (u64 a = 1; a <= n; ++a) phi += std::gcd(a, n) == 1;
        CHECK(euler_phi(n) == phi);
        int musum = 0;
        for (u64 d : divisors(n)) musum += mobius(d);
        CHECK(musum == (n == 1 ? 1 : 0));
    }
    for (u64 q = 1; q <= 40; ++q)
        for (i64 r = -5; r <= 30; ++r) {
            double c = 0;
            for (u64 a = 1; a <= q; ++a)
                if (std::gcd(a, q) == 1) c += std::cos(2 * std::numbers::pi * double(a) * double(r) / double(q));
            CHECK(double(ramanujan_sum(q, r)) == doctest::Approx(c).epsilon(1e-9));
        }
}

TEST_CASE("shifted divisor function") {
    const std::vector<cplx> X{0.01, cplx(-0.02, 0.005), 0.03};
    for (u64 n = 1; n <= 200; ++n) CHECK(std::abs(sigma_shifted(X, n) - sigma_by_definition(X, n)) < 1e-12);

    SUBCASE("zero shifts give d_3") {
        const auto d3 = sieve_dk(3, 500);
        const std::vector<cplx> zero{0.0, 0.0, 0.0};
        for (u64 n = 1; n <= 500; ++n) CHECK(sigma_shifted(zero, n).real() == doctest::Approx(double(d3[n])));
    }
    SUBCASE("multiplicative on coprime arguments") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 200; ++i) {
            const u64 m = 1 + rng() % 300, n = 1 + rng() % 300;
            if (std::gcd(m, n) != 1) continue;
            CHECK(std::abs(sigma_shifted(X, m * n) - sigma_shifted(X, m) * sigma_shifted(X, n)) < 1e-11);
        }
    }
}

TEST_CASE("complete homogeneous polynomials") {
    const std::vector<cplx> z{cplx(0.5, 0.1), -0.3, cplx(0.2, -0.4)};
    const auto h = complete_homogeneous(z, 4);
    for (int e = 0; e <= 4; ++e) {
        cplx brute = 0;
        for (int i = 0; i <= e; ++i)
            for (int j = 0; i + j <= e; ++j) brute += std::pow(z[0], i) * std::pow(z[1], j) * std::pow(z[2], e - i - j);
        CHECK(std::abs(h[e] - brute) < 1e-14);
    }
}

TEST_CASE("d_k sieve") {
    const auto d2 = sieve_dk(2, 1000);
    for (u64 n = 1; n <= 1000; ++n) CHECK(d2[n] == divisors(n).size());
    CHECK_THROWS_AS(sieve_dk(3, 1'000'000, 1024), ResourceError);
}

TEST_CASE("ShiftSet validation") {
    CHECK_THROWS_AS(ShiftSet({0.5, 0.0, 0.1}), DomainError);
    const ShiftSet close{0.01, 0.0100001, 0.02};
    CHECK_THROWS_AS(close.require_distinct(1e-3, "test"), DegenerateShiftError);
    const ShiftSet ok{0.01, -0.02, 0.03};
    CHECK_NOTHROW(ok.require_distinct(1e-3, "test"));
    CHECK(std::abs(ok.sum() - cplx(0.02)) < 1e-15);
    CHECK(ok.negated()[1] == cplx(0.02));
}
