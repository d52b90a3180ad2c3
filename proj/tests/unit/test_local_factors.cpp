#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "zetamoments/errors.hpp"
#include "zetamoments/local_factors.hpp"

using namespace zm;

namespace {

cplx disc(std::mt19937_64& rng, double r) {
    std::uniform_real_distribution<double> u(0, 1);
    return std::polar(r * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
}

struct Point {
    u64 p;
    cplx s;
    ShiftSet I, J;
};

Point random_point(std::mt19937_64& rng) {
    const u64 primes[] = {2, 3, 5, 7, 11};
    for (;;) {
        std::vector<cplx> z(6);
        for (auto& v : z) v = disc(rng, 0.05);
        bool ok = true;
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j) ok = ok && std::abs(z[i] - z[j]) >= 1e-3;
        if (!ok) continue;
        return {primes[rng() % 5], disc(rng, 0.3), ShiftSet({z[0], z[1], z[2]}), ShiftSet({z[3], z[4], z[5]})};
    }
}

}  // namespace

TEST_CASE("g_local closed form") {
    const ShiftSet X{0.01, -0.02, 0.005};
    CHECK(g_local(X, 1.1, 2, 0) == cplx(1.0));
    CHECK(std::abs(g_local(X, 1.1, 2, 2) - g_local_series(X, 1.1, 2, 2, 60)) < 1e-10);
    const ShiftSet one{cplx(0.02, -0.01)};
    for (int a = 0; a <= 5; ++a) CHECK(std::abs(g_local(one, 0.9, 5, a) - std::pow(5.0, -one[0] * double(a))) < 1e-13);
}

TEST_CASE("G_local satisfies the g recurrence") {
    const ShiftSet X{cplx(0.01, 0.02), -0.03, cplx(0.015, -0.01)};
    for (u64 p : {2, 3, 7})
        for (int j = 1; j <= 5; ++j) {
            const cplx s(0.8, 1.5);
            const double pd = double(p);
            const cplx rhs = pd / (pd - 1) * g_local(X, s, p, j) - std::pow(pd, s) / (pd - 1) * g_local(X, s, p, j - 1);
            CHECK(std::abs(G_local(X, s, p, j) - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
        }
}

TEST_CASE("G_I at 1 - a1 reduces to three powers") {
    const ShiftSet I{0.012, cplx(-0.02, 0.01), 0.031};
    for (u64 p : {2, 3, 5, 11}) {
        const double pd = double(p);
        const cplx expect = std::pow(pd, -I[1]) + std::pow(pd, -I[2]) - std::pow(pd, -1.0 + I[0] - I[1] - I[2]);
        CHECK(std::abs(G_local(I, 1.0 - I[0], p, 1) - expect) < 1e-12);
    }
}

TEST_CASE("G_local is continuous as the shifts merge") {
    auto at = [](double eps) { return G_local(ShiftSet{0.0, eps, 2 * eps}, 0.9, 3, 1); };
    CHECK(std::abs(at(1e-3) - at(1e-4)) < 1e-2);
}

TEST_CASE("degenerate shifts are rejected") {
    const ShiftSet bad{0.01, 0.01 + 1e-9, 0.02};
    CHECK_THROWS_AS(g_local(bad, 1.0, 2, 1), DegenerateShiftError);
    CHECK_THROWS_AS(G_local(bad, 1.0, 2, 1), DegenerateShiftError);
}

TEST_CASE("closed forms match the defining series for Re s well inside the region") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int n = 0; n < 40; ++n) {
        const auto pt = random_point(rng);
        const cplx s(0.9 + u(rng), 6 * u(rng) - 3);
        for (int a = 0; a <= 5; ++a) {
            const cplx ref = g_local_series(pt.I, s, pt.p, a, 80);
            CHECK(std::abs(g_local(pt.I, s, pt.p, a) - ref) < 1e-11 * std::max(1.0, std::abs(ref)));
        }
        for (int j = 1; j <= 5; ++j) {
            const cplx ref = G_local_series(pt.J, s, pt.p, j, 80);
            CHECK(std::abs(G_local(pt.J, s, pt.p, j) - ref) < 1e-11 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("three routes to the Z local factor agree") {
    std::mt19937_64 rng(12);
    for (int n = 0; n < 100; ++n) {
        const auto pt = random_point(rng);
        const auto lp = LocalPoint::make(pt.p, pt.s, pt.I, pt.J);
        const cplx poly = A_local_poly(lp), sum = A_local_sum(lp);
        CHECK(std::abs(poly - sum) < 1e-10);
        CHECK(std::abs(sum - B_local(pt.p, (1.0 + pt.s) / 2.0, pt.I, pt.J)) < 1e-10);
    }
}

TEST_CASE("A local factor is the normalised local Dirichlet series") {
    // A_p = (sum_e sigma_I(p^e) sigma_J(p^e) p^{-e(1+s)}) / prod (1 - x_i y_j p^{-1-s})^{-1}.
    const ShiftSet I{0.01, cplx(-0.02, 0.01), 0.03}, J{cplx(0.015, -0.02), 0.025, -0.01};
    const cplx s(0.4, 0.7);
    for (u64 p : {2, 3, 13}) {
        const double lp = std::log(double(p));
        cplx series = 0;
        for (int e = 0; e < 200; ++e)
            series += sigma_prime_power(I.values(), lp, e) * sigma_prime_power(J.values(), lp, e) *
                      std::exp(-double(e) * (1.0 + s) * lp);
        cplx zetas = 1;
        for (const auto& a : I)
            for (const auto& b : J) zetas /= 1.0 - std::exp(-(1.0 + s + a + b) * lp);
        CHECK(std::abs(A_local_poly(LocalPoint::make(p, s, I, J)) - series / zetas) < 1e-12);
    }
}

TEST_CASE("identities between the A and C factors hold for every index choice") {
    std::mt19937_64 rng(13);
    for (int n = 0; n < 25; ++n) {
        const auto pt = random_point(rng);
        for (int i1 = 0; i1 < 3; ++i1)
            for (int i2 = 0; i2 < 3; ++i2) {
                CHECK(identity_check(Identity::i, pt.I, pt.J, pt.p, {i1, i2, 0, 0}) < 1e-11);
                CHECK(identity_check(Identity::ii, pt.I, pt.J, pt.p, {i1, i2, 0, 0}) < 1e-11);
                for (int k1 = 0; k1 < 3; ++k1)
                    for (int k2 = 0; k2 < 3; ++k2)
                        if (k1 != i1 && k2 != i2)
                            CHECK(identity_check(Identity::iii, pt.I, pt.J, pt.p, {i1, i2, k1, k2}) < 1e-11);
            }
    }
    CHECK(remaining_index(0, 2) == 1);
    CHECK(remaining_index(1, 0) == 2);
}

TEST_CASE("euler_product refines monotonically") {
    auto f = [](u64 p) { return cplx(1.0 - 1.0 / (double(p) * double(p))); };
    const double target = 6 / (std::numbers::pi * std::numbers::pi);
    auto prev = euler_product(f, 1000, 0.0);
    for (u64 P : {2000ull, 4000ull, 8000ull}) {
        const auto next = euler_product(f, P, 0.0);
        CHECK(std::abs(next.value - prev.value) < std::abs(prev.value) * prev.tail_bound);
        prev = next;
    }
    CHECK(std::abs(prev.value.real() - target) < 2 * prev.tail_bound);
    CHECK_THROWS_AS(euler_product(f, 1000, -0.5), DomainError);
}

TEST_CASE("arithmetic and random-matrix constants") {
    CHECK(a_k_constant(1, 100000).value == cplx(1.0));
    CHECK(std::abs(a_k_constant(2, 100000).value.real() - 6 / (std::numbers::pi * std::numbers::pi)) < 1e-8);
    for (int k : {3, 4})
        CHECK(std::abs(a_k_constant(k, 100000).value - a_k_constant(k, 200000).value) < 1e-8);
    CHECK(g_k_constant(1) == 1);
    CHECK(g_k_constant(2) == 2);
    CHECK(g_k_constant(3) == 42);
    CHECK(g_k_constant(4) == 24024);
}
