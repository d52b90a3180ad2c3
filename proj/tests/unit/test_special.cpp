#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "zetamoments/errors.hpp"
#include "zetamoments/special.hpp"

using namespace zm;

namespace {

constexpr double pi = std::numbers::pi;

// Distance between two logarithms modulo 2 pi i.
double log_distance(cplx a, cplx b) {
    cplx d = a - b;
    d.imag(std::remainder(d.imag(), 2 * pi));
    return std::abs(d);
}

}  // namespace

TEST_CASE("log_gamma on the real axis") {
    for (double x : {0.1, 0.5, 1.0, 2.5, 7.3, 30.0, 170.0})
        CHECK(log_gamma(cplx(x)).real() == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
    CHECK(std::abs(log_gamma(cplx(0.5)) - cplx(0.5 * std::log(pi))) < 1e-14);
}

TEST_CASE("log_gamma reflection and duplication") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> re(-5, 5), im(-100, 100);
    for (int n = 0; n < 100; ++n) {
        const cplx z(re(rng), im(rng));
        if (std::abs(z.imag()) < 0.5) continue;
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        const cplx lhs = log_gamma(z) + log_gamma(1.0 - z);
        const cplx rhs = std::log(pi) - std::log(std::sin(pi * z));
        CHECK(log_distance(lhs, rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
        // Gamma(z) Gamma(z + 1/2) = 2^{1 - 2z} sqrt(pi) Gamma(2z)
        const cplx l2 = log_gamma(z) + log_gamma(z + 0.5);
        const cplx r2 = (1.0 - 2.0 * z) * std::log(2.0) + 0.5 * std::log(pi) + log_gamma(2.0 * z);
        CHECK(log_distance(l2, r2) < 1e-12 * std::max(1.0, std::abs(r2)));
    }
    CHECK_THROWS_AS(log_gamma(cplx(-3.0, 1e-10)), PoleProximityError);
}

TEST_CASE("zeta special values") {
    CHECK(std::abs(zeta(cplx(2.0)) - pi * pi / 6) < 1e-14);
    CHECK(std::abs(zeta(cplx(4.0)) - std::pow(pi, 4) / 90) < 1e-14);
    CHECK(std::abs(zeta(cplx(-1.0)) + 1.0 / 12) < 1e-13);
    CHECK(std::abs(zeta(cplx(0.0)) + 0.5) < 1e-13);
    CHECK(std::abs(zeta(cplx(0.5, 14.134725141734693790))) < 1e-12);
    CHECK_THROWS_AS(zeta(cplx(1.0 + 1e-9, 0.0)), PoleProximityError);
}

TEST_CASE("zeta satisfies the functional equation") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> re(0.01, 0.99), im(-200, 200);
    for (int n = 0; n < 50; ++n) {
        const cplx s(re(rng), im(rng));
        // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s) zeta(1 - s), in logarithms.
        const cplx lchi = s * std::log(2.0) + (s - 1.0) * std::log(pi) + std::log(std::sin(pi * s / 2.0)) +
                          log_gamma(1.0 - s);
        const cplx rhs = std::exp(lchi) * zeta(1.0 - s);
        CHECK(std::abs(zeta(s) - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("Riemann-Siegel against Euler-Maclaurin") {
    for (double t : {100.0, 1000.0, 2345.6}) {
        const cplx em = zeta(cplx(0.5, t));
        const cplx rs = zeta_critical_fast(t);
        CHECK(std::abs(rs - em) < 1e-7 * std::max(1.0, std::abs(em)));
        CHECK(std::abs(std::abs(em) - std::abs(hardy_Z(t))) < 1e-7 * std::max(1.0, std::abs(em)));
        CHECK(std::abs(std::exp(cplx(0, -hardy_theta(t))) * hardy_Z(t) - em) < 1e-7 * std::max(1.0, std::abs(em)));
    }
    // |zeta(1/2 + it)| is even in t.
    CHECK(std::abs(std::abs(zeta(cplx(0.5, 321.0))) - std::abs(zeta(cplx(0.5, -321.0)))) < 1e-12);
    CHECK_THROWS_AS(zeta_critical_fast(20.0), DomainError);
}

TEST_CASE("unit_phase keeps the argument accurate for large t log n") {
    for (std::uint64_t n : {2ull, 17ull, 123456ull})
        for (double t : {1.5, 40.0}) {
            const double a = t * std::log(double(n));
            CHECK(std::abs(unit_phase(t, n) - cplx(std::cos(a), -std::sin(a))) < 1e-13);
        }
}

TEST_CASE("prime zeta values") {
    CHECK(prime_zeta(2) == doctest::Approx(0.45224742004106549850).epsilon(1e-14));
    CHECK(prime_zeta(3) == doctest::Approx(0.17476263929944353642).epsilon(1e-14));
    double head = 0;
    for (double p : {2.0, 3.0, 5.0, 7.0}) head += 1 / (p * p);
    CHECK(prime_power_tail(2, 10) == doctest::Approx(prime_zeta(2) - head).epsilon(1e-12));
}
