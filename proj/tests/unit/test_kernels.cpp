#include <doctest.h>

#include <cmath>

#include <omp.h>

#include "zetamoments/arith.hpp"
#include "zetamoments/kernels.hpp"

using namespace zm;

namespace {

const std::vector<cplx> X{0.01, cplx(-0.02, 0.01), 0.03};

auto sigma_local() {
    return [](std::uint64_t p, int e) { return sigma_prime_power(X, std::log(double(p)), e); };
}

}  // namespace

TEST_CASE("segmented multiplicative table matches trial factorisation") {
    const std::uint64_t n = 70000;  // spans more than one block
    const auto fast = multiplicative_table(n, sigma_local());
    const auto slow = multiplicative_table_serial(n, sigma_local());
    REQUIRE(fast.size() == slow.size());
    double worst = 0;
    for (std::uint64_t i = 1; i <= n; ++i) worst = std::max(worst, std::abs(fast[i] - slow[i]) / std::abs(slow[i]));
    CHECK(worst < 1e-13);
    CHECK(std::abs(fast[360] - sigma_shifted(X, 360)) < 1e-12);
}

TEST_CASE("weighted sums: parallel vs serial, octave bookkeeping") {
    auto w = [](std::uint64_t n) { return std::pow(double(n), -1.5); };
    OctaveSums o1, o2;
    const cplx a = weighted_multiplicative_sum(100000, sigma_local(), w, &o1);
    const cplx b = weighted_multiplicative_sum_serial(100000, sigma_local(), w, &o2);
    CHECK(std::abs(a - b) < 1e-12 * std::abs(b));
    CHECK(o1.last == doctest::Approx(o2.last).epsilon(1e-12));
    CHECK(o1.previous == doctest::Approx(o2.previous).epsilon(1e-12));
    CHECK(o1.last < o1.previous);
}

TEST_CASE("range, prime-log and trapezoid reductions") {
    auto f = [](std::int64_t i) { return 1.0 / double(i * i); };
    CHECK(range_sum(1, 200000, f) == doctest::Approx(range_sum_serial(1, 200000, f)).epsilon(1e-14));
    const auto primes = primes_up_to(100000);
    auto lf = [](std::uint64_t p) { return std::log(cplx(1.0 - 1.0 / double(p * p))); };
    CHECK(std::abs(prime_log_sum(primes, lf) - prime_log_sum_serial(primes, lf)) < 1e-14);
    auto g = [](double x) { return std::exp(-x * x); };
    const double h = 1e-3;
    CHECK(trapezoid(-8.0, h, 16000, g) == doctest::Approx(trapezoid_serial(-8.0, h, 16000, g)).epsilon(1e-14));
    CHECK(trapezoid(-8.0, h, 16000, g) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("block reductions are independent of the thread count") {
    auto f = [](std::int64_t i) { return std::sin(double(i)) / double(i); };
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const double a = range_sum(1, 300000, f);
    omp_set_num_threads(3);
    const double b = range_sum(1, 300000, f);
    omp_set_num_threads(saved);
    CHECK(a == b);
}
