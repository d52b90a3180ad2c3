// Serial reference kernels against their OpenMP counterparts.

#include <cmath>
#include <complex>

#include <benchmark/benchmark.h>

#include "zetamoments/kernels.hpp"
#include "zetamoments/moments.hpp"
#include "zetamoments/primes.hpp"

namespace {

using zm::cplx;

// Local factor of n^{-s} d_3(n) style coefficients: C(e+2, 2) p^{-e s}.
struct D3Local {
    cplx s{0.75, 3.0};
    cplx operator()(std::uint64_t p, int e) const {
        return 0.5 * (e + 1) * (e + 2) * std::exp(-static_cast<double>(e) * s * std::log(static_cast<double>(p)));
    }
};

double smooth_weight(std::uint64_t n) { return std::exp(-static_cast<double>(n) * 1e-6); }

void BM_multiplicative_table(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(zm::multiplicative_table(n, D3Local{}));
    state.SetItemsProcessed(state.iterations() * n);
}

void BM_multiplicative_table_serial(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(zm::multiplicative_table_serial(n, D3Local{}));
    state.SetItemsProcessed(state.iterations() * n);
}

void BM_weighted_sum(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(zm::weighted_multiplicative_sum(n, D3Local{}, smooth_weight));
    state.SetItemsProcessed(state.iterations() * n);
}

void BM_weighted_sum_serial(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(zm::weighted_multiplicative_sum_serial(n, D3Local{}, smooth_weight));
    state.SetItemsProcessed(state.iterations() * n);
}

void BM_prime_log_sum(benchmark::State& state) {
    const auto primes = zm::primes_up_to(static_cast<std::uint64_t>(state.range(0)));
    auto factor = [](std::uint64_t p) { return 1.0 - std::pow(static_cast<double>(p), -1.3); };
    for (auto _ : state) benchmark::DoNotOptimize(zm::prime_log_sum(primes, factor));
}

void BM_prime_log_sum_serial(benchmark::State& state) {
    const auto primes = zm::primes_up_to(static_cast<std::uint64_t>(state.range(0)));
    auto factor = [](std::uint64_t p) { return 1.0 - std::pow(static_cast<double>(p), -1.3); };
    for (auto _ : state) benchmark::DoNotOptimize(zm::prime_log_sum_serial(primes, factor));
}

void BM_trapezoid(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    auto f = [](double t) { return std::cos(t) * std::exp(-t * 1e-3); };
    for (auto _ : state) benchmark::DoNotOptimize(zm::trapezoid(0.0, 1e-3, n, f));
}

void BM_trapezoid_serial(benchmark::State& state) {
    const auto n = static_cast<std::uint64_t>(state.range(0));
    auto f = [](double t) { return std::cos(t) * std::exp(-t * 1e-3); };
    for (auto _ : state) benchmark::DoNotOptimize(zm::trapezoid_serial(0.0, 1e-3, n, f));
}

void BM_raw_moment_zero(benchmark::State& state) {
    const auto spec = zm::WeightSpec::standard(static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(zm::raw_moment_zero(2, spec));
}

void BM_raw_moment_zero_serial(benchmark::State& state) {
    const auto spec = zm::WeightSpec::standard(static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(zm::raw_moment_zero_serial(2, spec));
}

}  // namespace

BENCHMARK(BM_multiplicative_table)->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_multiplicative_table_serial)->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_weighted_sum)->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_weighted_sum_serial)->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_prime_log_sum)->Arg(1 << 22)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_prime_log_sum_serial)->Arg(1 << 22)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_trapezoid)->Arg(1 << 22)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_trapezoid_serial)->Arg(1 << 22)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_raw_moment_zero)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_raw_moment_zero_serial)->Arg(300)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
