#pragma once

// Bulk kernels shared by the series, moment and divisor code.  Each parallel
// kernel splits its range into fixed-size blocks, fills one partial result per
// block and then reduces the partials in ascending block order, so the result
// does not depend on the number of OpenMP threads.  The *_serial variants are
// straightforward reference implementations kept for tests and benchmarks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "zetamoments/arith.hpp"
#include "zetamoments/primes.hpp"

namespace zm {

inline constexpr std::uint64_t kernel_block = 1 << 15;

namespace detail {

// Values of a multiplicative function at small prime powers, cached once.
template <class Local>
struct SmallPrimeCache {
    std::vector<std::uint64_t> primes;
    std::vector<std::vector<cplx>> values;  // values[i][e], e >= 0

    SmallPrimeCache(std::uint64_t n_max, Local& local) {
        const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n_max))) + 1;
        primes = primes_up_to(root);
        values.resize(primes.size());
        for (std::size_t i = 0; i < primes.size(); ++i) {
            int emax = 0;
            for (std::uint64_t q = 1; q <= n_max / primes[i]; q *= primes[i]) ++emax;
            values[i].resize(emax + 1);
            values[i][0] = 1;
            for (int e = 1; e <= emax; ++e) values[i][e] = local(primes[i], e);
        }
    }
};

// f(lo..lo+count-1) into out, using the cached small primes and treating the
// cofactor left after dividing them out as a single large prime.
template <class Local>
void multiplicative_segment(std::uint64_t lo, std::uint64_t count, const SmallPrimeCache<Local>& cache,
                            Local& local, cplx* out, std::uint64_t* rem) {
    for (std::uint64_t i = 0; i < count; ++i) {
        out[i] = 1;
        rem[i] = lo + i;
    }
    const std::uint64_t hi = lo + count;  // exclusive
    for (std::size_t k = 0; k < cache.primes.size(); ++k) {
        const std::uint64_t p = cache.primes[k];
        if (p * p >= hi) break;  // what is left is 1 or a single prime
        std::uint64_t first = (lo + p - 1) / p * p;
        for (std::uint64_t m = first; m < hi; m += p) {
            const std::uint64_t i = m - lo;
            int e = 0;
            std::uint64_t r = rem[i];
            while (r % p == 0) {
                r /= p;
                ++e;
            }
            rem[i] = r;
            out[i] *= cache.values[k][e];
        }
    }
    for (std::uint64_t i = 0; i < count; ++i)
        if (rem[i] > 1) out[i] *= local(rem[i], 1);
}

}  // namespace detail

// f(0..n) for a multiplicative f given by local(p, e); f(0) is set to 0.
template <class Local>
std::vector<cplx> multiplicative_table(std::uint64_t n, Local local) {
    std::vector<cplx> out(n + 1, cplx(0));
    if (n == 0) return out;
    detail::SmallPrimeCache<Local> cache(n, local);
    const std::uint64_t blocks = (n + kernel_block - 1) / kernel_block;
#pragma omp parallel
    {
        std::vector<std::uint64_t> rem(kernel_block);
#pragma omp for schedule(dynamic)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
            const std::uint64_t lo = 1 + b * kernel_block;
            const std::uint64_t count = std::min<std::uint64_t>(kernel_block, n + 1 - lo);
            detail::multiplicative_segment(lo, count, cache, local, out.data() + lo, rem.data());
        }
    }
    return out;
}

template <class Local>
std::vector<cplx> multiplicative_table_serial(std::uint64_t n, Local local) {
    std::vector<cplx> out(n + 1, cplx(0));
    for (std::uint64_t m = 1; m <= n; ++m) {
        cplx v = 1;
        for (auto [p, e] : factorize(m).factors) v *= local(p, e);
        out[m] = v;
    }
    return out;
}

// sum |f(n) w(n)| over (N/2, N] and over (N/4, N/2].
struct OctaveSums {
    double last = 0, previous = 0;
};

// sum_{n=1}^{N} f(n) w(n) for multiplicative f, without storing the table.
template <class Local, class Weight>
cplx weighted_multiplicative_sum(std::uint64_t N, Local local, Weight weight, OctaveSums* octaves = nullptr) {
    if (octaves) *octaves = {};
    if (N == 0) return 0;
    detail::SmallPrimeCache<Local> cache(N, local);
    const std::uint64_t blocks = (N + kernel_block - 1) / kernel_block;
    std::vector<cplx> partial(blocks, cplx(0));
    std::vector<double> partial_last(blocks, 0.0), partial_prev(blocks, 0.0);
#pragma omp parallel
    {
        std::vector<std::uint64_t> rem(kernel_block);
        std::vector<cplx> vals(kernel_block);
#pragma omp for schedule(dynamic)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
            const std::uint64_t lo = 1 + b * kernel_block;
            const std::uint64_t count = std::min<std::uint64_t>(kernel_block, N + 1 - lo);
            detail::multiplicative_segment(lo, count, cache, local, vals.data(), rem.data());
            cplx acc = 0;
            double acc_last = 0, acc_prev = 0;
            for (std::uint64_t i = 0; i < count; ++i) {
                const cplx term = vals[i] * weight(lo + i);
                acc += term;
                if (2 * (lo + i) > N)
                    acc_last += std::abs(term);
                else if (4 * (lo + i) > N)
                    acc_prev += std::abs(term);
            }
            partial[b] = acc;
            partial_last[b] = acc_last;
            partial_prev[b] = acc_prev;
        }
    }
    cplx total = 0;
    for (const auto& v : partial) total += v;
    if (octaves)
        for (std::uint64_t b = 0; b < blocks; ++b) {
            octaves->last += partial_last[b];
            octaves->previous += partial_prev[b];
        }
    return total;
}

template <class Local, class Weight>
cplx weighted_multiplicative_sum_serial(std::uint64_t N, Local local, Weight weight, OctaveSums* octaves = nullptr) {
    if (octaves) *octaves = {};
    cplx total = 0;
    for (std::uint64_t m = 1; m <= N; ++m) {
        cplx v = 1;
        for (auto [p, e] : factorize(m).factors) v *= local(p, e);
        total += v * weight(m);
        if (octaves && 2 * m > N)
            octaves->last += std::abs(v * weight(m));
        else if (octaves && 4 * m > N)
            octaves->previous += std::abs(v * weight(m));
    }
    return total;
}

// sum over the listed primes of log factor(p), reduced in ascending-p order.
template <class Factor>
cplx prime_log_sum(std::span<const std::uint64_t> primes, Factor factor) {
    const std::uint64_t n = primes.size();
    const std::uint64_t blocks = (n + kernel_block - 1) / kernel_block;
    std::vector<cplx> partial(blocks, cplx(0));
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        const std::uint64_t lo = b * kernel_block;
        const std::uint64_t hi = std::min<std::uint64_t>(n, lo + kernel_block);
        cplx acc = 0;
        for (std::uint64_t i = lo; i < hi; ++i) acc += std::log(cplx(factor(primes[i])));
        partial[b] = acc;
    }
    cplx total = 0;
    for (const auto& v : partial) total += v;
    return total;
}

template <class Factor>
cplx prime_log_sum_serial(std::span<const std::uint64_t> primes, Factor factor) {
    cplx total = 0;
    for (auto p : primes) total += std::log(cplx(factor(p)));
    return total;
}

// sum_{n=lo}^{hi} f(n) over an integer range, blocks reduced in ascending order.
template <class F>
auto range_sum(std::int64_t lo, std::int64_t hi, F f) -> decltype(f(lo)) {
    using R = decltype(f(lo));
    if (hi < lo) return R(0);
    const std::uint64_t n = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t blocks = (n + kernel_block - 1) / kernel_block;
    std::vector<R> partial(blocks, R(0));
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        const std::int64_t a = lo + b * static_cast<std::int64_t>(kernel_block);
        const std::int64_t e = std::min<std::int64_t>(hi, a + static_cast<std::int64_t>(kernel_block) - 1);
        R acc = 0;
        for (std::int64_t i = a; i <= e; ++i) acc += f(i);
        partial[b] = acc;
    }
    R total = 0;
    for (const auto& v : partial) total += v;
    return total;
}

template <class F>
auto range_sum_serial(std::int64_t lo, std::int64_t hi, F f) -> decltype(f(lo)) {
    using R = decltype(f(lo));
    R total = 0;
    for (std::int64_t i = lo; i <= hi; ++i) total += f(i);
    return total;
}

// Composite trapezoid rule sum_{i=0}^{n} w_i f(a + i h), w_0 = w_n = 1/2.
// f may return a real or complex value.
template <class F>
auto trapezoid(double a, double h, std::uint64_t n, F f) -> decltype(f(a)) {
    using R = decltype(f(a));
    const std::uint64_t blocks = (n + 1 + kernel_block - 1) / kernel_block;
    std::vector<R> partial(blocks, R(0));
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        const std::uint64_t lo = b * kernel_block;
        const std::uint64_t hi = std::min<std::uint64_t>(n + 1, lo + kernel_block);
        R acc = 0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            R v = f(a + static_cast<double>(i) * h);
            acc += (i == 0 || i == n) ? v * 0.5 : v;
        }
        partial[b] = acc;
    }
    R total = 0;
    for (const auto& v : partial) total += v;
    return total * h;
}

template <class F>
auto trapezoid_serial(double a, double h, std::uint64_t n, F f) -> decltype(f(a)) {
    using R = decltype(f(a));
    R total = 0;
    for (std::uint64_t i = 0; i <= n; ++i) {
        R v = f(a + static_cast<double>(i) * h);
        total += (i == 0 || i == n) ? v * 0.5 : v;
    }
    return total * h;
}

}  // namespace zm
