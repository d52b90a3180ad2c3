#include "zetamoments/primes.hpp"

namespace zm {

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    if (n < 2) return out;
    out.push_back(2);
    // index i stands for 2i+1
    const std::uint64_t half = (n - 1) / 2;
    std::vector<bool> composite(half + 1, false);
    for (std::uint64_t i = 1; i <= half; ++i) {
        if (composite[i]) continue;
        const std::uint64_t p = 2 * i + 1;
        out.push_back(p);
        for (std::uint64_t j = (p * p - 1) / 2; j <= half; j += p) composite[j] = true;
    }
    return out;
}

std::vector<std::uint32_t> smallest_prime_factor_table(std::uint32_t n) {
    std::vector<std::uint32_t> spf(static_cast<std::size_t>(n) + 1, 0);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (spf[i]) continue;
        for (std::uint64_t j = i; j <= n; j += i)
            if (!spf[j]) spf[j] = static_cast<std::uint32_t>(i);
    }
    return spf;
}

std::vector<std::int8_t> mobius_table(std::uint32_t n) {
    std::vector<std::int8_t> mu(static_cast<std::size_t>(n) + 1, 1);
    mu[0] = 0;
    for (std::uint64_t p : primes_up_to(n)) {
        for (std::uint64_t j = p; j <= n; j += p) mu[j] = static_cast<std::int8_t>(-mu[j]);
        for (std::uint64_t j = p * p; j <= n; j += p * p) mu[j] = 0;
    }
    return mu;
}

}  // namespace zm
