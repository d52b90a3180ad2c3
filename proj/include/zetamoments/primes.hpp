#pragma once

#include <cstdint>
#include <vector>

namespace zm {

// Primes <= n by the sieve of Eratosthenes (odd-only bitmap).
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);

// Smallest prime factor of every integer <= n (spf[0] = spf[1] = 0).
std::vector<std::uint32_t> smallest_prime_factor_table(std::uint32_t n);

// mu(1..n); entry 0 unused.
std::vector<std::int8_t> mobius_table(std::uint32_t n);

}  // namespace zm
