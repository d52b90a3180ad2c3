#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace zm {

using cplx = std::complex<double>;
using u64 = std::uint64_t;
using i64 = std::int64_t;

struct PrimePower {
    u64 p;
    int e;
    bool operator==(const PrimePower&) const = default;
};

struct Factorization {
    u64 n = 1;
    std::vector<PrimePower> factors;  // increasing p
};

Factorization factorize(u64 n);
bool is_prime(u64 n);
std::vector<u64> divisors(u64 n);

// p^{-x} as exp(-x log p).  Every shifted quantity in the library goes
// through this so that the same rounding is seen everywhere.
inline cplx pow_neg(double log_p, cplx x) { return std::exp(-x * log_p); }
inline cplx pow_neg(u64 p, cplx x) { return pow_neg(std::log(static_cast<double>(p)), x); }

// Ordered multiset of one to three small complex shifts.
class ShiftSet {
public:
    static constexpr double max_modulus = 0.45;

    ShiftSet() = default;
    ShiftSet(std::initializer_list<cplx> shifts);
    explicit ShiftSet(std::vector<cplx> shifts);

    std::size_t size() const { return shifts_.size(); }
    const cplx& operator[](std::size_t i) const { return shifts_[i]; }
    std::span<const cplx> values() const { return shifts_; }
    auto begin() const { return shifts_.begin(); }
    auto end() const { return shifts_.end(); }

    double min_gap() const { return min_gap_; }
    cplx sum() const;
    ShiftSet negated() const;

    // Throws DegenerateShiftError when two shifts are closer than tol.
    void require_distinct(double tol, const std::string& context) const;

    std::string to_string() const;

private:
    void validate();
    std::vector<cplx> shifts_;
    double min_gap_ = 0.0;
};

// Complete homogeneous symmetric polynomials h_0..h_emax of z.
std::vector<cplx> complete_homogeneous(std::span<const cplx> z, int emax);

// sigma_X(p^e): sum over ordered ways of spreading e copies of p over the slots.
cplx sigma_prime_power(std::span<const cplx> X, double log_p, int e);

cplx sigma_shifted(const ShiftSet& X, u64 n);
cplx sigma_shifted(std::span<const cplx> X, u64 n);

// d_k(1..limit); entry 0 is unused.  Throws ResourceError if the table would
// exceed memory_budget bytes.
std::vector<u64> sieve_dk(int k, u64 limit, std::size_t memory_budget = std::size_t(1) << 30);

int mobius(u64 n);
u64 euler_phi(u64 n);
i64 ramanujan_sum(u64 q, i64 r);

}  // namespace zm
