#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "zetamoments/arith.hpp"
#include "zetamoments/dirichlet.hpp"
#include "zetamoments/local_factors.hpp"

namespace zm {

// exp(-1/u) smoothstep: 0 for u <= 0, 1 for u >= 1, C-infinity in between.
double smoothstep(double u);

// f(x, y) = w(x/X) w(y/Y) with w supported in [1, 2]; w rises over [1, 1 + lambda]
// and falls over [2 - lambda, 2], lambda = 1/(2P).
struct SmoothWindow {
    double X = 1, Y = 1, P = 1;
    double lambda = 0.5;

    double profile(double u) const;
    double operator()(double x, double y) const { return profile(x / X) * profile(y / Y); }
    // Points of [1, 2] where the profile changes analytic form.
    std::vector<double> profile_breaks() const;
};

SmoothWindow smooth_window(double X, double Y, double P = 1);

// max over a probe grid of |x^i y^j f^{(i,j)}| / P^{i+j}, i + j <= max_order, by
// central finite differences.
double window_derivative_constant(const SmoothWindow& f, int max_order = 4, int grid = 64);

inline constexpr std::uint64_t default_sieve_limit = 2'000'000;

// sigma_X(0..limit) as a table (entry 0 unused).
std::vector<cplx> sigma_table(const ShiftSet& X, std::uint64_t limit);

// sum_{m - n = r} sigma_I(m) sigma_J(n) f(m, n).
cplx brute_divisor_sum(const SmoothWindow& f, const ShiftSet& I, const ShiftSet& J, i64 r,
                       std::uint64_t sieve_limit = default_sieve_limit);
// Same sum with precomputed tables (index = argument).
cplx brute_divisor_sum(const SmoothWindow& f, std::span<const cplx> sigma_I, std::span<const cplx> sigma_J, i64 r);
// Zero shifts: sum d_3(n + r) d_3(n) f(n + r, n) from a d_3 table.
double brute_divisor_sum_d3(const SmoothWindow& f, std::span<const std::uint64_t> d3, i64 r);
// Direct per-n factorisation with a plain loop; the test oracle.
cplx naive_divisor_sum(const SmoothWindow& f, const ShiftSet& I, const ShiftSet& J, i64 r);

// G_I(1 - a_{i1}, p^j) from the three-shift closed form.
cplx G_I3(const ShiftSet& I, int i1, double log_p, int j);

// sum_{q <= q_max} c_q(r) G_I(1-a_{i1}, q) G_J(1-b_{i2}, q) / q^{2 - a_{i1} - b_{i2}}.
SeriesValue singular_series(const ShiftSet& I, const ShiftSet& J, int i1, int i2, i64 r, std::uint64_t q_max);
// The same series as its Euler product over p <= p_max.
EulerProductResult singular_series_euler(const ShiftSet& I, const ShiftSet& J, int i1, int i2, i64 r,
                                         std::uint64_t p_max);

// int_{max(0,r)}^infty f(x, x - r) x^{-a} (x - r)^{-b} dx.
cplx archimedean_integral(const SmoothWindow& f, cplx a, cplx b, i64 r, double rel_tol = 1e-12);

enum class SingularRoute { euler, qsum };

struct DivisorMainTermOptions {
    SingularRoute route = SingularRoute::euler;
    std::uint64_t q_max = 100000;   // qsum route
    std::uint64_t p_max = 1000000;  // euler route
};

// The nine-term main term for distinct shifts.
cplx divisor_main_term(const SmoothWindow& f, const ShiftSet& I, const ShiftSet& J, i64 r,
                       const DivisorMainTermOptions& opt = {});
// Main terms for several r sharing one set of shifts (one pass over the primes).
std::vector<cplx> divisor_main_terms(const SmoothWindow& f, const ShiftSet& I, const ShiftSet& J,
                                     std::span<const i64> rs, const DivisorMainTermOptions& opt = {});

// Shift pattern used for the zero-shift limit: a = eps * pa, b = eps * pb.
struct ShiftPattern {
    std::array<double, 3> a{1.0 / 3, 2.0 / 3, 1.0};
    std::array<double, 3> b{0.5, 2.5 / 3, 3.5 / 3};
};

struct ZeroShiftOptions {
    double delta = 1e-2;  // radius of the circle in the common shift scale
    int nodes = 16;
    ShiftPattern pattern{};
    DivisorMainTermOptions main{};
};

struct ZeroShiftValue {
    double value = 0;       // mean over the radius-delta circle
    double value_half = 0;  // same at radius delta/2
    double imag = 0;        // imaginary part of the delta mean (0 up to rounding)
    double relative_gap = 0;
    bool flagged = false;  // relative_gap > 1%
};

std::vector<ZeroShiftValue> zero_shift_limit_main_terms(const SmoothWindow& f, std::span<const i64> rs,
                                                        const ZeroShiftOptions& opt = {});
ZeroShiftValue zero_shift_limit_main_term(const SmoothWindow& f, i64 r, const ZeroShiftOptions& opt = {});

struct DivisorReport {
    i64 r = 0;
    double X = 0;
    double brute = 0;
    double main_term = 0;
    double ratio = 0;  // main_term / brute
    std::uint64_t p_max = 0;
    double delta = 0;
    double delta_gap = 0;
    bool flagged = false;
};

// Zero-shift comparison at window scale X (= Y, P = 1) for each r.
std::vector<DivisorReport> divisor_report(double X, std::span<const i64> rs, const ZeroShiftOptions& opt = {},
                                          std::uint64_t sieve_limit = default_sieve_limit);

}  // namespace zm
