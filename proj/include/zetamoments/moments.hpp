#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zetamoments/arith.hpp"

namespace zm {

// Smooth bump supported in [c1 T, c2 T], equal to 1 on [c1 T + T0, c2 T - T0].
struct WeightSpec {
    double T = 1000, T0 = 0, c1 = 0.5, c2 = 1.0;

    // T0 = T^0.8, lowered to (c2 - c1) T / 2 when the ramps would overlap.
    static WeightSpec standard(double T, double c1 = 0.5, double c2 = 1.0, double t0_exponent = 0.8);
    // Throws ConfigError for c1 <= 0, c2 <= c1, (c2 - c1) T < 2 T0 or T0 < T^{3/4}.
    void validate() const;
    double lo() const { return c1 * T; }
    double hi() const { return c2 * T; }
};

double omega(const WeightSpec& spec, double t);

struct SwapPair {
    std::vector<int> S, Tset;  // 0-based indices into I and J
    ShiftSet I_S, J_T;
    cplx exponent_sum = 0;  // sum of the a's in S plus the b's in Tset
};

std::vector<SwapPair> swap_terms(const ShiftSet& I, const ShiftSet& J, int j);
std::vector<SwapPair> all_swap_terms(const ShiftSet& I, const ShiftSet& J);

// int (t/2pi)^{-e} omega(t) dt.
cplx t_power_integral(const WeightSpec& spec, cplx e, double rel_tol = 1e-13);

// Z_{I_S,J_T}(0) and the exponent of (t/2pi) for every swap pair.
struct SwapValue {
    SwapPair pair;
    cplx Z = 0;
};

struct MainTermOptions {
    std::uint64_t p_max = 1000000;
    double pole_guard = 1e-4;  // minimum |x + y| over every swapped pair
};

// Uses one pass over the primes for all swap pairs when k = 3.
std::vector<SwapValue> swap_values(const ShiftSet& I, const ShiftSet& J, const MainTermOptions& opt = {});
// Reference route: Z_factored called separately for every pair.
std::vector<SwapValue> swap_values_reference(const ShiftSet& I, const ShiftSet& J, const MainTermOptions& opt = {});

cplx swap_sum(std::span<const SwapValue> values, const WeightSpec& spec);
cplx swap_main_term(const ShiftSet& I, const ShiftSet& J, const WeightSpec& spec, const MainTermOptions& opt = {});

struct ZeroShiftMomentOptions {
    double delta = 0.1;  // circle radius in the common shift scale
    int nodes = 16;
    std::array<double, 3> pattern_a{1.0 / 3, 2.0 / 3, 1.0};
    std::array<double, 3> pattern_b{0.5, 2.5 / 3, 3.5 / 3};
    MainTermOptions main{};
};

struct ZeroShiftMoment {
    double value = 0;  // mean over the radius-delta circle
    double value_half = 0;
    double imag = 0;
    double relative_gap = 0;
    bool flagged = false;  // relative_gap > 1%
};

// Zero-shift limit of the swap sum for each weight in specs.
std::vector<ZeroShiftMoment> zero_shift_main_terms(int k, std::span<const WeightSpec> specs,
                                                   const ZeroShiftMomentOptions& opt = {});

struct RawMomentOptions {
    double step = 0;        // 0 selects 0.02 / log T
    double refine_tol = 1e-3;  // allowed relative gap between steps h and 2h
};

struct RawMomentResult {
    cplx value = 0;
    cplx coarse = 0;  // the same rule with step 2h
    double relative_gap = 0;
    double step = 0;
    std::uint64_t points = 0;
};

// int prod zeta(1/2 + a + it) zeta(1/2 + b - it) omega(t) dt by the trapezoid rule.
// Throws RefinementError when the h and 2h values differ by more than refine_tol.
RawMomentResult raw_moment(const ShiftSet& I, const ShiftSet& J, const WeightSpec& spec,
                           const RawMomentOptions& opt = {});
// Zero shifts: int |zeta(1/2 + it)|^{2k} omega(t) dt with Riemann-Siegel values.
RawMomentResult raw_moment_zero(int k, const WeightSpec& spec, const RawMomentOptions& opt = {});
RawMomentResult raw_moment_zero_serial(int k, const WeightSpec& spec, const RawMomentOptions& opt = {});

// g_k a_k / (k^2)! T (log T)^{k^2}.
double leading_asymptotic(int k, double T);
double leading_coefficient(int k);  // g_k a_k / (k^2)!

struct ComparisonReport {
    std::string experiment;
    int k = 0;
    double T = 0;
    double raw = 0, raw_gap = 0;
    double main = 0, main_gap = 0;
    double leading = 0;
    double ratio = 0;          // raw / main
    double ratio_leading = 0;  // raw / (integral of the leading density against omega)
    bool flagged = false;
};

struct LadderOptions {
    double c1 = 0.5, c2 = 1.0, t0_exponent = 0.8;
    ZeroShiftMomentOptions main{};
    RawMomentOptions raw{};
};

std::vector<ComparisonReport> moment_ladder(int k, std::span<const double> Ts, const LadderOptions& opt = {});

}  // namespace zm
