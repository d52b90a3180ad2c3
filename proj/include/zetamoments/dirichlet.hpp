#pragma once

#include <cstdint>

#include "zetamoments/arith.hpp"
#include "zetamoments/local_factors.hpp"

namespace zm {

struct SeriesValue {
    cplx value = 0;
    std::uint64_t terms_used = 0;
    double tail_estimate = 0;  // heuristic, not a certified bound
};

// prod_{x in X} zeta(s + x).
cplx zeta_X(const ShiftSet& X, cplx s);

// sum_{n <= N} sigma_X(n) sigma_Y(n) n^{-1-s}.
SeriesValue Z_truncated(const ShiftSet& X, const ShiftSet& Y, cplx s, std::uint64_t N);

// The arithmetic factor A_{X,Y}(s) of the Z-factorisation for |X| = |Y| = 3.
EulerProductResult A_euler(const ShiftSet& I, const ShiftSet& J, cplx s, std::uint64_t p_max);

// Z_{X,Y}(s) through its zeta factorisation.
cplx Z_factored(const ShiftSet& X, const ShiftSet& Y, cplx s, std::uint64_t p_max = 1000000);

// H over r <= R and l <= L with the shifts a_{i1}, b_{i2} (0-based) selected.
SeriesValue H_truncated(const ShiftSet& I, const ShiftSet& J, cplx s, std::uint64_t R, std::uint64_t L,
                        int i1 = 0, int i2 = 0);
// The plain double loop over (r, l) with Ramanujan sums; reference for tests.
SeriesValue H_truncated_naive(const ShiftSet& I, const ShiftSet& J, cplx s, std::uint64_t R, std::uint64_t L,
                              int i1 = 0, int i2 = 0);

EulerProductResult C_euler(const ShiftSet& I, const ShiftSet& J, cplx s, std::uint64_t p_max, int i1 = 0, int i2 = 0);

cplx H_factored(const ShiftSet& I, const ShiftSet& J, cplx s, std::uint64_t p_max = 1000000, int i1 = 0,
                int i2 = 0);

// l -> G_I(1 - a_{i1}, l) G_J(1 - b_{i2}, l) / l^{2 - a_{i1} - b_{i2}} for l <= L.
std::vector<cplx> singular_coefficients(const ShiftSet& I, const ShiftSet& J, int i1, int i2, std::uint64_t L);

}  // namespace zm
