#pragma once

#include <array>
#include <cstdint>
#include <functional>

#include <boost/multiprecision/cpp_int.hpp>

#include "zetamoments/arith.hpp"

namespace zm {

// Minimum pairwise shift distance accepted by the partial-fraction formulas.
inline constexpr double delta_dist = 1e-6;
// Minimum modulus of a raw partial-fraction denominator 1 - p^{x_i - x_l}.
inline constexpr double delta_den = 1e-8;

// The per-prime variables x_i = p^{-a_i}, y_j = p^{-b_j}, u = 1/p, v = p^{-2s}.
// Built only through make(), which derives every variable from (p, s, I, J).
struct LocalPoint {
    u64 p = 2;
    double log_p = 0;
    cplx s = 0;
    ShiftSet I, J;
    std::array<cplx, 3> x{}, y{};
    cplx u = 0, v = 0;

    static LocalPoint make(u64 p, cplx s, const ShiftSet& I, const ShiftSet& J);
};

struct EulerProductResult {
    cplx value = 1;
    u64 p_max = 0;
    double tail_bound = 0;  // estimated modulus of the omitted part of the log-sum
};

// The degree-six polynomial P of the Z-factorisation (all nine x_i y_j U terms).
cplx poly_P(const std::array<cplx, 3>& X, const std::array<cplx, 3>& Y, cplx U);

// The local factor Q of the H-factorisation.  (X1, Y1) are the selected
// variables, (X2, X3) and (Y2, Y3) the remaining ones.
cplx poly_Q(cplx X2, cplx X3, cplx Y2, cplx Y3, cplx X1, cplx Y1, cplx U, cplx V);

cplx g_local(const ShiftSet& X, cplx s, u64 p, int alpha);
cplx G_local(const ShiftSet& X, cplx s, u64 p, int j);
// Direct summation of the defining series (ratio of truncated local sums, and
// the Moebius double sum over d | p^j built from it); the oracle for the closed forms.
cplx g_local_series(const ShiftSet& X, cplx s, u64 p, int alpha, int terms = 60);
cplx G_local_series(const ShiftSet& X, cplx s, u64 p, int j, int terms = 60);

cplx A_local_poly(const LocalPoint& pt);
cplx A_local_sum(const LocalPoint& pt);
// Local factor of the B-series written in the variable z, where the
// Dirichlet series is sum sigma_I(n) sigma_J(n) n^{-2z}; A(s) = B(z) at 2z = 1 + s.
cplx B_local(u64 p, cplx z, const ShiftSet& I, const ShiftSet& J);

// Q with the shifts a_{i1}, b_{i2} (0-based indices) in the selected role.
cplx C_local(const ShiftSet& I, const ShiftSet& J, int i1, int i2, cplx s, u64 p);

// Product over primes p <= p_max of factor(p).  sigma is the real-part
// parameter such that factor(p) = 1 + O(p^{-2-2 sigma}).
EulerProductResult euler_product(const std::function<cplx(u64)>& factor, u64 p_max, double sigma);

EulerProductResult a_k_constant(int k, u64 p_max);
boost::multiprecision::cpp_rational g_k_constant(int k);

enum class Identity { i, ii, iii };

// Index data for the identities.  For (i) and (ii) only (i1, i2) matter; (iii)
// also uses (k1, k2).  All indices are 0-based.
struct IdentityIndices {
    int i1 = 0, i2 = 0, k1 = 1, k2 = 1;
};

// Third index r(i, k): the unique element of {0,1,2} different from i and k.
int remaining_index(int i, int k);

// |LHS - RHS| of the chosen identity between the A- and C-local factors, both
// sides assembled from the variables of a single LocalPoint.
double identity_check(Identity which, const ShiftSet& I, const ShiftSet& J, u64 p,
                      const IdentityIndices& idx = {});

}  // namespace zm
