#include "zetamoments/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zetamoments/errors.hpp"
#include "zetamoments/kernels.hpp"
#include "zetamoments/primes.hpp"
#include "zetamoments/special.hpp"

namespace zm {

namespace {

double max_abs_real(const ShiftSet& X) {
    double m = 0;
    for (const auto& x : X) m = std::max(m, std::abs(x.real()));
    return m;
}

cplx checked_zeta(cplx s, const char* ctx) {
    if (std::abs(s - 1.0) <= 1e-8)
        throw PoleProximityError(std::string(ctx) + ": zeta argument within 1e-8 of the pole");
    return zeta(s);
}

void check_index(int i, std::size_t n, const char* ctx) {
    if (i < 0 || static_cast<std::size_t>(i) >= n) throw DomainError(std::string(ctx) + ": shift index out of range");
}

// Extrapolates the absolute octave sums geometrically: with rho the ratio of the
// last two octaves the omitted part is about last * rho / (1 - rho).
double octave_tail(const OctaveSums& o) {
    if (o.last == 0) return 0;
    if (!(o.previous > 0)) return std::numeric_limits<double>::infinity();
    const double rho = o.last / o.previous;
    if (rho >= 1) return std::numeric_limits<double>::infinity();
    return o.last * rho / (1 - rho);
}

}  // namespace

cplx zeta_X(const ShiftSet& X, cplx s) {
    cplx v = 1;
    for (const auto& x : X) v *= checked_zeta(s + x, "zeta_X");
    return v;
}

SeriesValue Z_truncated(const ShiftSet& X, const ShiftSet& Y, cplx s, std::uint64_t N) {
    const std::vector<cplx> xs(X.begin(), X.end()), ys(Y.begin(), Y.end());
    auto local = [&](std::uint64_t p, int e) {
        const double lp = std::log(static_cast<double>(p));
        return sigma_prime_power(xs, lp, e) * sigma_prime_power(ys, lp, e) * pow_neg(lp, double(e) * (1.0 + s));
    };
    SeriesValue r;
    OctaveSums octaves;
    r.value = weighted_multiplicative_sum(N, local, [](std::uint64_t) { return 1.0; }, &octaves);
    r.terms_used = N;
    r.tail_estimate = octave_tail(octaves);
    return r;
}

EulerProductResult A_euler(const ShiftSet& I, const ShiftSet& J, cplx s, std::uint64_t p_max) {
    if (I.size() != 3 || J.size() != 3) throw DomainError("A_euler: needs |I| = |J| = 3");
    const double sigma = s.real() - max_abs_real(I) - max_abs_real(J);
    return euler_product([&](std::uint64_t p) { return A_local_poly(LocalPoint::make(p, s, I, J)); }, p_max, sigma);
}

cplx Z_factored(const ShiftSet& X, const ShiftSet& Y, cplx s, std::uint64_t p_max) {
    if (X.size() != Y.size()) throw DomainError("Z_factored: needs |X| = |Y|");
    if (s.real() <= -0.4) throw DomainError("Z_factored: needs Re(s) > -0.4");
    cplx v = 1;
    for (const auto& x : X)
        for (const auto& y : Y) v *= checked_zeta(1.0 + s + x + y, "Z_factored");
    switch (X.size()) {
        case 1:
            return v;
        case 2:
            return v / zeta(2.0 + 2.0 * s + X.sum() + Y.sum());
        default:
            return v * A_euler(X, Y, s, p_max).value;
    }
}

std::vector<cplx> singular_coefficients(const ShiftSet& I, const ShiftSet& J, int i1, int i2, std::uint64_t L) {
    check_index(i1, I.size(), "singular_coefficients");
    check_index(i2, J.size(), "singular_coefficients");
    const cplx a = I[i1], b = J[i2];
    auto local = [&](std::uint64_t p, int j) {
        return G_local(I, 1.0 - a, p, j) * G_local(J, 1.0 - b, p, j) * pow_neg(p, double(j) * (2.0 - a - b));
    };
    return multiplicative_table(L, local);
}

SeriesValue H_truncated(const ShiftSet& I, const ShiftSet& J, cplx s, std::uint64_t R, std::uint64_t L, int i1,
                        int i2) {
    const auto alpha = singular_coefficients(I, J, i1, i2, L);
    const cplx c = I[i1] + J[i2] + 2.0 * s;
    // prefix sums of r^{-c}
    std::vector<cplx> S(R + 1, cplx(0));
    for (std::uint64_t r = 1; r <= R; ++r) S[r] = S[r - 1] + std::exp(-c * std::log(static_cast<double>(r)));
    const auto mu = mobius_table(L);

    // inner[l] = sum_{d | l} d^{1-c} mu(l/d) S(R/d)
    std::vector<cplx> inner(L + 1, cplx(0));
    std::vector<double> weight(L + 1, 0.0);  // number of squarefree cofactors, for the r-tail
    for (std::uint64_t d = 1; d <= L; ++d) {
        const cplx dc = std::exp((1.0 - c) * std::log(static_cast<double>(d))) * S[R / d];
        for (std::uint64_t e = 1, l = d; l <= L; ++e, l += d) {
            if (mu[e] == 0) continue;
            inner[l] += double(mu[e]) * dc;
            weight[l] += 1.0;
        }
    }
    SeriesValue out;
    OctaveSums octaves;
    double r_tail_weight = 0;
    for (std::uint64_t l = 1; l <= L; ++l) {
        const cplx term = alpha[l] * inner[l];
        out.value += term;
        if (2 * l > L)
            octaves.last += std::abs(term);
        else if (4 * l > L)
            octaves.previous += std::abs(term);
        r_tail_weight += std::abs(alpha[l]) * weight[l];
    }
    out.terms_used = R * L;
    const double sc = c.real();
    const double r_tail =
        sc > 1 ? std::pow(static_cast<double>(R), 1 - sc) / (sc - 1) * r_tail_weight : std::numeric_limits<double>::infinity();
    out.tail_estimate = r_tail + octave_tail(octaves);
    return out;
}

SeriesValue H_truncated_naive(const ShiftSet& I, const ShiftSet& J, cplx s, std::uint64_t R, std::uint64_t L, int i1,
                              int i2) {
    const auto alpha = singular_coefficients(I, J, i1, i2, L);
    const cplx c = I[i1] + J[i2] + 2.0 * s;
    SeriesValue out;
    for (std::uint64_t r = 1; r <= R; ++r) {
        const cplx rc = std::exp(-c * std::log(static_cast<double>(r)));
        for (std::uint64_t l = 1; l <= L; ++l)
            out.value += double(ramanujan_sum(l, static_cast<i64>(r))) * alpha[l] * rc;
    }
    out.terms_used = R * L;
    return out;
}

EulerProductResult C_euler(const ShiftSet& I, const ShiftSet& J, cplx s, std::uint64_t p_max, int i1, int i2) {
    check_index(i1, I.size(), "C_euler");
    check_index(i2, J.size(), "C_euler");
    // the local factor is 1 + O(p^{-2}) whatever Re(s) >= 0 is
    const double sigma = std::min(s.real(), 0.0) - max_abs_real(I) - max_abs_real(J);
    return euler_product([&](std::uint64_t p) { return C_local(I, J, i1, i2, s, p); }, p_max, sigma);
}

cplx H_factored(const ShiftSet& I, const ShiftSet& J, cplx s, std::uint64_t p_max, int i1, int i2) {
    if (I.size() != 3 || J.size() != 3) throw DomainError("H_factored: needs |I| = |J| = 3");
    if (s.real() <= -0.4) throw DomainError("H_factored: needs Re(s) > -0.4");
    check_index(i1, 3, "H_factored");
    check_index(i2, 3, "H_factored");
    cplx v = checked_zeta(I[i1] + J[i2] + 2.0 * s, "H_factored");
    for (int k1 = 0; k1 < 3; ++k1)
        for (int k2 = 0; k2 < 3; ++k2)
            if (k1 != i1 && k2 != i2) v *= checked_zeta(1.0 + I[k1] + J[k2] + 2.0 * s, "H_factored");
    return v * C_euler(I, J, s, p_max, i1, i2).value;
}

}  // namespace zm
