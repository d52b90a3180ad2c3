#include "zetamoments/local_factors.hpp"

#include <cmath>
#include <sstream>

#include "zetamoments/errors.hpp"
#include "zetamoments/kernels.hpp"
#include "zetamoments/primes.hpp"
#include "zetamoments/special.hpp"

namespace zm {

namespace {

void check_denominator(cplx den, const char* where) {
    if (std::abs(den) < delta_den) {
        std::ostringstream os;
        os << where << ": partial-fraction denominator |" << den << "| below " << delta_den;
        throw DegenerateShiftError(os.str());
    }
}

// Common part of the g and G closed forms: prod_l (1 - p^{-s-x_l}) and, for
// each i, the weight 1/((1 - p^{-x_i-s}) prod_{l != i} (1 - p^{x_i - x_l})).
// Kept in long double: the partial fractions cancel to about gap^2.
using cplxl = std::complex<long double>;

// 1 - e^{z} without cancellation for small z.
cplxl one_minus_exp(cplxl z) {
    const long double x = z.real(), y = z.imag();
    const long double sh = std::sin(y / 2);
    return -cplxl(std::expm1(x) * std::cos(y) - 2 * sh * sh, std::exp(x) * std::sin(y));
}

struct PartialFractions {
    cplxl front = 1;
    std::vector<cplxl> weight;
    std::vector<cplxl> px;  // p^{-x_i}
};

PartialFractions partial_fractions(const ShiftSet& X, cplx s, u64 p, const char* where) {
    X.require_distinct(delta_dist, where);
    const long double lp = std::log(static_cast<long double>(p));
    const std::size_t k = X.size();
    const cplxl sl(s.real(), s.imag());
    auto xl = [&](std::size_t i) { return cplxl(X[i].real(), X[i].imag()); };
    PartialFractions pf;
    pf.weight.resize(k);
    pf.px.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        if ((s + X[i]).real() <= 0) throw DomainError(std::string(where) + ": needs Re(s + x_i) > 0");
        pf.px[i] = std::exp(-xl(i) * lp);
        pf.front *= one_minus_exp(-(sl + xl(i)) * lp);
    }
    for (std::size_t i = 0; i < k; ++i) {
        cplxl den = one_minus_exp(-(sl + xl(i)) * lp);
        for (std::size_t l = 0; l < k; ++l) {
            if (l == i) continue;
            const cplxl d = one_minus_exp((xl(i) - xl(l)) * lp);
            check_denominator(cplx(static_cast<double>(d.real()), static_cast<double>(d.imag())), where);
            den *= d;
        }
        pf.weight[i] = 1.0L / den;
    }
    return pf;
}

cplx to_double(cplxl z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

std::array<int, 2> others(int i) {
    switch (i) {
        case 0: return {1, 2};
        case 1: return {0, 2};
        default: return {0, 1};
    }
}

void check_index(int i, const char* where) {
    if (i < 0 || i > 2) throw DomainError(std::string(where) + ": index must be 0, 1 or 2");
}

}  // namespace

LocalPoint LocalPoint::make(u64 p, cplx s, const ShiftSet& I, const ShiftSet& J) {
    if (I.size() != 3 || J.size() != 3) throw DomainError("LocalPoint: shift sets must have three elements");
    LocalPoint pt;
    pt.p = p;
    pt.log_p = std::log(static_cast<double>(p));
    pt.s = s;
    pt.I = I;
    pt.J = J;
    for (int i = 0; i < 3; ++i) {
        pt.x[i] = pow_neg(pt.log_p, I[i]);
        pt.y[i] = pow_neg(pt.log_p, J[i]);
    }
    pt.u = 1.0 / static_cast<double>(p);
    pt.v = pow_neg(pt.log_p, 2.0 * s);
    return pt;
}

cplx poly_P(const std::array<cplx, 3>& X, const std::array<cplx, 3>& Y, cplx U) {
    const cplx S = X[0] * X[1] * X[2] * Y[0] * Y[1] * Y[2];
    const cplx sx_inv = 1.0 / X[0] + 1.0 / X[1] + 1.0 / X[2];
    const cplx sy_inv = 1.0 / Y[0] + 1.0 / Y[1] + 1.0 / Y[2];
    const cplx sx = X[0] + X[1] + X[2];
    const cplx sy = Y[0] + Y[1] + Y[2];
    const cplx U2 = U * U, U3 = U2 * U;
    return 1.0 - S * sx_inv * sy_inv * U2 + S * (sx_inv * sx + sy_inv * sy - 2.0) * U3 - S * sx * sy * U2 * U2 +
           S * S * U3 * U3;
}

cplx poly_Q(cplx X2, cplx X3, cplx Y2, cplx Y3, cplx X1, cplx Y1, cplx U, cplx V) {
    const cplx UV = U * V;
    const cplx w22 = UV * X2 * Y2, w23 = UV * X2 * Y3, w32 = UV * X3 * Y2, w33 = UV * X3 * Y3;
    // a-side and b-side partial-fraction weights
    const cplx a2 = (1.0 - U * X3 / X1) / (1.0 - X3 / X2);
    const cplx a3 = (1.0 - U * X2 / X1) / (1.0 - X2 / X3);
    const cplx b2 = (1.0 - U * Y3 / Y1) / (1.0 - Y3 / Y2);
    const cplx b3 = (1.0 - U * Y2 / Y1) / (1.0 - Y2 / Y3);
    const cplx bracket = w22 / (1.0 - w22) * a2 * b2 + w23 / (1.0 - w23) * a2 * b3 + w32 / (1.0 - w32) * a3 * b2 +
                         w33 / (1.0 - w33) * a3 * b3;
    const cplx edge = 1.0 - U / (V * X1 * Y1);
    return (1.0 + bracket * edge) * (1.0 - w22) * (1.0 - w23) * (1.0 - w32) * (1.0 - w33);
}

cplx g_local(const ShiftSet& X, cplx s, u64 p, int alpha) {
    if (alpha < 0) throw DomainError("g_local: alpha must be >= 0");
    if (alpha == 0) return 1;
    const auto pf = partial_fractions(X, s, p, "g_local");
    cplxl sum = 0;
    for (std::size_t i = 0; i < X.size(); ++i) sum += std::pow(pf.px[i], alpha) * pf.weight[i];
    return to_double(pf.front * sum);
}

cplx G_local(const ShiftSet& X, cplx s, u64 p, int j) {
    if (j < 1) throw DomainError("G_local: j must be >= 1");
    const auto pf = partial_fractions(X, s, p, "G_local");
    const long double pd = static_cast<long double>(p);
    const cplxl ps = std::exp(cplxl(s.real(), s.imag()) * std::log(pd));
    cplxl sum = 0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        const cplxl pj1 = std::pow(pf.px[i], j - 1);
        sum += (pd * pj1 * pf.px[i] - ps * pj1) * pf.weight[i];
    }
    return to_double(pf.front * sum / (pd - 1.0L));
}

cplx g_local_series(const ShiftSet& X, cplx s, u64 p, int alpha, int terms) {
    if (alpha < 0) throw DomainError("g_local_series: alpha must be >= 0");
    const double lp = std::log(static_cast<double>(p));
    const cplx ps = std::exp(-s * lp);
    cplx num = 0, den = 0, w = 1;
    for (int j = 0; j < terms; ++j, w *= ps) {
        num += sigma_prime_power(X.values(), lp, j + alpha) * w;
        den += sigma_prime_power(X.values(), lp, j) * w;
    }
    return num / den;
}

cplx G_local_series(const ShiftSet& X, cplx s, u64 p, int j, int terms) {
    if (j < 1) throw DomainError("G_local_series: j must be >= 1");
    // d = 1 contributes g(p^j); d = p contributes -(p^s/(p-1)) (g(p^{j-1}) - p^{-s} g(p^j)).
    const double pd = static_cast<double>(p);
    const cplx ps = std::exp(s * std::log(pd));
    const cplx gj = g_local_series(X, s, p, j, terms), gj1 = g_local_series(X, s, p, j - 1, terms);
    return gj - ps / (pd - 1.0) * (gj1 - gj / ps);
}

cplx A_local_poly(const LocalPoint& pt) { return poly_P(pt.x, pt.y, pt.u * pow_neg(pt.log_p, pt.s)); }

cplx A_local_sum(const LocalPoint& pt) {
    // Works with the variables x_i, y_l and U = p^{-1-s} only.  The terms are
    // of size 1/gap^2 and cancel, so the sum runs in long double.
    auto L = [](cplx z) { return cplxl(z.real(), z.imag()); };
    const cplxl U = L(pt.u * pow_neg(pt.log_p, pt.s));
    cplxl total = 0;
    for (int m = 0; m < 3; ++m) {
        cplxl term = 1;
        for (int l = 0; l < 3; ++l) {
            if (l == m) continue;
            const cplxl den = 1.0L - L(pt.y[l]) / L(pt.y[m]);
            check_denominator(to_double(den), "A_local_sum");
            cplxl num = 1;
            for (int i = 0; i < 3; ++i) num *= 1.0L - L(pt.x[i]) * L(pt.y[l]) * U;
            term *= num / den;
        }
        total += term;
    }
    return to_double(total);
}

cplx B_local(u64 p, cplx z, const ShiftSet& I, const ShiftSet& J) {
    // The same display written with the exponents 2z + a_i + b_l and b_m - b_l.
    const long double lp = std::log(static_cast<long double>(p));
    auto L = [](cplx w) { return cplxl(w.real(), w.imag()); };
    cplxl total = 0;
    for (int m = 0; m < 3; ++m) {
        cplxl term = 1;
        for (int l = 0; l < 3; ++l) {
            if (l == m) continue;
            const cplxl den = one_minus_exp((L(J[m]) - L(J[l])) * lp);
            check_denominator(to_double(den), "B_local");
            cplxl num = 1;
            for (int i = 0; i < 3; ++i) num *= one_minus_exp(-(2.0L * L(z) + L(I[i]) + L(J[l])) * lp);
            term *= num / den;
        }
        total += term;
    }
    return to_double(total);
}

cplx C_local(const ShiftSet& I, const ShiftSet& J, int i1, int i2, cplx s, u64 p) {
    check_index(i1, "C_local");
    check_index(i2, "C_local");
    const auto pt = LocalPoint::make(p, s, I, J);
    const auto [a2, a3] = others(i1);
    const auto [b2, b3] = others(i2);
    check_denominator(1.0 - pt.x[a3] / pt.x[a2], "C_local");
    check_denominator(1.0 - pt.y[b3] / pt.y[b2], "C_local");
    return poly_Q(pt.x[a2], pt.x[a3], pt.y[b2], pt.y[b3], pt.x[i1], pt.y[i2], pt.u, pt.v);
}

EulerProductResult euler_product(const std::function<cplx(u64)>& factor, u64 p_max, double sigma) {
    const double kappa = 2.0 + 2.0 * sigma;
    if (kappa <= 1.2) throw DomainError("euler_product: sigma <= -0.4, product does not converge");
    const auto primes = primes_up_to(p_max);
    EulerProductResult r;
    r.p_max = p_max;
    // per-prime logs are kept so that the tail fit can reuse them
    std::vector<cplx> logs(primes.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(primes.size()); ++i) logs[i] = std::log(factor(primes[i]));
    cplx total = 0;
    for (std::size_t b = 0; b < logs.size(); b += kernel_block) {
        cplx acc = 0;
        for (std::size_t i = b; i < std::min(logs.size(), b + kernel_block); ++i) acc += logs[i];
        total += acc;
    }
    r.value = std::exp(total);
    double C = 0;
    for (std::size_t i = primes.size(); i-- > 0 && primes[i] * 10 > p_max;)
        C = std::max(C, std::abs(logs[i]) * std::pow(static_cast<double>(primes[i]), kappa));
    if (C > 0) {
        const double P = static_cast<double>(p_max);
        r.tail_bound = C * std::pow(P, 1.0 - kappa) / ((kappa - 1.0) * std::log(P));
    }
    return r;
}

namespace {

// Coefficients c_0..c_n of log f(x) for f = 1 + f_1 x + ... (power-series log).
std::vector<double> series_log(const std::vector<double>& f, int n) {
    std::vector<double> l(n + 1, 0.0);
    // l' = f'/f  =>  m f_m = sum_{j=1}^{m} j l_j f_{m-j}
    for (int m = 1; m <= n; ++m) {
        double acc = m * f[m];
        for (int j = 1; j < m; ++j) acc -= j * l[j] * f[m - j];
        l[m] = acc / m;
    }
    return l;
}

double binom(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double a_k_local(int k, double p) {
    const double x = 1.0 / p;
    double sum = 0, xm = 1;
    for (int m = 0;; ++m) {
        const double b = binom(m + k - 1, k - 1);
        const double term = b * b * xm;
        sum += term;
        if (term < 1e-18 * sum) break;
        xm *= x;
    }
    return std::pow(1.0 - x, k * k) * sum;
}

}  // namespace

EulerProductResult a_k_constant(int k, u64 p_max) {
    if (k < 1 || k > 4) throw DomainError("a_k_constant: k must be in 1..4");
    EulerProductResult r;
    r.p_max = p_max;
    if (k == 1) {
        r.value = 1;
        return r;
    }
    const auto primes = primes_up_to(p_max);
    const cplx head = prime_log_sum(primes, [k](u64 p) { return cplx(a_k_local(k, static_cast<double>(p))); });

    // Tail over p > p_max: expand log f(1/p) = sum_m c_m p^{-m} and sum each
    // power over the omitted primes with the prime zeta function.
    constexpr int order = 8;
    std::vector<double> f(order + 1, 0.0);
    {
        // (1-x)^{k^2} times sum binom(m+k-1,k-1)^2 x^m, truncated at x^order
        std::vector<double> a(order + 1), b(order + 1, 0.0);
        for (int m = 0; m <= order; ++m) a[m] = std::pow(binom(m + k - 1, k - 1), 2);
        for (int m = 0; m <= order; ++m) b[m] = binom(k * k, m) * ((m % 2) ? -1.0 : 1.0);
        for (int i = 0; i <= order; ++i)
            for (int j = 0; i + j <= order; ++j) f[i + j] += a[i] * b[j];
    }
    const auto c = series_log(f, order);
    double tail = 0;
    for (int m = 2; m <= order; ++m) tail += c[m] * prime_power_tail(m, p_max);
    r.value = std::exp(head + tail);
    // first neglected order, plus rounding in the prime-zeta difference
    const double P = static_cast<double>(p_max);
    r.tail_bound = std::abs(c[order]) * std::pow(P, -order) + 1e-15 * std::abs(tail) + 1e-16 * primes.size();
    return r;
}

boost::multiprecision::cpp_rational g_k_constant(int k) {
    if (k < 1 || k > 4) throw DomainError("g_k_constant: k must be in 1..4");
    using boost::multiprecision::cpp_int;
    auto fact = [](int n) {
        cpp_int f = 1;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    boost::multiprecision::cpp_rational g = fact(k * k);
    for (int j = 0; j < k; ++j) g *= boost::multiprecision::cpp_rational(fact(j), fact(k + j));
    return g;
}

int remaining_index(int i, int k) {
    if (i == k) throw DomainError("remaining_index: indices must differ");
    return 3 - i - k;
}

double identity_check(Identity which, const ShiftSet& I, const ShiftSet& J, u64 p, const IdentityIndices& idx) {
    check_index(idx.i1, "identity_check");
    check_index(idx.i2, "identity_check");
    const auto pt = LocalPoint::make(p, 0.0, I, J);
    const auto& x = pt.x;
    const auto& y = pt.y;
    const auto [a2, a3] = others(idx.i1);
    const auto [b2, b3] = others(idx.i2);
    const int i1 = idx.i1, i2 = idx.i2;
    for (auto d : {1.0 - x[a3] / x[a2], 1.0 - y[b3] / y[b2]}) check_denominator(d, "identity_check");

    switch (which) {
        case Identity::i: {
            // swapped sets: a_{i1} -> -b_{i2}, b_{i2} -> -a_{i1}, evaluated at s = 0
            std::array<cplx, 3> xs = x, ys = y;
            xs[i1] = 1.0 / y[i2];
            ys[i2] = 1.0 / x[i1];
            const cplx lhs = poly_P(xs, ys, pt.u);
            const cplx rhs = poly_Q(x[a2], x[a3], y[b2], y[b3], x[i1], y[i2], pt.u, 1.0);
            return std::abs(lhs - rhs);
        }
        case Identity::ii: {
            // s = -(a_{i1} + b_{i2}) on the A side, half of it on the C side
            const cplx w = 1.0 / (x[i1] * y[i2]);
            const cplx lhs = poly_P(x, y, pt.u * w);
            const cplx rhs = poly_Q(x[a2], x[a3], y[b2], y[b3], x[i1], y[i2], pt.u, w);
            return std::abs(lhs - rhs);
        }
        case Identity::iii: {
            const int k1 = idx.k1, k2 = idx.k2;
            check_index(k1, "identity_check");
            check_index(k2, "identity_check");
            if (k1 == i1 || k2 == i2) throw DomainError("identity_check: (iii) needs k1 != i1 and k2 != i2");
            const int r1 = remaining_index(i1, k1), r2 = remaining_index(i2, k2);
            // left: C_{I,J;a_i1,b_i2} at s = -(a_k1 + b_k2)/2, so V = p^{a_k1 + b_k2}
            const cplx lhs = poly_Q(x[a2], x[a3], y[b2], y[b3], x[i1], y[i2], pt.u, 1.0 / (x[k1] * y[k2]));
            // right: C_{-J,-I; -b_r2, -a_r1} at s = +(a_k1 + b_k2)/2.  The roles of
            // the two sets swap: the new "x" variables are p^{b_j} = 1/y_j.
            const cplx rhs = poly_Q(1.0 / y[i2], 1.0 / y[k2], 1.0 / x[i1], 1.0 / x[k1], 1.0 / y[r2], 1.0 / x[r1], pt.u,
                                    x[k1] * y[k2]);
            return std::abs(lhs - rhs);
        }
    }
    return 0;
}

}  // namespace zm
