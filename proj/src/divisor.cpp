#include "zetamoments/divisor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "zetamoments/errors.hpp"
#include "zetamoments/kernels.hpp"
#include "zetamoments/primes.hpp"
#include "zetamoments/special.hpp"

namespace zm {

double smoothstep(double u) {
    if (u <= 0) return 0;
    if (u >= 1) return 1;
    const double a = std::exp(-1 / u), b = std::exp(-1 / (1 - u));
    return a / (a + b);
}

double SmoothWindow::profile(double u) const {
    if (u <= 1 || u >= 2) return 0;
    return smoothstep((u - 1) / lambda) * smoothstep((2 - u) / lambda);
}

std::vector<double> SmoothWindow::profile_breaks() const {
    std::vector<double> b{1.0, 1.0 + lambda, 2.0 - lambda, 2.0};
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

SmoothWindow smooth_window(double X, double Y, double P) {
    if (!(X >= 1 && Y >= 1)) throw DomainError("smooth_window: needs X, Y >= 1");
    if (!(P >= 1)) throw DomainError("smooth_window: needs P >= 1");
    SmoothWindow f;
    f.X = X;
    f.Y = Y;
    f.P = P;
    f.lambda = 0.5 / P;
    return f;
}

double window_derivative_constant(const SmoothWindow& f, int max_order, int grid) {
    // f is a product, so x^i y^j f^{(i,j)} factorises into 1-D pieces u^i w^{(i)}(u).
    const double h = 2e-3;
    auto derivative = [&](double u, int order) {
        // central differences of the binomial form, step h in u
        double acc = 0;
        for (int k = 0; k <= order; ++k) {
            const double binom = std::tgamma(order + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(order - k + 1.0));
            acc += ((k % 2) ? -1.0 : 1.0) * binom * f.profile(u + (order / 2.0 - k) * h);
        }
        return acc / std::pow(h, order);
    };
    std::vector<double> peak(max_order + 1, 0.0);
    for (int g = 0; g <= grid; ++g) {
        const double u = 1.0 + double(g) / grid;
        for (int i = 0; i <= max_order; ++i) peak[i] = std::max(peak[i], std::abs(std::pow(u, i) * derivative(u, i)));
    }
    double C = 0;
    for (int i = 0; i <= max_order; ++i)
        for (int j = 0; i + j <= max_order; ++j) C = std::max(C, peak[i] * peak[j] / std::pow(f.P, i + j));
    return C;
}

std::vector<cplx> sigma_table(const ShiftSet& X, std::uint64_t limit) {
    const std::vector<cplx> xs(X.begin(), X.end());
    return multiplicative_table(limit, [&](std::uint64_t p, int e) {
        return sigma_prime_power(xs, std::log(static_cast<double>(p)), e);
    });
}

namespace {

// Range of n with f(n + r, n) possibly nonzero (f vanishes on the boundary).
struct NRange {
    i64 lo = 1, hi = 0;
    i64 top = 0;  // largest argument m or n touched
};

NRange support_range(const SmoothWindow& f, i64 r) {
    const auto first_above = [](double v) { return static_cast<i64>(std::floor(v)) + 1; };
    const auto last_below = [](double v) { return static_cast<i64>(std::ceil(v)) - 1; };
    NRange R;
    R.lo = std::max<i64>({1, first_above(f.Y), first_above(f.X) - r, 1 - r});
    R.hi = std::min(last_below(2 * f.Y), last_below(2 * f.X) - r);
    R.top = R.hi >= R.lo ? std::max(R.hi, R.hi + r) : 0;
    return R;
}

}  // namespace

cplx brute_divisor_sum(const SmoothWindow& f, std::span<const cplx> sigma_I, std::span<const cplx> sigma_J, i64 r) {
    if (r == 0) throw DomainError("brute_divisor_sum: r must be nonzero");
    const NRange R = support_range(f, r);
    if (R.hi < R.lo) return 0;
    if (static_cast<std::uint64_t>(R.top) >= std::min(sigma_I.size(), sigma_J.size()))
        throw ResourceError("brute_divisor_sum: sigma tables too short for the window");
    return range_sum(R.lo, R.hi, [&](i64 n) {
        return sigma_I[n + r] * sigma_J[n] * f(static_cast<double>(n + r), static_cast<double>(n));
    });
}

cplx brute_divisor_sum(const SmoothWindow& f, const ShiftSet& I, const ShiftSet& J, i64 r, std::uint64_t sieve_limit) {
    if (r == 0) throw DomainError("brute_divisor_sum: r must be nonzero");
    const NRange R = support_range(f, r);
    if (R.hi < R.lo) return 0;
    if (static_cast<std::uint64_t>(R.top) > sieve_limit) {
        std::ostringstream os;
        os << "brute_divisor_sum: needs sigma up to " << R.top << ", above the sieve limit " << sieve_limit;
        throw ResourceError(os.str());
    }
    const auto sI = sigma_table(I, R.top);
    const auto sJ = sigma_table(J, R.top);
    return brute_divisor_sum(f, sI, sJ, r);
}

double brute_divisor_sum_d3(const SmoothWindow& f, std::span<const std::uint64_t> d3, i64 r) {
    if (r == 0) throw DomainError("brute_divisor_sum_d3: r must be nonzero");
    const NRange R = support_range(f, r);
    if (R.hi < R.lo) return 0;
    if (static_cast<std::uint64_t>(R.top) >= d3.size())
        throw ResourceError("brute_divisor_sum_d3: d_3 table too short for the window");
    return range_sum(R.lo, R.hi, [&](i64 n) {
        return static_cast<double>(d3[n + r]) * static_cast<double>(d3[n]) *
               f(static_cast<double>(n + r), static_cast<double>(n));
    });
}

cplx naive_divisor_sum(const SmoothWindow& f, const ShiftSet& I, const ShiftSet& J, i64 r) {
    cplx total = 0;
    const auto mmax = static_cast<i64>(std::ceil(2 * f.X));
    for (i64 m = 1; m <= mmax; ++m) {
        const i64 n = m - r;
        if (n < 1) continue;
        const double w = f(static_cast<double>(m), static_cast<double>(n));
        if (w == 0) continue;
        total += sigma_shifted(I, static_cast<u64>(m)) * sigma_shifted(J, static_cast<u64>(n)) * w;
    }
    return total;
}

cplx G_I3(const ShiftSet& I, int i1, double log_p, int j) {
    if (I.size() != 3 || i1 < 0 || i1 > 2) throw DomainError("G_I3: needs three shifts and an index in 0..2");
    const cplx a1 = I[i1];
    const cplx a2 = I[(i1 + 1) % 3], a3 = I[(i1 + 2) % 3];
    const auto pw = [&](cplx x) { return std::exp(x * log_p); };
    const cplx d23 = 1.0 - pw(a2 - a3), d32 = 1.0 - pw(a3 - a2);
    if (std::abs(d23) < delta_den || std::abs(d32) < delta_den)
        throw DegenerateShiftError("G_I3: shifts " + I.to_string() + " too close");
    return pw(-a2 * double(j)) * (1.0 - pw(-1.0 + a1 - a3)) / d23 + pw(-a3 * double(j)) * (1.0 - pw(-1.0 + a1 - a2)) / d32;
}

SeriesValue singular_series(const ShiftSet& I, const ShiftSet& J, int i1, int i2, i64 r, std::uint64_t q_max) {
    if (r == 0) throw DomainError("singular_series: r must be nonzero");
    if (q_max > std::numeric_limits<std::uint32_t>::max()) throw ResourceError("singular_series: q_max too large");
    const auto h = singular_coefficients(I, J, i1, i2, q_max);
    const auto mu = mobius_table(static_cast<std::uint32_t>(q_max));
    const u64 ar = static_cast<u64>(r < 0 ? -r : r);
    // c_q(r) = sum_{d | (q, r)} d mu(q/d)
    std::vector<double> c(q_max + 1, 0.0);
    for (u64 d : divisors(ar))
        for (u64 e = 1; d * e <= q_max; ++e) c[d * e] += double(d) * mu[e];
    const auto dq = sieve_dk(2, q_max);

    SeriesValue out;
    double last = 0, previous = 0;
    for (u64 q = 1; q <= q_max; ++q) {
        out.value += c[q] * h[q];
        const double bound = double(std::gcd(q, ar)) * double(dq[q]) * std::abs(h[q]);
        if (2 * q > q_max)
            last += bound;
        else if (4 * q > q_max)
            previous += bound;
    }
    out.terms_used = q_max;
    if (last > 0) {
        const double rho = previous > 0 ? last / previous : 1.0;
        out.tail_estimate = rho < 1 ? last * rho / (1 - rho) : std::numeric_limits<double>::infinity();
    }
    return out;
}

namespace {

double max_abs_real(const ShiftSet& X) {
    double m = 0;
    for (const auto& x : X) m = std::max(m, std::abs(x.real()));
    return m;
}

// 1 + sum_j c_{p^j}(r) h(p^j) with v = v_p(r): c = phi(p^j) for j <= v, -p^v at j = v + 1.
cplx singular_local(const ShiftSet& I, const ShiftSet& J, int i1, int i2, u64 p, int v) {
    const double lp = std::log(static_cast<double>(p));
    const cplx ex = 2.0 - I[i1] - J[i2];
    cplx acc = 1;
    double pj = 1;
    for (int j = 1; j <= v + 1; ++j) {
        const double c = j <= v ? pj * (double(p) - 1) : -pj;
        acc += c * G_I3(I, i1, lp, j) * G_I3(J, i2, lp, j) * std::exp(-ex * double(j) * lp);
        pj *= double(p);
    }
    return acc;
}

int valuation(u64 n, u64 p) {
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

}  // namespace

EulerProductResult singular_series_euler(const ShiftSet& I, const ShiftSet& J, int i1, int i2, i64 r,
                                         std::uint64_t p_max) {
    if (r == 0) throw DomainError("singular_series_euler: r must be nonzero");
    I.require_distinct(delta_dist, "singular_series_euler");
    J.require_distinct(delta_dist, "singular_series_euler");
    const u64 ar = static_cast<u64>(r < 0 ? -r : r);
    const double sigma = -max_abs_real(I) - max_abs_real(J);
    return euler_product(
        [&](u64 p) { return singular_local(I, J, i1, i2, p, ar % p == 0 ? valuation(ar, p) : 0); }, p_max, sigma);
}

cplx archimedean_integral(const SmoothWindow& f, cplx a, cplx b, i64 r, double rel_tol) {
    const double rr = static_cast<double>(r);
    const double lo = std::max({f.X, f.Y + rr, std::max(0.0, rr)});
    const double hi = std::min(2 * f.X, 2 * f.Y + rr);
    if (!(hi > lo)) return 0;
    std::vector<double> cuts{lo, hi};
    for (double u : f.profile_breaks()) {
        cuts.push_back(u * f.X);
        cuts.push_back(u * f.Y + rr);
    }
    std::sort(cuts.begin(), cuts.end());
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    cplx total = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double x0 = std::max(cuts[k], lo), x1 = std::min(cuts[k + 1], hi);
        if (!(x1 > x0)) continue;
        auto integrand = [&](double x) {
            return f(x, x - rr) * std::exp(-a * std::log(x) - b * std::log(x - rr));
        };
        const double re = GK::integrate([&](double x) { return integrand(x).real(); }, x0, x1, 15, rel_tol);
        const double im = GK::integrate([&](double x) { return integrand(x).imag(); }, x0, x1, 15, rel_tol);
        total += cplx(re, im);
    }
    return total;
}

std::vector<cplx> divisor_main_terms(const SmoothWindow& f, const ShiftSet& I, const ShiftSet& J,
                                     std::span<const i64> rs, const DivisorMainTermOptions& opt) {
    if (I.size() != 3 || J.size() != 3) throw DomainError("divisor_main_term: needs |I| = |J| = 3");
    I.require_distinct(delta_dist, "divisor_main_term");
    J.require_distinct(delta_dist, "divisor_main_term");
    for (i64 r : rs)
        if (r == 0) throw DomainError("divisor_main_term: r must be nonzero");

    // Singular series for every (i1, i2) and r.
    std::vector<std::array<cplx, 9>> ss(rs.size());
    if (opt.route == SingularRoute::qsum) {
        for (std::size_t k = 0; k < rs.size(); ++k)
            for (int c = 0; c < 9; ++c) ss[k][c] = singular_series(I, J, c / 3, c % 3, rs[k], opt.q_max).value;
    } else {
        // log(1 - h_p) for all nine pairs in one pass over the primes; the primes
        // dividing r are corrected afterwards.
        const auto primes = primes_up_to(opt.p_max);
        const std::uint64_t blocks = (primes.size() + kernel_block - 1) / kernel_block;
        std::vector<std::array<cplx, 9>> partial(blocks);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
            std::array<cplx, 9> acc{};
            const std::size_t e = std::min<std::size_t>(primes.size(), (b + 1) * kernel_block);
            for (std::size_t i = b * kernel_block; i < e; ++i) {
                const double lp = std::log(static_cast<double>(primes[i]));
                const double u = 1.0 / static_cast<double>(primes[i]);
                std::array<cplx, 3> x, y, gi, gj;
                for (int k = 0; k < 3; ++k) {
                    x[k] = std::exp(-I[k] * lp);
                    y[k] = std::exp(-J[k] * lp);
                }
                // G(1 - a_1, p) = p^{-a_2} + p^{-a_3} - p^{-1 + a_1 - a_2 - a_3}
                for (int k = 0; k < 3; ++k) {
                    const int k2 = (k + 1) % 3, k3 = (k + 2) % 3;
                    gi[k] = x[k2] + x[k3] - u * x[k2] * x[k3] / x[k];
                    gj[k] = y[k2] + y[k3] - u * y[k2] * y[k3] / y[k];
                }
                for (int c = 0; c < 9; ++c) {
                    const int i1 = c / 3, i2 = c % 3;
                    acc[c] += std::log(1.0 - gi[i1] * gj[i2] * (u * u) / (x[i1] * y[i2]));
                }
            }
            partial[b] = acc;
        }
        std::array<cplx, 9> base{};
        for (const auto& p : partial)
            for (int c = 0; c < 9; ++c) base[c] += p[c];
        for (std::size_t k = 0; k < rs.size(); ++k) {
            const u64 ar = static_cast<u64>(rs[k] < 0 ? -rs[k] : rs[k]);
            for (int c = 0; c < 9; ++c) {
                cplx s = base[c];
                for (auto [p, v] : factorize(ar).factors) {
                    if (p > opt.p_max) continue;
                    const int i1 = c / 3, i2 = c % 3;
                    s += std::log(singular_local(I, J, i1, i2, p, v)) - std::log(singular_local(I, J, i1, i2, p, 0));
                }
                ss[k][c] = std::exp(s);
            }
        }
    }

    std::vector<cplx> out(rs.size(), 0.0);
    for (int i1 = 0; i1 < 3; ++i1)
        for (int i2 = 0; i2 < 3; ++i2) {
            cplx z = 1;
            for (int j = 0; j < 3; ++j) {
                if (j != i1) z *= zeta(1.0 - I[i1] + I[j]);
                if (j != i2) z *= zeta(1.0 - J[i2] + J[j]);
            }
            for (std::size_t k = 0; k < rs.size(); ++k)
                out[k] += z * ss[k][3 * i1 + i2] * archimedean_integral(f, I[i1], J[i2], rs[k]);
        }
    return out;
}

cplx divisor_main_term(const SmoothWindow& f, const ShiftSet& I, const ShiftSet& J, i64 r,
                       const DivisorMainTermOptions& opt) {
    return divisor_main_terms(f, I, J, std::span<const i64>(&r, 1), opt)[0];
}

namespace {

std::vector<cplx> circle_mean(const SmoothWindow& f, std::span<const i64> rs, const ZeroShiftOptions& opt,
                              double radius) {
    std::vector<cplx> acc(rs.size(), 0.0);
    for (int m = 0; m < opt.nodes; ++m) {
        const cplx eps = std::polar(radius, 2 * std::numbers::pi * (m + 0.5) / opt.nodes);
        const ShiftSet I{eps * opt.pattern.a[0], eps * opt.pattern.a[1], eps * opt.pattern.a[2]};
        const ShiftSet J{eps * opt.pattern.b[0], eps * opt.pattern.b[1], eps * opt.pattern.b[2]};
        const auto v = divisor_main_terms(f, I, J, rs, opt.main);
        for (std::size_t k = 0; k < rs.size(); ++k) acc[k] += v[k];
    }
    for (auto& v : acc) v /= double(opt.nodes);
    return acc;
}

}  // namespace

std::vector<ZeroShiftValue> zero_shift_limit_main_terms(const SmoothWindow& f, std::span<const i64> rs,
                                                        const ZeroShiftOptions& opt) {
    if (!(opt.delta >= 1e-4 && opt.delta <= 1e-2)) throw DomainError("zero_shift_limit_main_term: delta must lie in [1e-4, 1e-2]");
    if (opt.nodes < 4) throw DomainError("zero_shift_limit_main_term: needs at least 4 circle nodes");
    const auto full = circle_mean(f, rs, opt, opt.delta);
    const auto half = circle_mean(f, rs, opt, opt.delta / 2);
    std::vector<ZeroShiftValue> out(rs.size());
    for (std::size_t k = 0; k < rs.size(); ++k) {
        out[k].value = full[k].real();
        out[k].imag = full[k].imag();
        out[k].value_half = half[k].real();
        out[k].relative_gap = std::abs(full[k].real() - half[k].real()) / std::abs(half[k].real());
        out[k].flagged = !(out[k].relative_gap <= 0.01);
    }
    return out;
}

ZeroShiftValue zero_shift_limit_main_term(const SmoothWindow& f, i64 r, const ZeroShiftOptions& opt) {
    return zero_shift_limit_main_terms(f, std::span<const i64>(&r, 1), opt)[0];
}

std::vector<DivisorReport> divisor_report(double X, std::span<const i64> rs, const ZeroShiftOptions& opt,
                                          std::uint64_t sieve_limit) {
    const SmoothWindow f = smooth_window(X, X, 1);
    i64 top = 0;
    for (i64 r : rs) top = std::max(top, support_range(f, r).top);
    if (static_cast<std::uint64_t>(top) > sieve_limit) {
        std::ostringstream os;
        os << "divisor_report: needs d_3 up to " << top << ", above the sieve limit " << sieve_limit;
        throw ResourceError(os.str());
    }
    const auto d3 = sieve_dk(3, static_cast<u64>(top));
    const auto main = zero_shift_limit_main_terms(f, rs, opt);
    std::vector<DivisorReport> out(rs.size());
    for (std::size_t k = 0; k < rs.size(); ++k) {
        auto& rep = out[k];
        rep.r = rs[k];
        rep.X = X;
        rep.brute = brute_divisor_sum_d3(f, d3, rs[k]);
        rep.main_term = main[k].value;
        rep.ratio = rep.main_term / rep.brute;
        rep.p_max = opt.main.p_max;
        rep.delta = opt.delta;
        rep.delta_gap = main[k].relative_gap;
        rep.flagged = main[k].flagged;
    }
    return out;
}

}  // namespace zm
