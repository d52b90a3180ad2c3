#include "zetamoments/afe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "zetamoments/errors.hpp"
#include "zetamoments/kernels.hpp"

namespace zm {

namespace {

constexpr double pi = std::numbers::pi;

cplxl to_l(cplx z) { return {z.real(), z.imag()}; }
cplx to_d(cplxl z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

void check_t(double t, const char* where) {
    if (t < 10) throw DomainError(std::string(where) + ": needs t >= 10");
}

// log of prod Gamma((1/2 + a + s + it)/2) Gamma((1/2 + b + s - it)/2) over the
// two sets, in extended precision.
cplxl log_gamma_block(const ShiftSet& I, const ShiftSet& J, cplxl s, long double t) {
    const cplxl it(0, t);
    cplxl acc = 0;
    for (const auto& a : I) acc += log_gamma((0.5L + to_l(a) + s + it) / 2.0L);
    for (const auto& b : J) acc += log_gamma((0.5L + to_l(b) + s - it) / 2.0L);
    return acc;
}

struct Nodes {
    std::vector<cplx> s;
    std::vector<cplx> w;  // G(s)/s g(s,t) h/(2 pi)
};

Nodes make_nodes(const ShiftSet& I, const ShiftSet& J, double t, const ContourWeight& weight, double c, double h,
                 double U) {
    Nodes n;
    const auto K = static_cast<long>(std::ceil(U / h));
    const cplxl base = log_gamma_block(I, J, 0.0L, t);
    for (long k = -K; k <= K; ++k) {
        const cplx s(c, k * h);
        const cplx g = to_d(std::exp(log_gamma_block(I, J, to_l(s), t) - base));
        n.s.push_back(s);
        n.w.push_back(weight(s) / s * g * (h / (2 * pi)));
    }
    return n;
}

cplx integrand_modulus_probe(const ShiftSet& I, const ShiftSet& J, double t, const ContourWeight& weight, cplx s,
                             const cplxl& base) {
    const cplx g = to_d(std::exp(log_gamma_block(I, J, to_l(s), t) - base));
    return weight(s) / s * g;
}

cplx eval_nodes(const Nodes& n, double x) {
    const double lx = std::log(x);
    cplx acc = 0;
    for (std::size_t k = 0; k < n.s.size(); ++k) acc += n.w[k] * std::exp(-n.s[k] * lx);
    return acc;
}

// Quintic Hermite table of V(e^y) and its first two y-derivatives.
struct VTable {
    double y0 = 0, dy = 0;
    std::vector<cplx> v, dv, d2v;

    cplx operator()(double y) const {
        const double pos = (y - y0) / dy;
        auto j = static_cast<std::size_t>(pos);
        if (j + 1 >= v.size()) j = v.size() - 2;
        const double u = pos - static_cast<double>(j);
        const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
        const double h0 = 1 - 10 * u3 + 15 * u4 - 6 * u5, h1 = u - 6 * u3 + 8 * u4 - 3 * u5;
        const double h2 = 0.5 * (u2 - 3 * u3 + 3 * u4 - u5), h3 = 0.5 * (u3 - 2 * u4 + u5);
        const double h4 = -4 * u3 + 7 * u4 - 3 * u5, h5 = 10 * u3 - 15 * u4 + 6 * u5;
        const double d2 = dy * dy;
        return h0 * v[j] + h1 * dy * dv[j] + h2 * d2 * d2v[j] + h3 * d2 * d2v[j + 1] + h4 * dy * dv[j + 1] +
               h5 * v[j + 1];
    }
};

VTable build_table(const Nodes& lo, const Nodes& hi, double y_switch, double y0, double y1, double dy) {
    VTable tab;
    tab.y0 = y0;
    tab.dy = dy;
    const auto n = static_cast<std::size_t>(std::ceil((y1 - y0) / dy)) + 2;
    tab.v.assign(n, 0.0);
    tab.dv.assign(n, 0.0);
    tab.d2v.assign(n, 0.0);
    constexpr std::size_t chunk = 32;
    const std::size_t chunks = (n + chunk - 1) / chunk;
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(chunks); ++ci) {
        const std::size_t j0 = ci * chunk, j1 = std::min(n, j0 + chunk);
        // each chunk restarts the recurrence from a direct exponential
        for (const Nodes* nodes : {&lo, &hi}) {
            for (std::size_t k = 0; k < nodes->s.size(); ++k) {
                const cplx s = nodes->s[k];
                const cplx step = std::exp(-s * dy);
                cplx e = std::exp(-s * (y0 + j0 * dy));
                for (std::size_t j = j0; j < j1; ++j) {
                    const double y = y0 + j * dy;
                    const bool use = (nodes == &hi) ? (y >= y_switch) : (y < y_switch);
                    if (use) {
                        const cplx term = nodes->w[k] * e;
                        tab.v[j] += term;
                        tab.dv[j] -= s * term;
                        tab.d2v[j] += s * s * term;
                    }
                    e *= step;
                }
            }
        }
    }
    return tab;
}

// Coefficients x_i = base_i + i sign_i t of a twisted shifted divisor function.
struct TwistedSet {
    std::vector<cplx> base;
    std::vector<int> sign;
    double t;

    cplx operator()(u64 p, int e) const {
        const double lp = std::log(static_cast<double>(p));
        const cplx ph = unit_phase(t, p);  // p^{-it}
        cplx z[8];
        for (std::size_t i = 0; i < base.size(); ++i) z[i] = pow_neg(lp, base[i]) * (sign[i] > 0 ? ph : std::conj(ph));
        if (e == 1) {
            cplx s = 0;
            for (std::size_t i = 0; i < base.size(); ++i) s += z[i];
            return s;
        }
        return complete_homogeneous(std::span<const cplx>(z, base.size()), e)[e];
    }
};

struct SideSum {
    cplx value;
    std::uint64_t cutoff;
    double v_end;
};

SideSum afe_side(const ShiftSet& I, const ShiftSet& J, double t, const ContourWeight& weight, const AFEOptions& opt,
                 double U) {
    const double c_lo = 0.25, c_hi = 3.0;
    const Nodes lo = make_nodes(I, J, t, weight, c_lo, opt.h, U);
    const Nodes hi = make_nodes(I, J, t, weight, c_hi, opt.h, U);
    const double y_switch = 3 * std::log(t / 2);
    const double y0 = 3 * std::log(pi) - 1e-3;
    double y1 = y_switch + 6.0;
    VTable tab;
    std::size_t last = 0;
    for (int attempt = 0; attempt < 6; ++attempt) {
        tab = build_table(lo, hi, y_switch, y0, y1, opt.table_step);
        last = 0;
        for (std::size_t j = tab.v.size(); j-- > 0;)
            if (std::abs(tab.v[j]) > opt.cutoff_tol) {
                last = j;
                break;
            }
        if (last + 8 < tab.v.size()) break;
        y1 += 6.0;
    }
    SideSum out;
    const double y_last = y0 + (last + 1) * opt.table_step;
    std::uint64_t N = static_cast<std::uint64_t>(std::exp(y_last) / (pi * pi * pi)) + 1;
    if (opt.cutoff) {
        N = opt.cutoff;
        const double yN = std::log(pi * pi * pi * static_cast<double>(N));
        const double vN = yN < y0 + (tab.v.size() - 2) * opt.table_step ? std::abs(tab(yN)) : 0.0;
        if (vN > 1e-8) {
            std::ostringstream os;
            os << "afe_evaluate: cutoff " << N << " too small, |V| = " << vN << " at the boundary";
            throw RefinementError(os.str());
        }
    }
    out.cutoff = N;
    {
        const double yN = std::log(pi * pi * pi * static_cast<double>(N));
        out.v_end = yN < y0 + (tab.v.size() - 2) * opt.table_step ? std::abs(tab(yN)) : 0.0;
    }

    TwistedSet X;
    X.t = t;
    for (const auto& a : I) {
        X.base.push_back(a);
        X.sign.push_back(+1);
    }
    for (const auto& b : J) {
        X.base.push_back(b);
        X.sign.push_back(-1);
    }
    const double log_pi3 = 3 * std::log(pi);
    out.value = weighted_multiplicative_sum(N, X, [&](u64 k) {
        const double lk = std::log(static_cast<double>(k));
        return tab(log_pi3 + lk) * std::exp(-0.5 * lk);
    });
    return out;
}

}  // namespace

cplx g_factor(const ShiftSet& I, const ShiftSet& J, cplx s, double t) {
    check_t(t, "g_factor");
    if (s == cplx(0)) return 1;
    return to_d(std::exp(log_gamma_block(I, J, to_l(s), t) - log_gamma_block(I, J, 0.0L, t)));
}

cplx X_factor(const ShiftSet& I, const ShiftSet& J, double t) {
    check_t(t, "X_factor");
    const cplxl it(0, t);
    cplxl acc = 0;
    for (const auto& a : I) acc += log_gamma((0.5L - to_l(a) - it) / 2.0L) - log_gamma((0.5L + to_l(a) + it) / 2.0L);
    for (const auto& b : J) acc += log_gamma((0.5L - to_l(b) + it) / 2.0L) - log_gamma((0.5L + to_l(b) - it) / 2.0L);
    acc += to_l(I.sum() + J.sum()) * std::log(std::numbers::pi_v<long double>);
    return to_d(std::exp(acc));
}

cplx QPolySpec::operator()(cplx s) const {
    const cplx s2 = s * s;
    cplx v = 1;
    for (const auto& r : roots) v *= 1.0 - s2 / (r * r);
    return v;
}

QPolySpec build_Q_poly(const ShiftSet& I, const ShiftSet& J) {
    QPolySpec q;
    q.I = I;
    q.J = J;
    for (const auto& a : I)
        for (const auto& b : J)
            for (int ea : {1, -1})
                for (int eb : {1, -1}) {
                    const cplx r = 0.5 - (double(ea) * a + double(eb) * b) / 2.0;
                    if (std::abs(r) < 1e-8) throw DegenerateShiftError("build_Q_poly: root at the origin");
                    q.roots.push_back(r);
                }
    // expand prod (1 - w / r^2) in w = s^2
    q.coefficients.assign(1, 1.0);
    for (const auto& r : q.roots) {
        const cplx f = -1.0 / (r * r);
        q.coefficients.push_back(0.0);
        for (std::size_t k = q.coefficients.size() - 1; k >= 1; --k) q.coefficients[k] += f * q.coefficients[k - 1];
    }
    return q;
}

cplx G_weight(const QPolySpec& q, cplx s) { return q(s) * std::exp(s * s); }

cplx ContourWeight::operator()(cplx s) const {
    cplx v = scale * std::exp(gauss * s * s);
    if (q) v *= (*q)(s);
    return v;
}

ContourWeight ContourWeight::q_times_gaussian(const QPolySpec& q) {
    ContourWeight w;
    w.q = q;
    w.gauss = 1.0;
    return w;
}

ContourWeight ContourWeight::gaussian(double b) {
    if (!(b > 0)) throw DomainError("ContourWeight::gaussian: needs b > 0");
    ContourWeight w;
    w.gauss = b;
    return w;
}

double v_truncation(const ContourWeight& w, const ShiftSet& I, const ShiftSet& J, double t, const VQuadrature& quad) {
    if (quad.U > 0) return quad.U;
    const cplxl base = log_gamma_block(I, J, 0.0L, t);
    double peak = 0;
    int quiet = 0;
    for (double u = 0; u <= 400; u += 0.5) {
        const double m = std::max(std::abs(integrand_modulus_probe(I, J, t, w, cplx(quad.c, u), base)),
                                  std::abs(integrand_modulus_probe(I, J, t, w, cplx(quad.c, -u), base)));
        peak = std::max(peak, m);
        quiet = (m < quad.tail_tol * peak) ? quiet + 1 : 0;
        if (quiet >= 4) return u;
    }
    throw RefinementError("v_truncation: weight does not decay below tolerance by |Im s| = 400");
}

cplx V_weight(const ShiftSet& I, const ShiftSet& J, double t, double x, const VQuadrature& quad,
              const ContourWeight& w) {
    check_t(t, "V_weight");
    if (!(x > 0)) throw DomainError("V_weight: needs x > 0");
    const double U = v_truncation(w, I, J, t, quad);
    return eval_nodes(make_nodes(I, J, t, w, quad.c, quad.h, U), x);
}

cplx V_weight(const ShiftSet& I, const ShiftSet& J, double t, double x, const VQuadrature& quad) {
    return V_weight(I, J, t, x, quad, ContourWeight::q_times_gaussian(build_Q_poly(I, J)));
}

VCheck V_weight_checked(const ShiftSet& I, const ShiftSet& J, double t, double x, const VQuadrature& quad,
                        const ContourWeight& w, double tol) {
    VQuadrature q1 = quad;
    q1.U = v_truncation(w, I, J, t, quad);
    VQuadrature q2 = q1;
    q2.h /= 2;
    q2.U *= 2;
    VCheck r;
    r.value = V_weight(I, J, t, x, q1, w);
    r.refined = V_weight(I, J, t, x, q2, w);
    r.relative_gap = std::abs(r.value - r.refined) / std::max(std::abs(r.refined), 1e-300);
    if (r.relative_gap > tol) {
        std::ostringstream os;
        os << "V_weight: refinement gap " << r.relative_gap << " exceeds " << tol << " at t=" << t << ", x=" << x;
        throw RefinementError(os.str());
    }
    return r;
}

AFEResult afe_evaluate(const ShiftSet& I, const ShiftSet& J, double t, const AFEOptions& opt) {
    if (t < 50 || t > 5000) throw DomainError("afe_evaluate: t must lie in [50, 5000]");
    const ContourWeight weight = opt.weight ? *opt.weight : ContourWeight::gaussian(1.0 / 20);
    double U = 0;
    for (double c : {0.25, 3.0}) {
        VQuadrature probe;
        probe.c = c;
        probe.h = opt.h;
        probe.tail_tol = 1e-18;
        U = std::max({U, v_truncation(weight, I, J, t, probe), v_truncation(weight, J.negated(), I.negated(), t, probe)});
    }

    AFEResult r;
    r.h = opt.h;
    r.U = U;
    const cplxl it(0, t);
    cplxl lhs = 1;
    for (const auto& a : I) lhs *= zeta(0.5L + to_l(a) + it);
    for (const auto& b : J) lhs *= zeta(0.5L + to_l(b) - it);
    r.lhs = to_d(lhs);

    const auto main = afe_side(I, J, t, weight, opt, U);
    const auto mirror = afe_side(J.negated(), I.negated(), t, weight, opt, U);
    r.main_sum = main.value;
    r.mirror_sum = mirror.value;
    r.cutoff_main = main.cutoff;
    r.cutoff_mirror = mirror.cutoff;
    r.v_at_cutoff = std::max(main.v_end, mirror.v_end);
    r.x_factor = X_factor(I, J, t);
    r.rhs = r.main_sum + r.x_factor * r.mirror_sum;
    r.residual = std::abs(r.lhs - r.rhs);
    r.relative_residual = r.residual / std::abs(r.lhs);
    return r;
}

double gamma_ratio_constant(const ShiftSet& I, const ShiftSet& J, double t, int grid) {
    double worst = 0;
    for (int a = 0; a <= grid; ++a) {
        const double re = static_cast<double>(a) / grid;
        const double imax = std::sqrt(4 - re * re);
        for (int b = -grid; b <= grid; ++b) {
            const cplx s(re, imax * b / grid);
            if (std::abs(s) < 1e-12) continue;
            const cplx ratio = g_factor(I, J, s, t) * std::exp(-3.0 * s * std::log(t / 2));
            worst = std::max(worst, std::abs(ratio - 1.0) * t / std::norm(s));
        }
    }
    return worst;
}

double mirror_factor_constant(const ShiftSet& I, const ShiftSet& J, double t) {
    const cplx e = I.sum() + J.sum();
    return std::abs(X_factor(I, J, t) * std::exp(e * std::log(t / (2 * std::numbers::pi))) - 1.0) * t;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("loglog_slope: needs two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace zm
