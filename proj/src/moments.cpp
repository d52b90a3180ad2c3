#include "zetamoments/moments.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "zetamoments/dirichlet.hpp"
#include "zetamoments/divisor.hpp"
#include "zetamoments/errors.hpp"
#include "zetamoments/kernels.hpp"
#include "zetamoments/local_factors.hpp"
#include "zetamoments/primes.hpp"
#include "zetamoments/special.hpp"

namespace zm {

WeightSpec WeightSpec::standard(double T, double c1, double c2, double t0_exponent) {
    WeightSpec w;
    w.T = T;
    w.c1 = c1;
    w.c2 = c2;
    w.T0 = std::min(std::pow(T, t0_exponent), (c2 - c1) * T / 2);
    w.validate();
    return w;
}

void WeightSpec::validate() const {
    if (!(T > 0)) throw ConfigError("T", "must be positive");
    if (!(c1 > 0)) throw ConfigError("c1", "must be positive");
    if (!(c2 > c1)) throw ConfigError("c2", "must exceed c1");
    if (!(T0 > 0)) throw ConfigError("T0", "must be positive");
    if ((c2 - c1) * T < 2 * T0) throw ConfigError("T0", "ramps overlap: (c2 - c1) T < 2 T0");
    if (T0 < std::pow(T, 0.75) * (1 - 1e-12)) throw ConfigError("T0", "below T^{3/4}");
}

double omega(const WeightSpec& spec, double t) {
    const double lo = spec.lo(), hi = spec.hi();
    if (t <= lo || t >= hi) return 0;
    return smoothstep((t - lo) / spec.T0) * smoothstep((hi - t) / spec.T0);
}

namespace {

void combinations(int k, int j, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == j) {
        out.push_back(cur);
        return;
    }
    for (int i = start; i < k; ++i) {
        cur.push_back(i);
        combinations(k, j, i + 1, cur, out);
        cur.pop_back();
    }
}

std::string describe(const SwapPair& sp) {
    std::ostringstream os;
    os << "S={";
    for (std::size_t i = 0; i < sp.S.size(); ++i) os << (i ? "," : "") << "a" << sp.S[i] + 1;
    os << "} T={";
    for (std::size_t i = 0; i < sp.Tset.size(); ++i) os << (i ? "," : "") << "b" << sp.Tset[i] + 1;
    os << "}";
    return os.str();
}

void check_poles(const SwapPair& sp, double guard) {
    for (const auto& x : sp.I_S)
        for (const auto& y : sp.J_T)
            if (std::abs(x + y) < guard) {
                std::ostringstream os;
                os << "swap term " << describe(sp) << ": zeta argument 1 + x + y within " << guard << " of the pole";
                throw PoleProximityError(os.str());
            }
}

}  // namespace

std::vector<SwapPair> swap_terms(const ShiftSet& I, const ShiftSet& J, int j) {
    const int k = static_cast<int>(I.size());
    if (static_cast<int>(J.size()) != k) throw DomainError("swap_terms: needs |I| = |J|");
    if (j < 0 || j > k) throw DomainError("swap_terms: j out of range");
    std::vector<std::vector<int>> subsets;
    std::vector<int> cur;
    combinations(k, j, 0, cur, subsets);
    std::vector<SwapPair> out;
    for (const auto& S : subsets)
        for (const auto& T : subsets) {
            std::vector<cplx> a(I.begin(), I.end()), b(J.begin(), J.end());
            SwapPair sp;
            sp.S = S;
            sp.Tset = T;
            for (int r = 0; r < j; ++r) {
                a[S[r]] = -J[T[r]];
                b[T[r]] = -I[S[r]];
                sp.exponent_sum += I[S[r]] + J[T[r]];
            }
            sp.I_S = ShiftSet(a);
            sp.J_T = ShiftSet(b);
            out.push_back(std::move(sp));
        }
    return out;
}

std::vector<SwapPair> all_swap_terms(const ShiftSet& I, const ShiftSet& J) {
    std::vector<SwapPair> out;
    for (int j = 0; j <= static_cast<int>(I.size()); ++j) {
        auto part = swap_terms(I, J, j);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

cplx t_power_integral(const WeightSpec& spec, cplx e, double rel_tol) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double two_pi = 2 * std::numbers::pi;
    const double lo = spec.lo(), hi = spec.hi();
    const double cuts[4] = {lo, lo + spec.T0, hi - spec.T0, hi};
    cplx total = 0;
    for (int k = 0; k < 3; ++k) {
        if (!(cuts[k + 1] > cuts[k])) continue;
        auto f = [&](double t) { return std::exp(-e * std::log(t / two_pi)) * omega(spec, t); };
        const double re = GK::integrate([&](double t) { return f(t).real(); }, cuts[k], cuts[k + 1], 20, rel_tol);
        const double im = GK::integrate([&](double t) { return f(t).imag(); }, cuts[k], cuts[k + 1], 20, rel_tol);
        total += cplx(re, im);
    }
    return total;
}

std::vector<SwapValue> swap_values_reference(const ShiftSet& I, const ShiftSet& J, const MainTermOptions& opt) {
    std::vector<SwapValue> out;
    for (auto& sp : all_swap_terms(I, J)) {
        check_poles(sp, opt.pole_guard);
        SwapValue v;
        v.Z = Z_factored(sp.I_S, sp.J_T, 0.0, opt.p_max);
        v.pair = std::move(sp);
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<SwapValue> swap_values(const ShiftSet& I, const ShiftSet& J, const MainTermOptions& opt) {
    if (I.size() != 3) return swap_values_reference(I, J, opt);
    auto pairs = all_swap_terms(I, J);
    for (const auto& sp : pairs) check_poles(sp, opt.pole_guard);
    const std::size_t n = pairs.size();

    // Slot r of I_S is a_r (code r) or -b_l (code 3 + l); likewise for J_T.
    std::vector<std::array<int, 3>> xcode(n), ycode(n);
    for (std::size_t q = 0; q < n; ++q) {
        for (int r = 0; r < 3; ++r) {
            xcode[q][r] = r;
            ycode[q][r] = 3 + r;
        }
        for (std::size_t r = 0; r < pairs[q].S.size(); ++r) {
            xcode[q][pairs[q].S[r]] = 3 + pairs[q].Tset[r];
            ycode[q][pairs[q].Tset[r]] = pairs[q].S[r];
        }
    }
    // x-variable for code c: p^{-a_c} (c < 3) or p^{+b_{c-3}}; y-variable: p^{-b} or p^{+a}.
    const auto primes = primes_up_to(opt.p_max);
    const std::uint64_t blocks = (primes.size() + kernel_block - 1) / kernel_block;
    std::vector<std::vector<cplx>> partial(blocks, std::vector<cplx>(n, 0.0));
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
        auto& acc = partial[b];
        const std::size_t e = std::min<std::size_t>(primes.size(), (b + 1) * kernel_block);
        for (std::size_t i = b * kernel_block; i < e; ++i) {
            const double lp = std::log(static_cast<double>(primes[i]));
            std::array<cplx, 6> xv, yv;
            for (int r = 0; r < 3; ++r) {
                const cplx pa = std::exp(-I[r] * lp), pb = std::exp(-J[r] * lp);
                xv[r] = pa;
                xv[3 + r] = 1.0 / pb;
                yv[3 + r] = pb;
                yv[r] = 1.0 / pa;
            }
            const cplx U = 1.0 / static_cast<double>(primes[i]);
            for (std::size_t q = 0; q < n; ++q) {
                const std::array<cplx, 3> X{xv[xcode[q][0]], xv[xcode[q][1]], xv[xcode[q][2]]};
                const std::array<cplx, 3> Y{yv[ycode[q][0]], yv[ycode[q][1]], yv[ycode[q][2]]};
                acc[q] += std::log(poly_P(X, Y, U));
            }
        }
    }
    std::vector<SwapValue> out(n);
    for (std::size_t q = 0; q < n; ++q) {
        cplx logA = 0;
        for (const auto& p : partial) logA += p[q];
        cplx z = std::exp(logA);
        for (const auto& x : pairs[q].I_S)
            for (const auto& y : pairs[q].J_T) z *= zeta(1.0 + x + y);
        out[q].Z = z;
        out[q].pair = std::move(pairs[q]);
    }
    return out;
}

cplx swap_sum(std::span<const SwapValue> values, const WeightSpec& spec) {
    cplx total = 0;
    for (const auto& v : values) total += v.Z * t_power_integral(spec, v.pair.exponent_sum);
    return total;
}

cplx swap_main_term(const ShiftSet& I, const ShiftSet& J, const WeightSpec& spec, const MainTermOptions& opt) {
    spec.validate();
    const auto v = swap_values(I, J, opt);
    return swap_sum(v, spec);
}

std::vector<ZeroShiftMoment> zero_shift_main_terms(int k, std::span<const WeightSpec> specs,
                                                   const ZeroShiftMomentOptions& opt) {
    if (k < 1 || k > 3) throw DomainError("zero_shift_main_terms: k must be 1, 2 or 3");
    if (opt.nodes < 4) throw DomainError("zero_shift_main_terms: needs at least 4 circle nodes");
    for (const auto& s : specs) s.validate();
    auto mean = [&](double radius) {
        std::vector<cplx> acc(specs.size(), 0.0);
        for (int m = 0; m < opt.nodes; ++m) {
            const cplx eps = std::polar(radius, 2 * std::numbers::pi * (m + 0.5) / opt.nodes);
            std::vector<cplx> a, b;
            for (int i = 0; i < k; ++i) {
                a.push_back(eps * opt.pattern_a[i]);
                b.push_back(eps * opt.pattern_b[i]);
            }
            const auto vals = swap_values(ShiftSet(a), ShiftSet(b), opt.main);
            for (std::size_t s = 0; s < specs.size(); ++s) acc[s] += swap_sum(vals, specs[s]);
        }
        for (auto& v : acc) v /= double(opt.nodes);
        return acc;
    };
    const auto full = mean(opt.delta);
    const auto half = mean(opt.delta / 2);
    std::vector<ZeroShiftMoment> out(specs.size());
    for (std::size_t s = 0; s < specs.size(); ++s) {
        out[s].value = full[s].real();
        out[s].imag = full[s].imag();
        out[s].value_half = half[s].real();
        out[s].relative_gap = std::abs(full[s].real() - half[s].real()) / std::abs(half[s].real());
        out[s].flagged = !(out[s].relative_gap <= 0.01);
    }
    return out;
}

namespace {

struct Grid {
    double lo, h;
    std::uint64_t n;  // points lo + i h, i = 0..n, n even
};

Grid make_grid(const WeightSpec& spec, const RawMomentOptions& opt) {
    spec.validate();
    const double target = opt.step > 0 ? opt.step : 0.02 / std::log(spec.T);
    Grid g;
    g.lo = spec.lo();
    auto n = static_cast<std::uint64_t>(std::ceil((spec.hi() - spec.lo()) / target));
    if (n % 2) ++n;
    g.n = n;
    g.h = (spec.hi() - spec.lo()) / static_cast<double>(n);
    return g;
}

// Both trapezoid sums (step h and 2h) in one pass; omega vanishes at the ends.
template <class F>
RawMomentResult integrate_grid(const Grid& g, const RawMomentOptions& opt, F f, bool parallel) {
    const std::uint64_t blocks = (g.n + 1 + kernel_block - 1) / kernel_block;
    std::vector<cplx> fine(blocks, 0.0), coarse(blocks, 0.0);
    auto block = [&](std::int64_t b) {
        const std::uint64_t i0 = b * kernel_block, i1 = std::min<std::uint64_t>(g.n + 1, i0 + kernel_block);
        cplx af = 0, ac = 0;
        for (std::uint64_t i = i0; i < i1; ++i) {
            const cplx v = f(g.lo + static_cast<double>(i) * g.h);
            af += v;
            if (i % 2 == 0) ac += v;
        }
        fine[b] = af;
        coarse[b] = ac;
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) block(b);
    } else {
        for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) block(b);
    }
    RawMomentResult r;
    for (std::uint64_t b = 0; b < blocks; ++b) {
        r.value += fine[b];
        r.coarse += coarse[b];
    }
    r.value *= g.h;
    r.coarse *= 2 * g.h;
    r.step = g.h;
    r.points = g.n + 1;
    r.relative_gap = std::abs(r.value - r.coarse) / std::abs(r.value);
    if (!(r.relative_gap <= opt.refine_tol)) {
        std::ostringstream os;
        os << "raw_moment: step " << g.h << " vs " << 2 * g.h << " differ by " << r.relative_gap << " (tolerance "
           << opt.refine_tol << ")";
        throw RefinementError(os.str());
    }
    return r;
}

double critical_modulus_squared(double t) {
    if (t >= 50) {
        const double z = hardy_Z(t);
        return z * z;
    }
    return std::norm(zeta(cplx(0.5, t)));
}

}  // namespace

RawMomentResult raw_moment(const ShiftSet& I, const ShiftSet& J, const WeightSpec& spec, const RawMomentOptions& opt) {
    if (I.size() != J.size() || I.size() > 3) throw DomainError("raw_moment: needs |I| = |J| <= 3");
    const Grid g = make_grid(spec, opt);
    return integrate_grid(
        g, opt,
        [&](double t) -> cplx {
            const double w = omega(spec, t);
            if (w == 0) return 0;
            cplx v = w;
            for (const auto& a : I) v *= zeta(cplx(0.5 + a.real(), a.imag() + t));
            for (const auto& b : J) v *= zeta(cplx(0.5 + b.real(), b.imag() - t));
            return v;
        },
        true);
}

namespace {

RawMomentResult raw_zero_impl(int k, const WeightSpec& spec, const RawMomentOptions& opt, bool parallel) {
    if (k < 1 || k > 3) throw DomainError("raw_moment_zero: k must be 1, 2 or 3");
    const Grid g = make_grid(spec, opt);
    return integrate_grid(
        g, opt,
        [&](double t) -> cplx {
            const double w = omega(spec, t);
            if (w == 0) return 0;
            return w * std::pow(critical_modulus_squared(t), k);
        },
        parallel);
}

}  // namespace

RawMomentResult raw_moment_zero(int k, const WeightSpec& spec, const RawMomentOptions& opt) {
    return raw_zero_impl(k, spec, opt, true);
}

RawMomentResult raw_moment_zero_serial(int k, const WeightSpec& spec, const RawMomentOptions& opt) {
    return raw_zero_impl(k, spec, opt, false);
}

double leading_coefficient(int k) {
    if (k < 1 || k > 4) throw DomainError("leading_coefficient: k must be 1..4");
    static std::mutex mu;
    static double cache[5] = {0, 0, 0, 0, 0};
    std::lock_guard<std::mutex> lock(mu);
    if (cache[k] == 0) {
        const double g = static_cast<double>(g_k_constant(k));
        const double a = k == 1 ? 1.0 : a_k_constant(k, 100000).value.real();
        cache[k] = g * a / std::tgamma(k * k + 1.0);
    }
    return cache[k];
}

double leading_asymptotic(int k, double T) {
    if (!(T > 1)) throw DomainError("leading_asymptotic: needs T > 1");
    return leading_coefficient(k) * T * std::pow(std::log(T), k * k);
}

std::vector<ComparisonReport> moment_ladder(int k, std::span<const double> Ts, const LadderOptions& opt) {
    for (std::size_t i = 1; i < Ts.size(); ++i)
        if (!(Ts[i] > Ts[i - 1])) throw ConfigError("T_values", "must be increasing");
    for (double T : Ts)
        if (T > 1e4) throw ConfigError("T_values", "desk scale is limited to T <= 1e4");
    std::vector<WeightSpec> specs;
    for (double T : Ts) specs.push_back(WeightSpec::standard(T, opt.c1, opt.c2, opt.t0_exponent));
    const auto main = zero_shift_main_terms(k, specs, opt.main);
    std::vector<ComparisonReport> out;
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    for (std::size_t i = 0; i < Ts.size(); ++i) {
        ComparisonReport rep;
        rep.experiment = "moment_k" + std::to_string(k);
        rep.k = k;
        rep.T = Ts[i];
        const auto raw = raw_moment_zero(k, specs[i], opt.raw);
        rep.raw = raw.value.real();
        rep.raw_gap = raw.relative_gap;
        rep.main = main[i].value;
        rep.main_gap = main[i].relative_gap;
        rep.flagged = main[i].flagged;
        rep.leading = leading_asymptotic(k, Ts[i]);
        const double c = leading_coefficient(k);
        const double density = GK::integrate(
            [&](double t) { return c * std::pow(std::log(t / (2 * std::numbers::pi)), k * k) * omega(specs[i], t); },
            specs[i].lo(), specs[i].hi(), 20, 1e-12);
        rep.ratio = rep.raw / rep.main;
        rep.ratio_leading = rep.raw / density;
        out.push_back(rep);
    }
    return out;
}

}  // namespace zm
