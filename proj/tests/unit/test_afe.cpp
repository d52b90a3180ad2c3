#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "zetamoments/afe.hpp"
#include "zetamoments/errors.hpp"

using namespace zm;

namespace {

const ShiftSet I0{0.01, -0.02, cplx(0.005, 0.01)};
const ShiftSet J0{cplx(0.015, -0.01), 0.02, -0.012};

}  // namespace

TEST_CASE("gamma factor ratio") {
    CHECK(g_factor(I0, J0, 0.0, 200) == cplx(1.0));
    // |g/(t/2)^{3s} - 1| <= C |s|^2 / t with a modest C.
    const double t = 500;
    const cplx s = 0.5;
    const double dev = std::abs(g_factor(I0, J0, s, t) * std::exp(-3.0 * s * std::log(t / 2)) - 1.0);
    CHECK(dev <= 10 * std::norm(s) / t);
}

TEST_CASE("mirror factor") {
    const ShiftSet z{0.0, 0.0, 0.0};
    CHECK(std::abs(X_factor(z, z, 300) - 1.0) < 1e-14);
    // Negated shifts with I and J exchanged invert the factor.
    const cplx a = X_factor(I0, J0, 250), b = X_factor(J0.negated(), I0.negated(), 250);
    CHECK(std::abs(a * b - 1.0) < 1e-10);
    // Small real shifts: (t/2pi)^{-sum(a+b)} up to O(1/t).
    const ShiftSet Ir{0.01, -0.02, 0.015}, Jr{0.005, 0.02, -0.01};
    const double t = 200;
    const cplx approx = std::exp(-(Ir.sum() + Jr.sum()) * std::log(t / (2 * std::numbers::pi)));
    CHECK(std::abs(X_factor(Ir, Jr, t) - approx) < 1.0 / t);
}

TEST_CASE("Stirling constants stay bounded in t") {
    std::vector<double> ts{100, 1000, 10000}, cg, cm;
    for (double t : ts) {
        cg.push_back(gamma_ratio_constant(I0, J0, t));
        cm.push_back(mirror_factor_constant(I0, J0, t));
    }
    CHECK(std::abs(loglog_slope(ts, cg)) < 0.1);
    CHECK(std::abs(loglog_slope(ts, cm)) < 0.1);
    const std::vector<double> x{1, 2, 4}, y{3, 12, 48};
    CHECK(loglog_slope(x, y) == doctest::Approx(2.0));
}

TEST_CASE("Q polynomial") {
    const auto q = build_Q_poly(I0, J0);
    CHECK(q.roots.size() == 36);
    CHECK(std::abs(q(0.0) - 1.0) < 1e-14);
    CHECK(std::abs(q(0.5 - (I0[0] + J0[0]) / 2.0)) < 1e-12);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int n = 0; n < 20; ++n) {
        const cplx s(u(rng), u(rng));
        CHECK(std::abs(q(s) - q(-s)) < 1e-12 * std::max(1.0, std::abs(q(s))));
        // Coefficient form agrees with the product form.
        cplx poly = 0, s2k = 1;
        for (const auto& c : q.coefficients) {
            poly += c * s2k;
            s2k *= s * s;
        }
        CHECK(std::abs(poly - q(s)) < 1e-9 * std::max(1.0, std::abs(q(s))));
    }
}

TEST_CASE("admissible weight") {
    const auto q = build_Q_poly(I0, J0);
    CHECK(std::abs(G_weight(q, 0.0) - 1.0) < 1e-14);
    for (cplx s : {cplx(0.3, 2.0), cplx(1.0, 5.0), cplx(-0.7, 1.1)}) {
        CHECK(std::abs(G_weight(q, s) - G_weight(q, -s)) < 1e-10 * std::abs(G_weight(q, s)));
        CHECK(std::abs(G_weight(q, s)) <=
              std::abs(q(s)) * std::exp(s.real() * s.real() - s.imag() * s.imag()) * (1 + 1e-12));
    }
}

TEST_CASE("V weight") {
    const auto w = ContourWeight::gaussian(0.05);
    const double t = 100;
    SUBCASE("close to 1 for small x, stable under refinement") {
        const auto chk = V_weight_checked(I0, J0, t, 1.0, {}, w);
        CHECK(chk.relative_gap < 1e-8);
        CHECK(std::abs(chk.value - 1.0) < 1e-3);
    }
    SUBCASE("linear in the weight") {
        auto w2 = w;
        w2.scale = 2;
        CHECK(std::abs(V_weight(I0, J0, t, 50.0, {}, w2) - 2.0 * V_weight(I0, J0, t, 50.0, {}, w)) < 1e-13);
    }
    SUBCASE("decays beyond t^3") {
        VQuadrature quad;
        quad.c = 4;
        const double x = 10 * t * t * t;
        CHECK(std::abs(V_weight(I0, J0, t, x, quad, w)) <= 1e3 * std::pow(t * t * t / x, 4));
    }
}

TEST_CASE("approximate functional equation") {
    const double t = 60;
    const auto r = afe_evaluate(I0, J0, t);
    CHECK(r.relative_residual < 1e-6);
    CHECK(r.v_at_cutoff < 1e-8);

    SUBCASE("I and J exchanged conjugates both sides for real shifts") {
        const ShiftSet Ir{0.01, -0.02, 0.015}, Jr{0.005, 0.02, -0.011};
        const auto a = afe_evaluate(Ir, Jr, t), b = afe_evaluate(Jr, Ir, t);
        CHECK(std::abs(a.lhs - std::conj(b.lhs)) < 1e-10 * std::abs(a.lhs));
        CHECK(std::abs(a.rhs - std::conj(b.rhs)) < 1e-10 * std::abs(a.rhs));
    }
    SUBCASE("the total does not depend on the even weight") {
        AFEOptions o;
        o.weight = ContourWeight::gaussian(0.1);
        const auto b = afe_evaluate(I0, J0, t, o);
        CHECK(std::abs(b.main_sum - r.main_sum) > 1e-6 * std::abs(r.lhs));
        CHECK(std::abs(b.rhs - r.rhs) < 1e-8 * std::abs(r.lhs));
    }
}
