#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include <omp.h>

#include "zetamoments/errors.hpp"
#include "zetamoments/moments.hpp"

using namespace zm;

namespace {

constexpr double euler_gamma = 0.57721566490153286061;

double simple_integral(const WeightSpec& w, double (*g)(double)) {
    const double h = 0.01;
    double acc = 0;
    for (double t = w.lo() + h / 2; t < w.hi(); t += h) acc += g(t) * omega(w, t);
    return acc * h;
}

}  // namespace

TEST_CASE("weight parameters") {
    const auto w = WeightSpec::standard(5000);
    CHECK(w.T0 == doctest::Approx(std::pow(5000.0, 0.8)));
    const auto clamped = WeightSpec::standard(1000);
    CHECK(clamped.T0 == doctest::Approx(250.0));
    CHECK(clamped.T0 >= std::pow(1000.0, 0.75));
    WeightSpec bad = w;
    bad.c2 = 0.4;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = w;
    bad.T0 = 10;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("omega is a smooth bump") {
    const auto w = WeightSpec::standard(2000);
    CHECK(omega(w, w.lo()) == 0.0);
    CHECK(omega(w, w.hi()) == 0.0);
    CHECK(omega(w, 0.75 * 2000) == 1.0);
    for (double t = w.lo(); t <= w.hi(); t += 7.3) {
        CHECK(omega(w, t) >= 0.0);
        CHECK(omega(w, t) <= 1.0);
    }
}

TEST_CASE("swap enumeration") {
    const ShiftSet I{0.01, 0.02, 0.03}, J{-0.015, 0.025, 0.035};
    CHECK(all_swap_terms(ShiftSet{0.01}, ShiftSet{0.02}).size() == 2);
    CHECK(all_swap_terms(ShiftSet{0.01, 0.02}, ShiftSet{0.03, 0.04}).size() == 6);
    const auto all = all_swap_terms(I, J);
    CHECK(all.size() == 20);
    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
    for (const auto& sp : all) seen.insert({sp.S, sp.Tset});
    CHECK(seen.size() == 20);

    SUBCASE("single swap S = {a1}, T = {b2}") {
        const auto one = swap_terms(I, J, 1);
        const auto& sp = one[1];
        REQUIRE(sp.S == std::vector<int>{0});
        REQUIRE(sp.Tset == std::vector<int>{1});
        CHECK(sp.I_S[0] == -J[1]);
        CHECK(sp.I_S[1] == I[1]);
        CHECK(sp.J_T[1] == -I[0]);
        CHECK(sp.J_T[0] == J[0]);
        CHECK(std::abs(sp.exponent_sum - (I[0] + J[1])) < 1e-16);
    }
    SUBCASE("full swap") {
        const auto full = swap_terms(I, J, 3);
        const auto& sp = full.front();
        for (int i = 0; i < 3; ++i) {
            CHECK(sp.I_S[i] == -J[i]);
            CHECK(sp.J_T[i] == -I[i]);
        }
    }
}

TEST_CASE("t-power integral") {
    const auto w = WeightSpec::standard(1000);
    CHECK(t_power_integral(w, 0.0).real() == doctest::Approx(simple_integral(w, [](double) { return 1.0; })).epsilon(1e-7));
    const cplx e(0.03, -0.02);
    const double h = 0.01;
    cplx ref = 0;
    for (double t = w.lo() + h / 2; t < w.hi(); t += h)
        ref += std::exp(-e * std::log(t / (2 * std::numbers::pi))) * omega(w, t);
    ref *= h;
    CHECK(std::abs(t_power_integral(w, e) - ref) < 1e-7 * std::abs(ref));
}

TEST_CASE("swap values: one prime pass equals per-pair factorisation") {
    const ShiftSet I{cplx(0.01, 0.02), -0.015, 0.03}, J{0.02, cplx(0, -0.01), -0.025};
    MainTermOptions o;
    o.p_max = 100000;
    const auto fast = swap_values(I, J, o), ref = swap_values_reference(I, J, o);
    REQUIRE(fast.size() == ref.size());
    for (std::size_t q = 0; q < fast.size(); ++q) CHECK(std::abs(fast[q].Z - ref[q].Z) < 1e-12 * std::abs(ref[q].Z));
}

TEST_CASE("a swap too close to the zeta pole is named") {
    const ShiftSet I{0.01, 0.02, 0.03}, J{-0.01 + 1e-6, 0.025, 0.035};
    try {
        swap_values(I, J);
        FAIL("expected a pole proximity error");
    } catch (const PoleProximityError& e) {
        CHECK(std::string(e.what()).find("S={") != std::string::npos);
    }
}

TEST_CASE("k = 1 zero-shift main term is the log-plus-2gamma integral") {
    const auto w = WeightSpec::standard(1000);
    const std::vector<WeightSpec> specs{w};
    const auto z = zero_shift_main_terms(1, specs);
    const double ref = simple_integral(
        w, [](double t) { return std::log(t / (2 * std::numbers::pi)) + 2 * euler_gamma; });
    CHECK(z[0].value == doctest::Approx(ref).epsilon(1e-8));
    CHECK(z[0].relative_gap < 1e-10);
    CHECK(std::abs(z[0].imag) < 1e-10 * z[0].value);
}

TEST_CASE("k = 2 zero-shift main term is stable and real") {
    const std::vector<WeightSpec> specs{WeightSpec::standard(1000), WeightSpec::standard(2000)};
    const auto z = zero_shift_main_terms(2, specs);
    for (const auto& v : z) {
        CHECK(v.relative_gap < 1e-8);
        CHECK(std::abs(v.imag) < 1e-8 * v.value);
    }
    CHECK(z[1].value > z[0].value);
}

TEST_CASE("shifted second moment follows the two-term main term") {
    const auto w = WeightSpec::standard(300);
    const ShiftSet I{0.01}, J{cplx(-0.02, 0.01)};
    RawMomentOptions o;
    o.step = 0.01;
    const auto raw = raw_moment(I, J, w, o);
    const cplx main = swap_main_term(I, J, w);
    CHECK(std::abs(raw.value / main - 1.0) < 0.01);
}

TEST_CASE("raw moment: refinement and thread independence") {
    const auto w = WeightSpec::standard(500);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(3);
    const auto a = raw_moment_zero(2, w);
    omp_set_num_threads(saved);
    const auto b = raw_moment_zero_serial(2, w);
    CHECK(a.value == b.value);
    CHECK(a.relative_gap < 1e-6);
    RawMomentOptions coarse;
    coarse.step = 4;
    CHECK_THROWS_AS(raw_moment_zero(2, w, coarse), RefinementError);
}

TEST_CASE("leading-order constants") {
    CHECK(leading_coefficient(1) == doctest::Approx(1.0));
    CHECK(leading_coefficient(2) == doctest::Approx(1 / (2 * std::numbers::pi * std::numbers::pi)).epsilon(1e-9));
    CHECK(leading_asymptotic(1, 1000) == doctest::Approx(1000 * std::log(1000.0)));
}

TEST_CASE("ladder input validation") {
    const std::vector<double> down{2000, 1000};
    CHECK_THROWS_AS(moment_ladder(1, down), ConfigError);
    const std::vector<double> huge{2e4};
    CHECK_THROWS_AS(moment_ladder(1, huge), ConfigError);
}
