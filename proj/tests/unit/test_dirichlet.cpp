#include <doctest.h>

#include <cmath>

#include <omp.h>

#include "zetamoments/dirichlet.hpp"
#include "zetamoments/special.hpp"

using namespace zm;

namespace {

const ShiftSet I3{0.01, cplx(-0.02, 0.005), cplx(0.015, -0.01)};
const ShiftSet J3{cplx(-0.012, 0.004), 0.018, cplx(0.006, -0.014)};

}  // namespace

TEST_CASE("zeta_X is the product of shifted zetas") {
    const cplx s(1.3, 0.4);
    CHECK(std::abs(zeta_X(I3, s) - zeta(s + I3[0]) * zeta(s + I3[1]) * zeta(s + I3[2])) < 1e-13);
}

TEST_CASE("Z factorisations in closed form") {
    const cplx s(1.5, 0.2);
    SUBCASE("one shift each: a single zeta") {
        const ShiftSet X{0.01}, Y{cplx(-0.02, 0.01)};
        CHECK(std::abs(Z_factored(X, Y, s) - zeta(1.0 + s + X[0] + Y[0])) < 1e-13);
    }
    SUBCASE("two shifts each: Ramanujan's quotient") {
        const ShiftSet X{0.01, -0.02}, Y{cplx(0.015, 0.01), 0.02};
        cplx expect = 1;
        for (const auto& a : X)
            for (const auto& b : Y) expect *= zeta(1.0 + s + a + b);
        expect /= zeta(2.0 + 2.0 * s + X.sum() + Y.sum());
        CHECK(std::abs(Z_factored(X, Y, s) - expect) < 1e-13);
    }
}

TEST_CASE("truncated Z agrees with the factorisation within its tail") {
    const cplx s(2.0, 0.3);
    for (int k = 1; k <= 3; ++k) {
        const ShiftSet X(std::vector<cplx>(I3.begin(), I3.begin() + k));
        const ShiftSet Y(std::vector<cplx>(J3.begin(), J3.begin() + k));
        const auto tr = Z_truncated(X, Y, s, 20000);
        const cplx fa = Z_factored(X, Y, s);
        CHECK(tr.terms_used == 20000);
        CHECK(std::abs(tr.value - fa) <= 1.5 * tr.tail_estimate);
        CHECK(std::abs(tr.value - fa) < 1e-5 * std::abs(fa));
    }
}

TEST_CASE("A factor Euler product and its tail") {
    const auto a = A_euler(I3, J3, 1.0, 100000);
    const auto b = A_euler(I3, J3, 1.0, 200000);
    CHECK(std::abs(b.value - a.value) < std::abs(a.value) * a.tail_bound);
}

TEST_CASE("H: fast reorganisation equals the direct double loop") {
    for (cplx s : {cplx(1.0), cplx(1.4, 0.7)})
        for (int i1 = 0; i1 < 3; ++i1) {
            const auto fast = H_truncated(I3, J3, s, 300, 200, i1, (i1 + 1) % 3);
            const auto naive = H_truncated_naive(I3, J3, s, 300, 200, i1, (i1 + 1) % 3);
            CHECK(std::abs(fast.value - naive.value) < 1e-11 * std::abs(naive.value));
        }
}

TEST_CASE("H truncated vs factored") {
    const cplx s(1.5);
    const auto tr = H_truncated(I3, J3, s, 3000, 3000);
    const cplx fa = H_factored(I3, J3, s);
    CHECK(std::abs(tr.value - fa) <= tr.tail_estimate);
    CHECK(std::abs(tr.value - fa) < 1e-3 * std::abs(fa));
}

TEST_CASE("singular coefficients") {
    const auto c = singular_coefficients(I3, J3, 0, 0, 50);
    CHECK(std::abs(c[1] - 1.0) < 1e-15);
    // Multiplicative in l.
    CHECK(std::abs(c[12] - c[3] * c[4]) < 1e-13);
    CHECK(std::abs(c[35] - c[5] * c[7]) < 1e-13);
}

TEST_CASE("parallel sums do not depend on the thread count") {
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const auto a = Z_truncated(I3, J3, 1.5, 100000);
    omp_set_num_threads(4);
    const auto b = Z_truncated(I3, J3, 1.5, 100000);
    omp_set_num_threads(saved);
    CHECK(a.value == b.value);
    CHECK(a.tail_estimate == b.tail_estimate);
}
