#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "zetamoments/arith.hpp"
#include "zetamoments/special.hpp"

namespace zm {

// Ratio of the six Gamma factors at s and at 0 (the archimedean part of V).
cplx g_factor(const ShiftSet& I, const ShiftSet& J, cplx s, double t);
// Gamma-factor ratio that multiplies the mirror sum.
cplx X_factor(const ShiftSet& I, const ShiftSet& J, double t);

// Even polynomial Q(s) = prod_rho (1 - s^2/rho^2) over the 36 points
// 1/2 - (e_a a_i + e_b b_j)/2, e_a, e_b = +-1.
struct QPolySpec {
    ShiftSet I, J;
    std::vector<cplx> roots;
    std::vector<cplx> coefficients;  // Q(s) = sum_k coefficients[k] s^{2k}

    cplx operator()(cplx s) const;
};

QPolySpec build_Q_poly(const ShiftSet& I, const ShiftSet& J);

// G(s) = Q(s) exp(s^2).
cplx G_weight(const QPolySpec& q, cplx s);

// An even weight G(s) = [Q(s)] exp(gauss s^2) with G(0) = 1.
struct ContourWeight {
    std::optional<QPolySpec> q;
    double gauss = 1.0;
    double scale = 1.0;  // overall multiplier, 1 for an admissible weight

    cplx operator()(cplx s) const;

    static ContourWeight q_times_gaussian(const QPolySpec& q);  // Q(s) exp(s^2)
    static ContourWeight gaussian(double b);                     // exp(b s^2)
};

struct VQuadrature {
    double c = 1.0;      // abscissa of the vertical line
    double h = 0.05;     // trapezoid step in Im s
    double U = 0.0;      // truncation |Im s| <= U; 0 selects it from the weight's decay
    double tail_tol = 1e-16;
};

// The truncation U actually used for a given weight (when quad.U == 0).
double v_truncation(const ContourWeight& w, const ShiftSet& I, const ShiftSet& J, double t, const VQuadrature& quad);

cplx V_weight(const ShiftSet& I, const ShiftSet& J, double t, double x, const VQuadrature& quad,
              const ContourWeight& w);
// Default weight Q_{I,J}(s) exp(s^2).
cplx V_weight(const ShiftSet& I, const ShiftSet& J, double t, double x, const VQuadrature& quad = {});

struct VCheck {
    cplx value;
    cplx refined;  // step halved and truncation doubled
    double relative_gap;
};
// Throws RefinementError if the refined value differs by more than tol (relative
// to max(|V|, 1e-300)).
VCheck V_weight_checked(const ShiftSet& I, const ShiftSet& J, double t, double x, const VQuadrature& quad,
                        const ContourWeight& w, double tol = 1e-8);

struct AFEOptions {
    std::optional<ContourWeight> weight;  // default: exp(s^2 / 20)
    double h = 0.025;
    double cutoff_tol = 1e-20;     // V below this is treated as zero
    std::uint64_t cutoff = 0;      // explicit sum length; 0 selects it from V
    double table_step = 2e-4;      // log-x spacing of the V interpolation table
};

struct AFEResult {
    cplx lhs, rhs;
    cplx main_sum, mirror_sum, x_factor;
    double residual = 0, relative_residual = 0;
    std::uint64_t cutoff_main = 0, cutoff_mirror = 0;
    double v_at_cutoff = 0;  // largest |V| at the end of either sum
    double h = 0, U = 0;
};

AFEResult afe_evaluate(const ShiftSet& I, const ShiftSet& J, double t, const AFEOptions& opt = {});

// sup of |g_factor(s, t) / (t/2)^{3s} - 1| t / |s|^2 over s on a grid of the
// half disc |s| <= 2, 0 <= Re s <= 1 (s = 0 excluded).
double gamma_ratio_constant(const ShiftSet& I, const ShiftSet& J, double t, int grid = 12);
// |X_factor(t) (t/2pi)^{sum(a + b)} - 1| t.
double mirror_factor_constant(const ShiftSet& I, const ShiftSet& J, double t);
// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace zm
