#pragma once

#include <array>
#include <complex>
#include <cstdint>

#include "zetamoments/arith.hpp"

namespace zm {

using cplxl = std::complex<long double>;

// Principal branch of log Gamma.  Throws PoleProximityError within 1e-8 of a
// non-positive integer.
cplx log_gamma(cplx z);
cplxl log_gamma(cplxl z);

// Riemann zeta by Euler-Maclaurin, with the functional equation for Re s < 0.
// Throws PoleProximityError within 1e-8 of s = 1.
cplx zeta(cplx s);
cplxl zeta(cplxl s);

// Hardy's theta and Z functions; zeta(1/2 + it) = exp(-i theta(t)) Z(t).
double hardy_theta(double t);
long double hardy_theta(long double t);
double hardy_Z(double t);  // Riemann-Siegel, t >= 50

// zeta(1/2 + it) by Riemann-Siegel with the C0..C4 corrections.  Throws
// DomainError for t < 50, where the Euler-Maclaurin evaluator should be used.
cplx zeta_critical_fast(double t);

// Riemann-Siegel remainder coefficients C_0..C_4 at p = frac(sqrt(t/2pi)).
std::array<double, 5> riemann_siegel_coefficients(double p);

// exp(-i t log n) with the argument reduced in extended precision.
cplx unit_phase(double t, std::uint64_t n);

// sum over all primes p^{-m} (integer m >= 2), and the same sum over p > P.
double prime_zeta(int m);
double prime_power_tail(int m, std::uint64_t P);

}  // namespace zm
