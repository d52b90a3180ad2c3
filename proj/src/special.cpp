#include "zetamoments/special.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/bernoulli.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include "zetamoments/errors.hpp"
#include "zetamoments/primes.hpp"

namespace zm {

namespace {

constexpr long double pi_l = std::numbers::pi_v<long double>;

// B_{2k} / (2k (2k-1)) for the Stirling series.
const std::vector<long double>& stirling_coefficients() {
    static const std::vector<long double> c = [] {
        std::vector<long double> v;
        for (int k = 1; k <= 14; ++k)
            v.push_back(boost::math::bernoulli_b2n<long double>(k) / ((2.0L * k) * (2.0L * k - 1)));
        return v;
    }();
    return c;
}

// B_{2k} / (2k)! for the Euler-Maclaurin tail.
const std::vector<long double>& em_coefficients() {
    static const std::vector<long double> c = [] {
        std::vector<long double> v;
        for (int k = 1; k <= 60; ++k)
            v.push_back(boost::math::bernoulli_b2n<long double>(k) / boost::math::factorial<long double>(2 * k));
        return v;
    }();
    return c;
}

template <class T>
std::complex<T> log_gamma_impl(std::complex<T> z) {
    using C = std::complex<T>;
    if (z.real() <= 0.5) {
        const T n = std::round(z.real());
        if (n <= 0 && std::abs(z - C(n, 0)) < T(1e-8)) throw PoleProximityError("log_gamma: argument near a pole");
    }
    C shift = 0;
    while (z.real() < T(0.5) || std::abs(z) < T(15)) {
        shift += std::log(z);
        z += T(1);
    }
    const C zinv = T(1) / z;
    const C zinv2 = zinv * zinv;
    C series = 0;
    C zp = zinv;
    const auto& b = stirling_coefficients();
    const std::size_t terms = sizeof(T) > sizeof(double) ? 12 : 10;
    for (std::size_t k = 0; k < terms; ++k) {
        series += T(b[k]) * zp;
        zp *= zinv2;
    }
    const T half_log_2pi = T(0.5L * std::log(2.0L * pi_l));
    return (z - T(0.5)) * std::log(z) - z + half_log_2pi + series - shift;
}

// n^{-s} with the oscillating factor reduced in the working precision.
template <class T>
std::complex<T> power_neg(std::uint64_t n, std::complex<T> s) {
    const T ln = std::log(static_cast<T>(n));
    const T mag = std::exp(-s.real() * ln);
    const T ang = -s.imag() * ln;
    return {mag * std::cos(ang), mag * std::sin(ang)};
}

template <class T>
std::complex<T> log_sin(std::complex<T> w) {
    using C = std::complex<T>;
    const C I(0, 1);
    if (w.imag() > 20) return std::log(C(0, 0.5)) - I * w + std::log(T(1) - std::exp(T(2) * I * w));
    if (w.imag() < -20) return std::log(C(0, -0.5)) + I * w + std::log(T(1) - std::exp(T(-2) * I * w));
    return std::log(std::sin(w));
}

template <class T>
std::complex<T> zeta_impl(std::complex<T> s) {
    using C = std::complex<T>;
    if (std::abs(s - T(1)) < T(1e-8)) throw PoleProximityError("zeta: argument within 1e-8 of the pole at 1");
    if (s.real() < 0) {
        const C one_minus = T(1) - s;
        const C log_chi = s * std::log(T(2)) + (s - T(1)) * std::log(T(pi_l)) + log_sin(T(pi_l) * s / T(2)) +
                          log_gamma_impl(one_minus);
        return std::exp(log_chi) * zeta_impl(one_minus);
    }
    const std::uint64_t N = static_cast<std::uint64_t>(std::max<T>(20, std::ceil(std::abs(s.imag()) / 2) + 20));
    C head = 0;
    for (std::uint64_t n = N - 1; n >= 1; --n) head += power_neg(n, s);
    const C Ns = power_neg(N, s);
    const T Nd = static_cast<T>(N);
    C total = head + Nd * Ns / (s - T(1)) + Ns / T(2);
    // Bernoulli tail: B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
    const auto& b = em_coefficients();
    C poch = s;
    C Npow = Ns / Nd;
    const T eps = std::numeric_limits<T>::epsilon();
    T last = std::numeric_limits<T>::infinity();
    for (std::size_t k = 0; k < b.size(); ++k) {
        const C term = T(b[k]) * poch * Npow;
        const T mag = std::abs(term);
        if (mag > last) break;  // asymptotic series started to diverge
        total += term;
        if (mag < eps * std::abs(total) * T(0.1)) break;
        last = mag;
        poch *= (s + T(2 * k + 1)) * (s + T(2 * k + 2));
        Npow /= Nd * Nd;
    }
    return total;
}

// Taylor coefficients of Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p) about
// p = 1/2.  Psi is entire, so the trapezoid rule on a circle is spectrally exact.
const std::vector<double>& psi_taylor() {
    static const std::vector<double> c = [] {
        constexpr int K = 128;
        constexpr int ncoef = 48;
        constexpr double R = 1.0;
        const double pi = std::numbers::pi;
        std::vector<std::complex<double>> f(K);
        for (int j = 0; j < K; ++j) {
            const std::complex<double> w = std::polar(R, 2 * pi * (j + 0.5) / K);
            const std::complex<double> p = 0.5 + w;
            f[j] = std::cos(2 * pi * (p * p - p - 1.0 / 16)) / std::cos(2 * pi * p);
        }
        std::vector<double> out(ncoef);
        for (int n = 0; n < ncoef; ++n) {
            std::complex<double> acc = 0;
            for (int j = 0; j < K; ++j) acc += f[j] * std::polar(1.0, -2 * pi * n * (j + 0.5) / K);
            out[n] = (acc / double(K)).real() / std::pow(R, n);
        }
        return out;
    }();
    return c;
}

std::vector<double> psi_derivatives(double p, int max_order) {
    const auto& c = psi_taylor();
    const double w = p - 0.5;
    std::vector<double> d(max_order + 1, 0.0);
    for (int k = 0; k <= max_order; ++k) {
        double acc = 0;
        // Horner in w over n >= k of c_n n!/(n-k)! w^{n-k}
        for (int n = static_cast<int>(c.size()) - 1; n >= k; --n) {
            double falling = 1;
            for (int j = 0; j < k; ++j) falling *= (n - j);
            acc = acc * w + c[n] * falling;
        }
        d[k] = acc;
    }
    return d;
}

}  // namespace

cplx log_gamma(cplx z) { return log_gamma_impl(z); }
cplxl log_gamma(cplxl z) { return log_gamma_impl(z); }

cplx zeta(cplx s) {
    const cplxl v = zeta_impl(cplxl(s.real(), s.imag()));
    return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}
cplxl zeta(cplxl s) { return zeta_impl(s); }

long double hardy_theta(long double t) {
    return log_gamma_impl(cplxl(0.25L, t / 2)).imag() - t / 2 * std::log(pi_l);
}
double hardy_theta(double t) { return static_cast<double>(hardy_theta(static_cast<long double>(t))); }

std::array<double, 5> riemann_siegel_coefficients(double p) {
    const auto d = psi_derivatives(p, 12);
    const double pi = std::numbers::pi;
    const double pi2 = pi * pi, pi4 = pi2 * pi2, pi6 = pi4 * pi2, pi8 = pi4 * pi4;
    std::array<double, 5> C{};
    C[0] = d[0];
    C[1] = -d[3] / (96 * pi2);
    C[2] = d[2] / (64 * pi2) + d[6] / (18432 * pi4);
    C[3] = -d[1] / (64 * pi2) - d[5] / (3840 * pi4) - d[9] / (5308416 * pi6);
    C[4] = d[0] / (128 * pi2) + 19 * d[4] / (24576 * pi4) + 11 * d[8] / (5898240 * pi6) +
           d[12] / (2038431744 * pi8);
    return C;
}

double hardy_Z(double t) {
    if (t < 50) throw DomainError("hardy_Z: Riemann-Siegel needs t >= 50, use zeta() below that");
    const long double tl = t;
    const long double theta = hardy_theta(tl);
    const long double a = std::sqrt(tl / (2 * pi_l));
    const auto N = static_cast<std::uint64_t>(a);
    long double sum = 0;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const long double ln = std::log(static_cast<long double>(n));
        sum += std::cos(theta - tl * ln) / std::sqrt(static_cast<long double>(n));
    }
    const double p = static_cast<double>(a - N);
    const auto C = riemann_siegel_coefficients(p);
    const double r = std::sqrt(2 * std::numbers::pi / t);  // (t/2pi)^{-1/2}
    double corr = 0, rk = 1;
    for (double c : C) {
        corr += c * rk;
        rk *= r;
    }
    const double sign = (N % 2 == 1) ? 1.0 : -1.0;  // (-1)^{N-1}
    return static_cast<double>(2 * sum) + sign * std::sqrt(r) * corr;
}

cplx zeta_critical_fast(double t) {
    const double Z = hardy_Z(t);
    const long double theta = hardy_theta(static_cast<long double>(t));
    const long double red = std::remainder(theta, 2 * pi_l);
    return std::polar(Z, -static_cast<double>(red));
}

cplx unit_phase(double t, std::uint64_t n) {
    const long double ang = static_cast<long double>(t) * std::log(static_cast<long double>(n));
    const double red = static_cast<double>(std::remainder(ang, 2 * pi_l));
    return {std::cos(red), -std::sin(red)};
}

double prime_zeta(int m) {
    if (m < 2) throw DomainError("prime_zeta: needs m >= 2");
    static std::mutex mu;
    static std::vector<double> cache(64, -1.0);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (m < 64 && cache[m] >= 0) return cache[m];
    }
    // P(m) = sum_n mu(n)/n log zeta(nm)
    long double total = 0;
    for (int n = 1;; ++n) {
        const int x = n * m;
        if (std::ldexp(1.0L, -x) < 1e-22L) break;
        const int mu_n = mobius(static_cast<u64>(n));
        if (mu_n == 0) continue;
        long double lz;
        if (x >= 20) {
            long double s = 0;
            for (int k = 2;; ++k) {
                const long double term = std::pow(static_cast<long double>(k), -x);
                s += term;
                if (term < 1e-24L) break;
            }
            lz = std::log1p(s);
        } else {
            lz = std::log(zeta_impl(cplxl(x, 0)).real());
        }
        total += mu_n * lz / n;
    }
    const double v = static_cast<double>(total);
    std::lock_guard<std::mutex> lock(mu);
    if (m < 64) cache[m] = v;
    return v;
}

double prime_power_tail(int m, std::uint64_t P) {
    long double head = 0;
    const auto primes = primes_up_to(P);
    // smallest terms first
    for (auto it = primes.rbegin(); it != primes.rend(); ++it) head += std::pow(static_cast<long double>(*it), -m);
    return static_cast<double>(static_cast<long double>(prime_zeta(m)) - head);
}

}  // namespace zm
