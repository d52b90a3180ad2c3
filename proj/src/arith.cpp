#include "zetamoments/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "zetamoments/errors.hpp"

namespace zm {

namespace {

using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool miller_rabin(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // these twelve bases are deterministic below 3.3e24
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

// Brent's variant; n is odd, composite, and free of small factors.
u64 pollard_rho(u64 n) {
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        const u64 m = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            }
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void split_large(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (miller_rabin(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

}  // namespace

bool is_prime(u64 n) { return miller_rabin(n); }

Factorization factorize(u64 n) {
    Factorization f;
    f.n = n;
    if (n <= 1) return f;
    auto take = [&](u64 p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) f.factors.push_back({p, e});
    };
    take(2);
    take(3);
    constexpr u64 trial_limit = 1000000;
    for (u64 p = 5; p <= trial_limit && p * p <= n; p += 6) {
        take(p);
        take(p + 2);
    }
    if (n == 1) return f;
    if (miller_rabin(n)) {
        f.factors.push_back({n, 1});
        return f;
    }
    // every remaining prime factor exceeds the trial limit
    std::vector<u64> primes;
    split_large(n, primes);
    std::sort(primes.begin(), primes.end());
    for (std::size_t i = 0; i < primes.size();) {
        std::size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        f.factors.push_back({primes[i], static_cast<int>(j - i)});
        i = j;
    }
    return f;
}

std::vector<u64> divisors(u64 n) {
    std::vector<u64> d{1};
    for (auto [p, e] : factorize(n).factors) {
        std::size_t base = d.size();
        u64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) d.push_back(d[i] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

ShiftSet::ShiftSet(std::initializer_list<cplx> shifts) : shifts_(shifts) { validate(); }

ShiftSet::ShiftSet(std::vector<cplx> shifts) : shifts_(std::move(shifts)) { validate(); }

void ShiftSet::validate() {
    if (shifts_.empty() || shifts_.size() > 3) {
        throw DomainError("ShiftSet: size must be 1, 2 or 3, got " + std::to_string(shifts_.size()));
    }
    for (const auto& a : shifts_) {
        if (!(std::abs(a) <= max_modulus)) {
            throw DomainError("ShiftSet: shift " + to_string() + " outside |a| <= 0.45");
        }
    }
    min_gap_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < shifts_.size(); ++i)
        for (std::size_t j = i + 1; j < shifts_.size(); ++j)
            min_gap_ = std::min(min_gap_, std::abs(shifts_[i] - shifts_[j]));
}

cplx ShiftSet::sum() const {
    cplx s = 0;
    for (const auto& a : shifts_) s += a;
    return s;
}

ShiftSet ShiftSet::negated() const {
    std::vector<cplx> v(shifts_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = -shifts_[i];
    return ShiftSet(std::move(v));
}

void ShiftSet::require_distinct(double tol, const std::string& context) const {
    if (min_gap_ < tol) {
        std::ostringstream os;
        os << context << ": shifts " << to_string() << " have min gap " << min_gap_ << " < " << tol;
        throw DegenerateShiftError(os.str());
    }
}

std::string ShiftSet::to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < shifts_.size(); ++i) {
        if (i) os << ", ";
        os << shifts_[i].real() << (shifts_[i].imag() < 0 ? "" : "+") << shifts_[i].imag() << 'i';
    }
    os << '}';
    return os.str();
}

std::vector<cplx> complete_homogeneous(std::span<const cplx> z, int emax) {
    std::vector<cplx> h(emax + 1, cplx(0));
    h[0] = 1;
    // multiply the generating series by 1/(1 - z_i T) one variable at a time
    for (const auto& zi : z)
        for (int e = 1; e <= emax; ++e) h[e] += zi * h[e - 1];
    return h;
}

cplx sigma_prime_power(std::span<const cplx> X, double log_p, int e) {
    if (e == 0) return 1;
    cplx zs[8];
    const std::size_t k = X.size();
    for (std::size_t i = 0; i < k; ++i) zs[i] = pow_neg(log_p, X[i]);
    return complete_homogeneous(std::span<const cplx>(zs, k), e)[e];
}

cplx sigma_shifted(std::span<const cplx> X, u64 n) {
    cplx v = 1;
    for (auto [p, e] : factorize(n).factors) v *= sigma_prime_power(X, std::log(static_cast<double>(p)), e);
    return v;
}

cplx sigma_shifted(const ShiftSet& X, u64 n) { return sigma_shifted(X.values(), n); }

std::vector<u64> sieve_dk(int k, u64 limit, std::size_t memory_budget) {
    if (k < 1 || k > 6) throw DomainError("sieve_dk: k must be in 1..6");
    if (limit > 100000000ull) throw ResourceError("sieve_dk: limit above 1e8");
    if ((limit + 1) * sizeof(u64) > memory_budget) {
        throw ResourceError("sieve_dk: table of " + std::to_string(limit + 1) + " entries exceeds memory budget");
    }
    std::vector<u64> d(limit + 1, 1);
    d[0] = 0;
    // In-place Dirichlet convolution with the constant 1.  Walking d downward
    // means a[d] still holds the previous pass when it is pushed to its multiples.
    for (int pass = 1; pass < k; ++pass) {
        for (u64 q = limit / 2; q >= 1; --q) {
            const u64 v = d[q];
            for (u64 m = 2 * q; m <= limit; m += q) d[m] += v;
        }
    }
    return d;
}

int mobius(u64 n) {
    int mu = 1;
    for (auto [p, e] : factorize(n).factors) {
        if (e > 1) return 0;
        mu = -mu;
    }
    return mu;
}

u64 euler_phi(u64 n) {
    u64 phi = n;
    for (auto [p, e] : factorize(n).factors) phi = phi / p * (p - 1);
    return phi;
}

i64 ramanujan_sum(u64 q, i64 r) {
    const u64 g = std::gcd(q, static_cast<u64>(r < 0 ? -r : r));
    i64 c = 0;
    for (u64 d : divisors(g)) c += static_cast<i64>(d) * mobius(q / d);
    return c;
}

}  // namespace zm
