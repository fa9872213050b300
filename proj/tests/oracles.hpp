#ifndef BCSYS_TESTS_ORACLES_HPP
#define BCSYS_TESTS_ORACLES_HPP

// Slow, independent reference computations used by the unit and acceptance
// suites. Nothing here calls the library routine it is meant to check.

#include <cmath>
#include <array>
#include <complex>
#include <functional>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "bcsys/envelope.hpp"
#include "bcsys/groupoid.hpp"

namespace oracle {

using bcsys::Complex;
using bcsys::HeckeElement;
using bcsys::PositiveRational;

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

/// f(g, rho) for an integer rho >= 0, read straight from the stored entries.
inline Complex eval(HeckeElement const & f, PositiveRational const & g, std::int64_t rho)
{
    for (auto const & e : f.entries())
        if (e.g == g && floor_mod(rho, f.level()) == e.residue)
            return e.value;
    return {};
}

/// (f1 * f2)(g, rho) = sum_h f1(g/h, h rho) f2(h, rho) over h in the support of f2.
inline Complex convolution(HeckeElement const & f1, HeckeElement const & f2, PositiveRational const & g,
                           std::int64_t rho)
{
    Complex acc{};
    for (auto const & h : f2.group_support()) {
        std::int64_t const den = h.den64();
        if (rho % den != 0)
            continue;
        std::int64_t const h_rho = rho / den * h.num64();
        acc += eval(f1, g / h, h_rho) * eval(f2, h, rho);
    }
    return acc;
}

/// conj f(g^-1, g rho).
inline Complex adjoint(HeckeElement const & f, PositiveRational const & g, std::int64_t rho)
{
    if (rho % g.den64() != 0)
        return {};
    return std::conj(eval(f, g.inverse(), rho / g.den64() * g.num64()));
}

/// Divisors by trial division up to sqrt(n).
inline std::vector<std::int64_t> divisors(std::int64_t n)
{
    std::vector<std::int64_t> low, high;
    for (std::int64_t d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            low.push_back(d);
            if (d * d != n)
                high.push_back(n / d);
        }
    low.insert(low.end(), high.rbegin(), high.rend());
    return low;
}

inline std::int64_t sigma1(std::int64_t n)
{
    std::int64_t s = 0;
    for (auto d : divisors(n))
        s += d;
    return s;
}

inline std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t m)
{
    std::int64_t r = 1 % m;
    b = floor_mod(b, m);
    while (e > 0) {
        if (e & 1)
            r = static_cast<std::int64_t>(static_cast<__int128>(r) * b % m);
        b = static_cast<std::int64_t>(static_cast<__int128>(b) * b % m);
        e >>= 1;
    }
    return r;
}

/// Quadratic character of a fundamental discriminant d via Euler's criterion
/// at odd primes and the mod-8 rule at 2, extended multiplicatively.
inline int kronecker(std::int64_t d, std::int64_t n)
{
    int result = 1;
    for (std::int64_t p = 2; p * p <= n || n > 1; ++p) {
        if (p * p > n)
            p = n;
        while (n % p == 0) {
            n /= p;
            int chi;
            if (p == 2) {
                std::int64_t const r = floor_mod(d, 8);
                chi = (d % 2 == 0) ? 0 : (r == 1 || r == 7) ? 1 : -1;
            } else if (d % p == 0) {
                chi = 0;
            } else {
                chi = pow_mod(d, (p - 1) / 2, p) == 1 ? 1 : -1;
            }
            result *= chi;
        }
    }
    return result;
}

/// x^2 = a mod p has a solution (brute force).
inline bool is_square_mod(std::int64_t a, std::int64_t p)
{
    for (std::int64_t x = 0; x < p; ++x)
        if (floor_mod(x * x - a, p) == 0)
            return true;
    return false;
}

/// Number of integral ideals of norm n as the coefficient of zeta * L(chi_d).
inline std::int64_t ideal_count(std::int64_t d, std::int64_t n)
{
    std::int64_t s = 0;
    for (auto e : divisors(n))
        s += kronecker(d, e);
    return s;
}

/// sum_{n <= cutoff} n^{-s}, plain ascending loop.
inline double zeta_partial(double s, std::int64_t cutoff)
{
    double acc = 0.0;
    for (std::int64_t n = 1; n <= cutoff; ++n)
        acc += std::pow(static_cast<double>(n), -s);
    return acc;
}

/// L(s, chi_d) summed by periods in pairs of terms; the tail is below cutoff^{-s} * |d|.
inline double l_partial(std::int64_t d, double s, std::int64_t cutoff)
{
    double acc = 0.0;
    for (std::int64_t n = 1; n <= cutoff; ++n)
        if (int const c = kronecker(d, n); c != 0)
            acc += c * std::pow(static_cast<double>(n), -s);
    return acc;
}

/// Catalan's constant from the alternating series sum (-1)^k / (2k+1)^2,
/// averaging two consecutive partial sums (error below 1/terms^3).
inline double catalan(std::int64_t terms = 2'000'000)
{
    double s = 0.0, prev = 0.0;
    for (std::int64_t k = terms - 1; k >= 0; --k) {
        double const t = 1.0 / (static_cast<double>(2 * k + 1) * static_cast<double>(2 * k + 1));
        s += (k % 2 == 0) ? t : -t;
    }
    // Tail estimate: the next term alternates, so half of it corrects the truncation.
    double const next = 1.0 / (static_cast<double>(2 * terms + 1) * static_cast<double>(2 * terms + 1));
    prev = (terms % 2 == 0) ? next : -next;
    return s + 0.5 * prev;
}

/* Number of O_F-submodules of index n in O_F^2 = Z^4, for the quadratic
 * order with omega^2 = t omega + c. Enumerates every Z-sublattice of index n
 * by its row Hermite normal form and keeps those stable under omega. */
inline std::int64_t submodule_count(std::int64_t t, std::int64_t c, std::int64_t n)
{
    using Vec = std::array<std::int64_t, 4>;
    auto times_omega = [&](Vec const & v) {
        // omega (x + y omega) = c y + (x + t y) omega, on both copies.
        return Vec{c * v[1], v[0] + t * v[1], c * v[3], v[2] + t * v[3]};
    };
    std::int64_t count = 0;
    std::array<std::int64_t, 4> diag{};
    std::array<Vec, 4> rows{};
    auto contains = [&](Vec v) {
        for (int i = 0; i < 4; ++i) {
            if (floor_mod(v[i], rows[i][i]) != 0)
                return false;
            std::int64_t const x = v[i] / rows[i][i];
            for (int j = i; j < 4; ++j)
                v[j] -= x * rows[i][j];
        }
        return true;
    };
    // Free entries rows[i][j], i < j, range over [0, diag[j]).
    std::function<void(int, int)> fill = [&](int i, int j) {
        if (i == 4) {
            for (auto const & r : rows)
                if (!contains(times_omega(r)))
                    return;
            ++count;
            return;
        }
        if (j == 4) {
            fill(i + 1, i + 2);
            return;
        }
        for (std::int64_t v = 0; v < diag[j]; ++v) {
            rows[i][j] = v;
            fill(i, j + 1);
        }
        rows[i][j] = 0;
    };
    for (auto d0 : divisors(n))
        for (auto d1 : divisors(n / d0))
            for (auto d2 : divisors(n / d0 / d1)) {
                diag = {d0, d1, d2, n / d0 / d1 / d2};
                rows = {};
                for (int i = 0; i < 4; ++i)
                    rows[i][i] = diag[i];
                fill(0, 1);
            }
    return count;
}

/// psi(m e_i, m e_j) = mu psi(e_i, e_j) over all basis pairs, with mu read
/// from the first pair where psi(e_i, e_j) != 0.
inline std::optional<bcsys::Rational> basis_pair_oracle(bcsys::SymplecticSpace const & space, bcsys::RationalMatrix const & m)
{
    std::size_t const n = space.dimension();
    auto column = [&](std::size_t j) {
        std::vector<bcsys::Rational> v(n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = m(i, j);
        return v;
    };
    auto basis = [&](std::size_t j) {
        std::vector<bcsys::Rational> v(n);
        v[j] = 1;
        return v;
    };
    std::optional<bcsys::Rational> mu;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            bcsys::Rational const base = space.pairing(basis(i), basis(j));
            bcsys::Rational const image = space.pairing(column(i), column(j));
            if (base != 0 && !mu)
                mu = image / base;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (space.pairing(column(i), column(j)) != *mu * space.pairing(basis(i), basis(j)))
                return std::nullopt;
    return mu;
}

}  // namespace oracle

#endif
