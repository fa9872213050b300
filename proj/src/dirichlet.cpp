#include "bcsys/dirichlet.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "bcsys/kernels.hpp"

namespace bcsys {

namespace {

std::int64_t pow_mod(std::int64_t base, std::int64_t e, std::int64_t m)
{
    std::int64_t r = 1 % m;
    base = mod_floor(base, m);
    while (e > 0) {
        if (e & 1)
            r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    return r;
}

struct CyclicFactor
{
    std::int64_t generator;  // mod m
    std::int64_t order;
};

/// x = v mod q and x = 1 mod m/q (q | m, gcd(q, m/q) = 1).
std::int64_t lift(std::int64_t v, std::int64_t q, std::int64_t m)
{
    std::int64_t const rest = m / q;
    for (std::int64_t x = v; x < m; x += q)
        if (x % rest == 1 % rest)
            return x;
    throw std::logic_error("CRT lift failed");
}

std::vector<CyclicFactor> unit_group_factors(std::int64_t m)
{
    std::vector<CyclicFactor> out;
    for (auto const & [p, k] : factorize(m)) {
        std::int64_t q = 1;
        for (int i = 0; i < k; ++i)
            q *= p;
        if (p == 2) {
            if (k == 2)
                out.push_back({lift(3, q, m), 2});
            if (k >= 3) {
                out.push_back({lift(q - 1, q, m), 2});
                out.push_back({lift(5, q, m), q / 4});
            }
            continue;
        }
        std::int64_t const phi = q / p * (p - 1);
        auto const phi_primes = factorize(phi);
        for (std::int64_t g = 2; g < q; ++g) {
            if (g % p == 0)
                continue;
            bool primitive = true;
            for (auto const & [r, e] : phi_primes)
                if (pow_mod(g, phi / r, q) == 1) {
                    primitive = false;
                    break;
                }
            if (primitive) {
                out.push_back({lift(g, q, m), phi});
                break;
            }
        }
    }
    return out;
}

std::int64_t group_exponent(std::vector<CyclicFactor> const & factors)
{
    std::int64_t n = 1;
    for (auto const & f : factors)
        n = std::lcm(n, f.order);
    return n;
}

}  // namespace

DirichletCharacter::DirichletCharacter(std::int64_t modulus, std::int64_t exponent, std::vector<std::int64_t> root_index)
    : modulus_(modulus), exponent_(exponent), index_(std::move(root_index))
{
    if (modulus_ < 1 || exponent_ < 1 || static_cast<std::int64_t>(index_.size()) != modulus_)
        throw std::invalid_argument("malformed Dirichlet character table");
    std::int64_t g = exponent_;
    for (std::int64_t r = 0; r < modulus_; ++r) {
        bool const unit = std::gcd(r, modulus_) == 1;
        if (unit != (index_[r] >= 0))
            throw std::invalid_argument("character table must be defined exactly on units");
        if (unit) {
            index_[r] = mod_floor(index_[r], exponent_);
            g = std::gcd(g, index_[r]);
        }
    }
    if (index_[1 % modulus_] != 0)
        throw std::invalid_argument("chi(1) must be 1");
    order_ = exponent_ / g;

    for (std::int64_t d : divisors(modulus_)) {
        bool defined = true;
        for (std::int64_t u = 1; u < modulus_ && defined; u += d)
            if (std::gcd(u, modulus_) == 1 && index_[u] != 0)
                defined = false;
        if (defined) {
            conductor_ = d;
            break;
        }
    }
}

std::optional<std::int64_t> DirichletCharacter::root_index(std::int64_t n) const
{
    std::int64_t const k = index_[static_cast<std::size_t>(mod_floor(n, modulus_))];
    if (k < 0)
        return std::nullopt;
    return k;
}

Complex DirichletCharacter::operator()(std::int64_t n) const
{
    auto const k = root_index(n);
    if (!k)
        return Complex{};
    if (*k == 0)
        return 1.0;
    if (2 * *k == exponent_)
        return -1.0;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(*k) / static_cast<double>(exponent_));
}

bool operator==(DirichletCharacter const & a, DirichletCharacter const & b)
{
    if (a.modulus_ != b.modulus_)
        return false;
    for (std::int64_t r = 0; r < a.modulus_; ++r) {
        std::int64_t const x = a.index_[r], y = b.index_[r];
        if ((x < 0) != (y < 0))
            return false;
        if (x >= 0 && x * b.exponent_ != y * a.exponent_)
            return false;
    }
    return true;
}

std::vector<DirichletCharacter> characters_mod(std::int64_t m)
{
    if (m < 1)
        throw std::invalid_argument("modulus must be at least 1");
    auto const factors = unit_group_factors(m);
    std::int64_t const exponent = group_exponent(factors);

    // Discrete logarithms of every unit in terms of the cyclic generators.
    std::vector<std::vector<std::int64_t>> logs(static_cast<std::size_t>(m));
    std::vector<std::int64_t> e(factors.size(), 0);
    for (;;) {
        std::int64_t u = 1 % m;
        for (std::size_t i = 0; i < factors.size(); ++i)
            u = mul_mod(u, pow_mod(factors[i].generator, e[i], m), m);
        logs[static_cast<std::size_t>(u)] = e;
        std::size_t i = 0;
        while (i < factors.size() && ++e[i] == factors[i].order)
            e[i++] = 0;
        if (i == factors.size())
            break;
    }

    std::vector<DirichletCharacter> out;
    std::vector<std::int64_t> c(factors.size(), 0);
    for (;;) {
        std::vector<std::int64_t> table(static_cast<std::size_t>(m), -1);
        for (std::int64_t r = 0; r < m; ++r) {
            if (std::gcd(r, m) != 1)
                continue;
            std::int64_t k = 0;
            auto const & l = logs[static_cast<std::size_t>(r)];
            for (std::size_t i = 0; i < factors.size(); ++i)
                k = mod_floor(k + c[i] * l[i] % factors[i].order * (exponent / factors[i].order), exponent);
            table[static_cast<std::size_t>(r)] = k;
        }
        out.emplace_back(m, exponent, std::move(table));
        std::size_t i = 0;
        while (i < factors.size() && ++c[i] == factors[i].order)
            c[i++] = 0;
        if (i == factors.size())
            break;
    }
    return out;
}

DirichletCharacter kronecker_character(FundamentalDiscriminant d)
{
    std::int64_t const m = std::abs(d.value());
    std::int64_t const exponent = group_exponent(unit_group_factors(m));
    std::vector<std::int64_t> table(static_cast<std::size_t>(m), -1);
    for (std::int64_t r = 1; r < m; ++r) {
        if (std::gcd(r, m) != 1)
            continue;
        table[static_cast<std::size_t>(r)] = kronecker_symbol(d, r) == 1 ? 0 : exponent / 2;
    }
    return DirichletCharacter(m, exponent, std::move(table));
}

std::int64_t conductor(DirichletCharacter const & chi)
{
    return chi.conductor();
}

SeriesValue dirichlet_L(DirichletCharacter const & chi, double beta, std::int64_t cutoff)
{
    if (!(beta > 0.0))
        throw std::domain_error("beta must be positive for Dirichlet L-series");
    if (chi.is_trivial() && !(beta > 1.0))
        throw std::domain_error("beta must exceed 1 for the trivial character");
    if (cutoff < 1)
        throw std::invalid_argument("cutoff must be at least 1");

    std::int64_t const m = chi.modulus();
    std::vector<Complex> period(static_cast<std::size_t>(m));
    for (std::int64_t r = 0; r < m; ++r)
        period[static_cast<std::size_t>(r)] = chi(r);
    Complex const value = kernels::dirichlet_sum<Complex>(
        cutoff, beta, [&](std::int64_t n) { return period[static_cast<std::size_t>(n % m)]; });

    double const x = static_cast<double>(cutoff);
    double tail = beta > 1.0 ? std::pow(x, 1.0 - beta) / (beta - 1.0) : INFINITY;
    if (!chi.is_trivial()) {
        // Partial sums over a period vanish, so |sum_{A < n <= B} chi(n)| <= 2 max_N |S(N)|.
        double peak = 0.0;
        Complex running{};
        for (std::int64_t r = 1; r <= m; ++r) {
            running += period[static_cast<std::size_t>(r % m)];
            peak = std::max(peak, std::abs(running));
        }
        tail = std::min(tail, 2.0 * peak * std::pow(x, -beta));
    }
    return SeriesValue{value, tail, cutoff, beta};
}

Complex twisted_trace(DirichletCharacter const & chi, double beta, std::int64_t cutoff)
{
    if (cutoff < 1)
        throw std::invalid_argument("cutoff must be at least 1");
    auto const diag = kernels::tabulate<Complex>(cutoff, [&](std::int64_t n) { return chi(n); });
    return kernels::diagonal_trace(diag, beta);
}

nlohmann::json to_json(DirichletCharacter const & chi)
{
    nlohmann::json values = nlohmann::json::array();
    for (std::int64_t r = 0; r < chi.modulus(); ++r) {
        auto const k = chi.root_index(r);
        if (k)
            values.push_back({r, *k * chi.order() / chi.exponent()});
    }
    return {{"modulus", chi.modulus()}, {"conductor", chi.conductor()}, {"order", chi.order()}, {"values", values}};
}

}  // namespace bcsys
