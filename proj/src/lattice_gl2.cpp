#include "bcsys/lattice_gl2.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bcsys/arith.hpp"
#include "bcsys/kernels.hpp"

namespace bcsys {

std::vector<HermiteForm> enumerate_hnf(std::int64_t n)
{
    if (n < 1)
        throw std::invalid_argument("determinant must be positive");
    std::vector<HermiteForm> out;
    for (std::int64_t d : divisors(n))
        for (std::int64_t b = 0; b < d; ++b)
            out.push_back({n / d, b, d});
    return out;
}

std::int64_t hnf_count(std::int64_t n)
{
    if (n < 1)
        throw std::invalid_argument("determinant must be positive");
    std::int64_t count = 0;
    for (std::int64_t a = 1; a * a <= n; ++a) {
        if (n % a != 0)
            continue;
        std::int64_t const d = n / a;
        count += d;  // b in [0, d)
        if (d != a)
            count += a;  // the pair (d, a)
    }
    return count;
}

std::int64_t det_phi(HermiteForm const & h)
{
    return h.determinant();
}

HermiteForm reduce_to_hnf(IntMatrix2 const & m)
{
    std::int64_t p = m[0][0], q = m[0][1], r = m[1][0], s = m[1][1];
    std::int64_t const det = p * s - q * r;
    if (det <= 0)
        throw std::invalid_argument("reduce_to_hnf expects a positive determinant");
    // Euclid on the first column with row operations.
    while (r != 0) {
        std::int64_t const k = p / r;
        p -= k * r;
        q -= k * s;
        std::swap(p, r);
        std::swap(q, s);
    }
    if (p < 0) {
        p = -p;
        q = -q;
    }
    if (s < 0)
        s = -s;
    q = mod_floor(q, s);
    return HermiteForm{p, q, s};
}

double gl2_tail_bound(double beta, std::int64_t cutoff)
{
    if (!(beta > 2.0))
        throw std::domain_error("beta must exceed 2");
    // sum_{n <= x} sigma_1(n) <= (pi^2/12) x^2 + x (ln x + 1) / 2, then partial summation.
    double const x = static_cast<double>(cutoff);
    double const quad = std::numbers::pi * std::numbers::pi / 12.0 * std::pow(x, 2.0 - beta) / (beta - 2.0);
    double const lin = 0.5 * std::pow(x, 1.0 - beta) / (beta - 1.0) * (std::log(x) + 1.0 + 1.0 / (beta - 1.0));
    return beta * (quad + lin);
}

SeriesValue gl2_partition(double beta, std::int64_t cutoff, CoefficientSource source)
{
    if (!(beta > 2.0))
        throw std::domain_error("beta must exceed 2 (sum sigma_1(n) n^{-beta} diverges for beta <= 2)");
    if (cutoff < 1)
        throw std::invalid_argument("cutoff must be at least 1");
    auto const coeff = kernels::tabulate<double>(cutoff, [source](std::int64_t n) {
        return static_cast<double>(source == CoefficientSource::sigma_formula ? divisor_sigma1(n) : hnf_count(n));
    });
    double const value = kernels::dirichlet_sum<double>(
        cutoff, beta, [&](std::int64_t n) { return coeff[static_cast<std::size_t>(n - 1)]; });
    return SeriesValue{value, gl2_tail_bound(beta, cutoff), cutoff, beta};
}

}  // namespace bcsys
