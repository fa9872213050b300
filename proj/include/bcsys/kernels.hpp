#ifndef BCSYS_KERNELS_HPP
#define BCSYS_KERNELS_HPP

// Data-parallel kernels for truncated Dirichlet series and traces.
//
// Parallel kernels split [1, cutoff] into fixed chunks of kChunk terms. Each
// chunk is summed in ascending order and the chunk partials are then added
// in chunk order, so the result does not depend on the thread count or the
// schedule. The serial:: versions are the plain ascending loops kept as the
// reference the tests compare against.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace bcsys::kernels {

inline constexpr std::int64_t kChunk = 4096;

inline std::int64_t chunk_count(std::int64_t cutoff)
{
    return cutoff <= 0 ? 0 : (cutoff + kChunk - 1) / kChunk;
}

/// sum_{n <= cutoff} coeff(n) * n^{-beta}, coeff returning double or complex.
template <class T, class Coeff>
T dirichlet_sum(std::int64_t cutoff, double beta, Coeff && coeff)
{
    std::int64_t const chunks = chunk_count(cutoff);
    std::vector<T> partial(static_cast<std::size_t>(chunks), T{});
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
        std::int64_t const lo = c * kChunk + 1;
        std::int64_t const hi = std::min(cutoff, lo + kChunk - 1);
        T acc{};
        for (std::int64_t n = lo; n <= hi; ++n)
            acc += coeff(n) * std::pow(static_cast<double>(n), -beta);
        partial[static_cast<std::size_t>(c)] = acc;
    }
    T total{};
    for (auto const & p : partial)
        total += p;
    return total;
}

/// Trace of diag(a) * exp(-beta H) with H = diag(log n), computed through the
/// Hamiltonian spectrum rather than n^{-beta}.
template <class T>
T diagonal_trace(std::vector<T> const & diag, double beta)
{
    std::int64_t const cutoff = static_cast<std::int64_t>(diag.size());
    std::int64_t const chunks = chunk_count(cutoff);
    std::vector<T> partial(static_cast<std::size_t>(chunks), T{});
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < chunks; ++c) {
        std::int64_t const lo = c * kChunk + 1;
        std::int64_t const hi = std::min(cutoff, lo + kChunk - 1);
        T acc{};
        for (std::int64_t n = lo; n <= hi; ++n) {
            double const energy = std::log(static_cast<double>(n));
            acc += diag[static_cast<std::size_t>(n - 1)] * std::exp(-beta * energy);
        }
        partial[static_cast<std::size_t>(c)] = acc;
    }
    T total{};
    for (auto const & p : partial)
        total += p;
    return total;
}

namespace serial {

template <class T, class Coeff>
T dirichlet_sum(std::int64_t cutoff, double beta, Coeff && coeff)
{
    T acc{};
    for (std::int64_t n = 1; n <= cutoff; ++n)
        acc += coeff(n) * std::pow(static_cast<double>(n), -beta);
    return acc;
}

template <class T>
T diagonal_trace(std::vector<T> const & diag, double beta)
{
    T acc{};
    for (std::size_t i = 0; i < diag.size(); ++i)
        acc += diag[i] * std::exp(-beta * std::log(static_cast<double>(i + 1)));
    return acc;
}

}  // namespace serial

/// Fills table[n-1] = f(n) for n in [1, cutoff] in parallel.
template <class T, class F>
std::vector<T> tabulate(std::int64_t cutoff, F && f)
{
    std::vector<T> table(static_cast<std::size_t>(cutoff > 0 ? cutoff : 0));
#pragma omp parallel for schedule(static)
    for (std::int64_t n = 1; n <= cutoff; ++n)
        table[static_cast<std::size_t>(n - 1)] = f(n);
    return table;
}

}  // namespace bcsys::kernels

#endif
