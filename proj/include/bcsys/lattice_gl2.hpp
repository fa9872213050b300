#ifndef BCSYS_LATTICE_GL2_HPP
#define BCSYS_LATTICE_GL2_HPP

// Left GL2(Z)-cosets of integer matrices of determinant n, in Hermite normal
// form, and the modular partition function sum sigma_1(n) n^{-beta}.

#include <array>
#include <cstdint>
#include <vector>

#include "bcsys/spectral.hpp"

namespace bcsys {

/* [[a, b], [0, d]] with a, d >= 1 and 0 <= b < d. */
struct HermiteForm
{
    std::int64_t a = 1, b = 0, d = 1;

    std::int64_t determinant() const { return a * d; }
    friend auto operator<=>(HermiteForm const &, HermiteForm const &) = default;
};

using IntMatrix2 = std::array<std::array<std::int64_t, 2>, 2>;

/// All Hermite forms of determinant n, ordered by (d, b).
std::vector<HermiteForm> enumerate_hnf(std::int64_t n);
/// Number of Hermite forms of determinant n, counted from the (a, d, b) ranges.
std::int64_t hnf_count(std::int64_t n);
/// det(phi(g)) for the coset: a*d.
std::int64_t det_phi(HermiteForm const & h);
/// Row-reduces m (det > 0) by left multiplication with GL2(Z).
HermiteForm reduce_to_hnf(IntMatrix2 const & m);

enum class CoefficientSource
{
    sigma_formula,
    hnf_enumeration,
};

/// Rigorous bound on sum_{n > cutoff} sigma_1(n) n^{-beta}, beta > 2.
double gl2_tail_bound(double beta, std::int64_t cutoff);
/// sum_{n <= cutoff} c(n) n^{-beta}, c from the chosen source. beta > 2.
SeriesValue gl2_partition(double beta, std::int64_t cutoff, CoefficientSource source = CoefficientSource::sigma_formula);

}  // namespace bcsys

#endif
