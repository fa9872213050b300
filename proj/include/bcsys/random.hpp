#ifndef BCSYS_RANDOM_HPP
#define BCSYS_RANDOM_HPP

// Seeded generators of random Hecke elements for property suites and the CLI.

#include <cstdint>
#include <random>
#include <utility>

#include "bcsys/groupoid.hpp"

namespace bcsys {

struct RandomHeckeSpec
{
    /// Numerators and denominators of g are drawn from [1, max_height].
    std::int64_t max_height = 4;
    int max_terms = 4;
    /// The level is lcm(denominators) times a factor from [1, max_level_factor].
    std::int64_t max_level_factor = 6;
    /// Gaussian-integer coefficients in [-coeff_range, coeff_range]^2, so
    /// products stay exact in double precision.
    int coeff_range = 3;
    /// Use uniformly random real coefficients in the unit disc instead.
    bool real_coefficients = false;
};

HeckeElement random_hecke(std::mt19937_64 & rng, RandomHeckeSpec const & spec = {});

/// (x + y, x^* + z) for independent random x, y, z: products of the pair
/// reach the unit g = 1, so state values on them are not trivially zero.
std::pair<HeckeElement, HeckeElement> random_overlapping_pair(std::mt19937_64 & rng, RandomHeckeSpec const & spec = {});

}  // namespace bcsys

#endif
