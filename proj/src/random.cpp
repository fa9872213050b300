#include "bcsys/random.hpp"

#include <numeric>

namespace bcsys {

HeckeElement random_hecke(std::mt19937_64 & rng, RandomHeckeSpec const & spec)
{
    std::uniform_int_distribution<std::int64_t> part(1, spec.max_height);
    std::uniform_int_distribution<int> terms(1, spec.max_terms);
    std::uniform_int_distribution<std::int64_t> factor(1, spec.max_level_factor);
    std::uniform_int_distribution<int> small(-spec.coeff_range, spec.coeff_range);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    int const count = terms(rng);
    std::vector<std::pair<std::int64_t, std::int64_t>> gs;
    std::int64_t level = 1;
    for (int i = 0; i < count; ++i) {
        std::int64_t a = part(rng), b = part(rng);
        std::int64_t const g = std::gcd(a, b);
        gs.emplace_back(a / g, b / g);
        level = std::lcm(level, b / g);
    }
    level *= factor(rng);

    std::vector<HeckeEntry> entries;
    for (auto const & [a, b] : gs) {
        std::uniform_int_distribution<std::int64_t> residue(0, level / b - 1);
        Complex value;
        do {
            value = spec.real_coefficients ? Complex(unit(rng), unit(rng)) : Complex(small(rng), small(rng));
        } while (value == Complex{});
        entries.push_back({PositiveRational(a, b), b * residue(rng), value});
    }
    return HeckeElement::from_entries(level, entries);
}

std::pair<HeckeElement, HeckeElement> random_overlapping_pair(std::mt19937_64 & rng, RandomHeckeSpec const & spec)
{
    auto const x = random_hecke(rng, spec);
    auto const y = random_hecke(rng, spec);
    auto const z = random_hecke(rng, spec);
    return {x + y, adjoint(x) + z};
}

}  // namespace bcsys
