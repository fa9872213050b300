#ifndef BCSYS_DIRICHLET_HPP
#define BCSYS_DIRICHLET_HPP

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "bcsys/arith.hpp"
#include "bcsys/spectral.hpp"

namespace bcsys {

/* A Dirichlet character mod m. Values on units are stored exactly as root
 * indices k, meaning exp(2 pi i k / exponent) where exponent is the exponent
 * of (Z/m)^x; non-units map to 0. */
class DirichletCharacter
{
  public:
    /// root_index[r] for r in [0, m), -1 on non-units.
    DirichletCharacter(std::int64_t modulus, std::int64_t exponent, std::vector<std::int64_t> root_index);

    std::int64_t modulus() const { return modulus_; }
    std::int64_t exponent() const { return exponent_; }
    std::int64_t conductor() const { return conductor_; }
    /// Multiplicative order of the character.
    std::int64_t order() const { return order_; }
    bool is_trivial() const { return order_ == 1; }

    /// Exact root index of chi(n), or nullopt when gcd(n, m) > 1.
    std::optional<std::int64_t> root_index(std::int64_t n) const;
    Complex operator()(std::int64_t n) const;

    friend bool operator==(DirichletCharacter const & a, DirichletCharacter const & b);

  private:
    std::int64_t modulus_;
    std::int64_t exponent_;
    std::vector<std::int64_t> index_;
    std::int64_t conductor_ = 1;
    std::int64_t order_ = 1;
};

/// All phi(m) characters mod m; the trivial character comes first.
std::vector<DirichletCharacter> characters_mod(std::int64_t m);
/// n -> (d|n) as a character mod |d|.
DirichletCharacter kronecker_character(FundamentalDiscriminant d);
/// Smallest module of definition.
std::int64_t conductor(DirichletCharacter const & chi);

/// sum_{n <= cutoff} chi(n) n^{-beta}. beta > 1, or beta > 0 for nontrivial chi.
SeriesValue dirichlet_L(DirichletCharacter const & chi, double beta, std::int64_t cutoff);
/// Trace(a_chi e^{-beta H}) on l^2({1..cutoff}), a_chi = diag(chi(n)).
Complex twisted_trace(DirichletCharacter const & chi, double beta, std::int64_t cutoff);

/// {modulus, conductor, order, values: [[unit, root_index]]}, root index
/// relative to the character's order.
nlohmann::json to_json(DirichletCharacter const & chi);

}  // namespace bcsys

#endif
