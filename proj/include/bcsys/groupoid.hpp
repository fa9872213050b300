#ifndef BCSYS_GROUPOID_HPP
#define BCSYS_GROUPOID_HPP

// The Bost-Connes groupoid over Q at finite level and its Hecke algebra.
//
// A groupoid element is a pair (g, rho) with g in Q_+^x and rho in Zhat such
// that g*rho is again in Zhat, i.e. den(g) divides rho. A HeckeElement is a
// finitely supported function on this groupoid that depends on rho only
// through rho mod level. It is stored with one global level and kept in
// canonical form: the level is the smallest modulus through which the
// function factors, and only nonzero coefficients are stored. Two
// HeckeElements are equal as functions iff they compare equal.

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "bcsys/arith.hpp"

namespace bcsys {

using Complex = std::complex<double>;

/* (g, rho mod M) together with the sign component of the {+-1} presentation. */
struct GroupoidElement
{
    PositiveRational g;
    ResidueClass constraint;
    int sign = 1;

    /// den(g) | modulus and den(g) | residue.
    bool is_valid() const;
};

struct HeckeKey
{
    PositiveRational g;
    std::int64_t residue = 0;

    friend bool operator==(HeckeKey const &, HeckeKey const &) = default;
    friend auto operator<=>(HeckeKey const & a, HeckeKey const & b)
    {
        if (auto c = a.g <=> b.g; c != 0)
            return c;
        return a.residue <=> b.residue;
    }
};

struct HeckeEntry
{
    PositiveRational g;
    std::int64_t residue = 0;
    Complex value;
};

class HeckeElement
{
  public:
    using Support = std::map<HeckeKey, Complex>;

    /// The zero element (empty support, level 1).
    HeckeElement() = default;

    /// Builds from entries at the given level. Entries with the same key are
    /// added. Throws std::invalid_argument when a key violates den(g) | level
    /// or den(g) | residue.
    static HeckeElement from_entries(std::int64_t level, std::vector<HeckeEntry> const & entries);
    /// value * indicator of {(g, rho) : rho in cls}.
    static HeckeElement indicator(PositiveRational const & g, ResidueClass cls, Complex value = 1.0);
    /// Indicator of (1, all rho): the unit of the algebra.
    static HeckeElement identity();

    std::int64_t level() const { return level_; }
    Support const & support() const { return support_; }
    bool is_zero() const { return support_.empty(); }

    /// f(g, rho) for rho known modulo rho_class.modulus; level() must divide it.
    Complex at(PositiveRational const & g, ResidueClass rho_class) const;
    /// Distinct g in the support, ascending.
    std::vector<PositiveRational> group_support() const;
    /// Largest max(num, den) over the support (1 for the zero element).
    std::int64_t height() const;
    /// sup |f|.
    double sup_norm() const;
    /// sum over g of sup_rho |f(g, rho)|.
    double l1_bound() const;

    /// Entries re-expressed at a multiple of level() (not canonical).
    Support expanded(std::int64_t new_level) const;
    std::vector<HeckeEntry> entries() const;

    friend bool operator==(HeckeElement const &, HeckeElement const &) = default;

    friend HeckeElement operator+(HeckeElement const & a, HeckeElement const & b);
    friend HeckeElement operator*(Complex s, HeckeElement const & f);

  private:
    HeckeElement(std::int64_t level, Support support);
    /// Drops zeros and lowers the level as far as the function allows.
    static HeckeElement canonical(std::int64_t level, Support support);

    std::int64_t level_ = 1;
    Support support_;
};

/// Pointwise comparison of coefficients at the common level, within tol.
bool approx_equal(HeckeElement const & a, HeckeElement const & b, double tol);
/// max |a - b| over the groupoid.
double max_abs_difference(HeckeElement const & a, HeckeElement const & b);

/* (n, s): n in Sym_f = N^x acting by rho -> rho*n, s the archimedean sign. */
struct SymmetryElement
{
    std::int64_t n = 1;
    int sign = 1;
};

/// (f1 * f2)(g, rho) = sum_h f1(g h^-1, h rho) f2(h, rho).
HeckeElement convolve(HeckeElement const & f1, HeckeElement const & f2);
/// f*(g, rho) = conj f(g^-1, g rho).
HeckeElement adjoint(HeckeElement const & f);
/// sigma_t: coefficient at g scaled by g^{it}.
HeckeElement time_evolve(HeckeElement const & f, double t);
/// sigma_{i beta}: coefficient at g scaled by g^{-beta}.
HeckeElement analytic_evolve(HeckeElement const & f, double beta);
/// theta_s(f)(g, rho) = f(g, rho * n). The sign acts trivially once the
/// {+-1} component is quotiented away, which is the case for HeckeElements.
HeckeElement symmetry_act(HeckeElement const & f, SymmetryElement s);
/// mu_n = indicator of (1/n, rho = 0 mod n). It is a co-isometry
/// (mu_n mu_n^* = 1) and mu_n f mu_n^* = theta_{(n,n)}(f).
HeckeElement inner_mu(std::int64_t n, std::int64_t level = 1);

/* Orbits of the finite unit space (Z/M) x {+-1} under the moves
 * (rho, z) -> (g rho, sign(g) z) with g = +-a/b, a, b <= bound. */
struct UnitPoint
{
    std::int64_t residue = 0;
    int sign = 1;
    friend auto operator<=>(UnitPoint const &, UnitPoint const &) = default;
};

using OrbitPartition = std::vector<std::vector<UnitPoint>>;

OrbitPartition coarse_orbits(std::int64_t level, std::int64_t bound);

/* Finite-fragment comparison of the classical groupoid with the {+-1}^2
 * quotient of the principal groupoid of Q^x acting on Zhat x {+-1}. */
struct IsomorphismReport
{
    std::int64_t level = 0;
    std::int64_t bound = 0;
    std::int64_t classical_elements = 0;
    std::int64_t principal_elements = 0;
    std::int64_t quotient_elements = 0;
    std::int64_t classical_composable = 0;
    std::int64_t quotient_composable = 0;
    std::vector<std::string> mismatches;

    bool ok() const { return mismatches.empty(); }
};

IsomorphismReport presentation_isomorphism_check(std::int64_t level, std::int64_t bound);

/* JSON: {level, entries: [{num, den, residue, re, im}]}. */
nlohmann::json to_json(HeckeElement const & f);
HeckeElement hecke_from_json(nlohmann::json const & j);
nlohmann::json to_json(IsomorphismReport const & r);
nlohmann::json to_json(OrbitPartition const & orbits);

}  // namespace bcsys

#endif
