#ifndef BCSYS_ENVELOPE_HPP
#define BCSYS_ENVELOPE_HPP

// Membership in Chevalley enveloping semigroups, in exact rational
// arithmetic: the symplectic similitude semigroup MSp_2g (m^T J m = mu J,
// mu = 0 allowed) and M_2 as the envelope of GL_2 via the line wedge^2 V.

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace bcsys {

using Rational = boost::multiprecision::cpp_rational;

class RationalMatrix
{
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;

  public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    static RationalMatrix identity(std::size_t n);
    /// Rows of rational strings such as "3/2" or "-4"; numbers are accepted too.
    static RationalMatrix from_json(nlohmann::json const & j);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational & operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    Rational const & operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RationalMatrix transpose() const;
    friend RationalMatrix operator*(RationalMatrix const & a, RationalMatrix const & b);
    friend bool operator==(RationalMatrix const &, RationalMatrix const &) = default;
};

/// Determinant by fraction-exact Gaussian elimination.
Rational determinant(RationalMatrix const & m);
/// Inverse; throws std::domain_error when singular.
RationalMatrix inverse(RationalMatrix const & m);

class SymplecticSpace
{
    std::size_t genus_;

  public:
    explicit SymplecticSpace(std::size_t genus);
    std::size_t genus() const { return genus_; }
    std::size_t dimension() const { return 2 * genus_; }
    /// J = [[0, I_g], [-I_g, 0]].
    RationalMatrix form() const;
    /// psi(x, y) = x^T J y.
    Rational pairing(std::vector<Rational> const & x, std::vector<Rational> const & y) const;
};

struct MembershipVerdict
{
    bool member = false;
    std::optional<Rational> multiplier;
};

/// m in MSp_2g iff m^T J m = mu J for some mu (0 allowed).
MembershipVerdict msp_membership(SymplecticSpace const & space, RationalMatrix const & m);
/// Always a member: m acts on wedge^2 V by mu = det(m), read off from (m e1) ^ (m e2).
MembershipVerdict gl2_envelope_check(RationalMatrix const & m);

std::string to_string(Rational const & r);
Rational parse_rational(std::string const & s);
nlohmann::json to_json(MembershipVerdict const & v);

}  // namespace bcsys

#endif
