#ifndef BCSYS_NUMBERFIELD_HPP
#define BCSYS_NUMBERFIELD_HPP

// Quadratic fields through their ideal-counting function: Dedekind zeta,
// Gibbs states over the ideal semigroup, imaginary class groups by reduced
// forms, and the Hilbert-modular partition function zeta_F(b) zeta_F(b-1).

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <json.hpp>

#include "bcsys/arith.hpp"
#include "bcsys/spectral.hpp"

namespace bcsys {

class QuadraticField
{
    FundamentalDiscriminant disc_;
    MultiplicativeFunction ideal_count_;

  public:
    explicit QuadraticField(FundamentalDiscriminant d);
    /// Validates d first.
    static QuadraticField make(std::int64_t d) { return QuadraticField(FundamentalDiscriminant::make(d)); }

    FundamentalDiscriminant discriminant() const { return disc_; }
    bool is_real() const { return disc_.is_real(); }
    MultiplicativeFunction const & ideal_counter() const { return ideal_count_; }
};

/// Number of integral ideals of norm n.
std::int64_t ideal_count(QuadraticField const & field, std::int64_t n);
/// a_1..a_cutoff, computed in parallel.
std::vector<std::int64_t> ideal_count_table(QuadraticField const & field, std::int64_t cutoff);

/// Rigorous bound on sum_{n > cutoff} a_n n^{-beta} from a_n <= d(n).
double dedekind_tail_bound(double beta, std::int64_t cutoff);
/// sum_{n <= cutoff} a_n n^{-beta}. beta > 1.
SeriesValue dedekind_zeta(QuadraticField const & field, double beta, std::int64_t cutoff);

/// zeta_F(beta, cutoff)^{-1} sum_{n <= cutoff} a_n f(n) n^{-beta}.
Complex field_gibbs_evaluate(QuadraticField const & field, double beta, std::int64_t cutoff,
                             std::function<Complex(std::int64_t)> const & observable);

struct BinaryQuadraticForm
{
    std::int64_t a = 1, b = 0, c = 1;

    std::int64_t discriminant() const { return b * b - 4 * a * c; }
    bool is_reduced() const;
    friend auto operator<=>(BinaryQuadraticForm const &, BinaryQuadraticForm const &) = default;
};

/// Reduction of a positive definite form to the unique reduced form in its
/// SL2(Z) class.
BinaryQuadraticForm reduce(BinaryQuadraticForm f);

struct ClassGroupData
{
    std::int64_t discriminant = 0;
    std::vector<BinaryQuadraticForm> forms;
    std::int64_t class_number() const { return static_cast<std::int64_t>(forms.size()); }
};

/// All reduced primitive forms of discriminant d < 0, d fundamental.
ClassGroupData class_group(std::int64_t d);

/// True when every prime below the Minkowski bound is split/ramified only
/// into principal ideals (real quadratic fields).
bool has_class_number_one(QuadraticField const & field);

/// c_n = sum_{k | n} a_{n/k} a_k k: Dirichlet coefficients of zeta_F(s) zeta_F(s-1).
std::vector<std::int64_t> hilbert_coefficients(QuadraticField const & field, std::int64_t cutoff);
/// sum_{n <= cutoff} c_n n^{-beta}; beta > 2, real field with class number one.
SeriesValue hilbert_partition(QuadraticField const & field, double beta, std::int64_t cutoff);

nlohmann::json to_json(ClassGroupData const & data);

}  // namespace bcsys

#endif
