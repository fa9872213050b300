#ifndef BCSYS_SPECTRAL_HPP
#define BCSYS_SPECTRAL_HPP

// Truncated Hilbert-space picture of the Bost-Connes system: the
// representation pi on l^2({1..cutoff}) at an invertible base point, the
// Hamiltonian log n, partition functions, Gibbs (KMS) states and the GNS,
// operator-norm and commutant probes built on them.
//
// Matrix identities only hold on the "interior" block of a truncation: for
// elements of support height h1, h2, entries (n, m) with n, m <= cutoff /
// (h1 h2) cannot see the truncation boundary.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "bcsys/groupoid.hpp"

namespace bcsys {

using ComplexMatrix = Eigen::MatrixXcd;

/* Value of a truncated series together with a bound on the neglected tail. */
struct SeriesValue
{
    Complex value;
    double tail_bound = 0.0;
    std::int64_t cutoff = 0;
    double beta = 0.0;
};

/* Invertible base point rho_0 in Zhat^x, given by a unit residue r0 mod L0.
 * It is lifted to the unit equal to r0 in Z_p for p | L0 and to 1 in Z_p
 * for p not dividing L0, so rho_0 mod M is defined for every M. */
class BasePoint
{
    ResidueClass unit_;
    explicit BasePoint(ResidueClass unit) : unit_(unit) {}

  public:
    /// Throws std::invalid_argument unless gcd(residue, modulus) = 1.
    static BasePoint make(ResidueClass unit);
    static BasePoint one() { return BasePoint(ResidueClass{1, 0}); }

    ResidueClass const & unit() const { return unit_; }
    /// rho_0 mod m.
    std::int64_t reduce(std::int64_t m) const;
};

struct TruncatedRepresentation
{
    std::int64_t cutoff = 0;
    BasePoint base = BasePoint::one();
    /// entry(n-1, m-1) = f(n/m, m rho_0).
    ComplexMatrix matrix;
};

/// pi(f) on l^2({1..cutoff}); fills only the O(cutoff) structurally nonzero entries.
TruncatedRepresentation represent(HeckeElement const & f, BasePoint const & base, std::int64_t cutoff);

namespace serial {
/// Reference fill: evaluates f(n/m, m rho_0) for every (n, m).
TruncatedRepresentation represent(HeckeElement const & f, BasePoint const & base, std::int64_t cutoff);
}  // namespace serial

/// Hamiltonian diagonal (log 1, ..., log cutoff).
std::vector<double> hamiltonian_diagonal(std::int64_t cutoff);

/// max |pi(sigma_t f) - e^{itH} pi(f) e^{-itH}|.
double hamiltonian_conjugation_check(HeckeElement const & f, BasePoint const & base, std::int64_t cutoff, double t);

/// sum_{n <= cutoff} n^{-beta}, tail bound cutoff^{1-beta}/(beta-1). beta > 1.
SeriesValue partition_function(double beta, std::int64_t cutoff);
/// Integral-test bound on sum_{n > cutoff} n^{-beta}.
double zeta_tail_bound(double beta, std::int64_t cutoff);

/* Gibbs state Trace(pi(f) e^{-beta H}) / Trace(e^{-beta H}) at a cutoff.
 * The index normalization 1/card(K\K_0) equals 1 here (K = K_0). */
struct GibbsState
{
    double beta = 2.0;
    BasePoint base = BasePoint::one();
    std::int64_t cutoff = 0;
    double normalization = 0.0;
    double tail_bound = 0.0;
};

GibbsState make_gibbs_state(double beta, BasePoint const & base, std::int64_t cutoff);

struct StateValue
{
    Complex value;
    /// Bound on |value - Phi(f)| for the untruncated state.
    double error_bound = 0.0;
};

/// Z^{-1} sum_{n <= cutoff} f(1, n rho_0) n^{-beta}.
StateValue gibbs_evaluate(GibbsState const & state, HeckeElement const & f);

struct KmsResidual
{
    Complex lhs;
    Complex rhs;
    double residual = 0.0;
    double tolerance = 0.0;

    bool ok() const { return residual <= tolerance; }
};

/// |Phi(f1 sigma_{i beta}(f2)) - Phi(f2 f1)| with the summed truncation bounds.
KmsResidual kms_check(GibbsState const & state, HeckeElement const & f1, HeckeElement const & f2);

struct GnsReport
{
    Complex gns_value;
    Complex state_value;
    /// |gns - state| / max(1, |state|).
    double deviation = 0.0;
    std::int64_t sample = 0;
    double weight_exponent = 0.0;
};

/// Builds Omega = Z^{-1/2} sum_h h^{w} e_h (x) e_h on {1..sample}^2 with
/// w = weight_exponent (default -beta/2), and compares <(pi(f) (x) 1) Omega,
/// Omega> with the Gibbs state at cutoff = sample.
GnsReport gns_check(GibbsState const & state, HeckeElement const & f, std::int64_t sample);
GnsReport gns_check(GibbsState const & state, HeckeElement const & f, std::int64_t sample, double weight_exponent);

struct NormBound
{
    double estimate = 0.0;
    double l1_bound = 0.0;
    int iterations = 0;
};

/// Largest singular value of pi(f) by power iteration on pi(f)^* pi(f)
/// (all-ones start, at most 200 steps, relative tolerance 1e-9), with the
/// bound sum_g sup_rho |f(g, rho)|.
NormBound norm_bound(HeckeElement const & f, BasePoint const & base, std::int64_t cutoff);

/// dim {X : X pi(f) = pi(f) X for all f in fs} at the cutoff. Truncation can
/// only enlarge this relative to the infinite-dimensional commutant.
std::int64_t commutant_probe(std::span<HeckeElement const> fs, BasePoint const & base, std::int64_t cutoff);

nlohmann::json to_json(SeriesValue const & v);
/// Writes the matrix as CSV rows "n,m,re,im" for nonzero entries, with header.
std::string matrix_csv(TruncatedRepresentation const & rep);

}  // namespace bcsys

#endif
