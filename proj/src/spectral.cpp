#include "bcsys/spectral.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <fmt/format.h>

#include "bcsys/kernels.hpp"

namespace bcsys {

namespace {

std::int64_t mod_inverse(std::int64_t a, std::int64_t m)
{
    std::int64_t g0 = m, g1 = mod_floor(a, m), x0 = 0, x1 = 1;
    while (g1 != 0) {
        std::int64_t const q = g0 / g1;
        std::tie(g0, g1) = std::make_pair(g1, g0 - q * g1);
        std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    }
    if (g0 != 1)
        throw std::invalid_argument("no modular inverse");
    return mod_floor(x0, m);
}

void require_cutoff(std::int64_t cutoff)
{
    if (cutoff < 1)
        throw std::invalid_argument("cutoff must be at least 1, got " + std::to_string(cutoff));
}

void require_beta_above_one(double beta)
{
    if (!(beta > 1.0))
        throw std::domain_error("beta must exceed 1 (the series diverges for beta <= 1), got "
                                + fmt::format("{}", beta));
}

/* Values of f on the slice g at level(f), as a dense table. */
std::vector<Complex> slice_table(HeckeElement const & f, PositiveRational const & g)
{
    std::vector<Complex> table(static_cast<std::size_t>(f.level()));
    for (auto it = f.support().lower_bound(HeckeKey{g, 0}); it != f.support().end() && it->first.g == g; ++it)
        table[static_cast<std::size_t>(it->first.residue)] = it->second;
    return table;
}

}  // namespace

BasePoint BasePoint::make(ResidueClass unit)
{
    if (!unit.is_unit())
        throw std::invalid_argument("base point " + std::to_string(unit.residue) + " mod "
                                    + std::to_string(unit.modulus) + " is not invertible");
    return BasePoint(unit);
}

std::int64_t BasePoint::reduce(std::int64_t m) const
{
    if (m < 1)
        throw std::invalid_argument("modulus must be positive");
    std::int64_t x = 0, acc = 1;
    for (auto const & [p, k] : factorize(m)) {
        std::int64_t q = 1;
        for (int i = 0; i < k; ++i)
            q *= p;
        std::int64_t const target = unit_.modulus % p == 0 ? mod_floor(unit_.residue, q) : 1 % q;
        // x' = x + acc * t with x' = target mod q.
        std::int64_t const t = mul_mod(mod_floor(target - x, q), mod_inverse(acc % q, q), q);
        x += acc * t;
        acc *= q;
    }
    return mod_floor(x, m);
}

TruncatedRepresentation represent(HeckeElement const & f, BasePoint const & base, std::int64_t cutoff)
{
    require_cutoff(cutoff);
    TruncatedRepresentation rep{cutoff, base, ComplexMatrix::Zero(cutoff, cutoff)};
    std::int64_t const level = f.level();
    std::int64_t const rho0 = base.reduce(level);
    for (auto const & g : f.group_support()) {
        std::int64_t const a = g.num64();
        std::int64_t const b = g.den64();
        std::int64_t const steps = cutoff / std::max(a, b);
        auto const table = slice_table(f, g);
#pragma omp parallel for schedule(static)
        for (std::int64_t j = 1; j <= steps; ++j) {
            std::int64_t const n = a * j;
            std::int64_t const m = b * j;
            rep.matrix(n - 1, m - 1) = table[static_cast<std::size_t>(mul_mod(m, rho0, level))];
        }
    }
    return rep;
}

namespace serial {

TruncatedRepresentation represent(HeckeElement const & f, BasePoint const & base, std::int64_t cutoff)
{
    require_cutoff(cutoff);
    TruncatedRepresentation rep{cutoff, base, ComplexMatrix::Zero(cutoff, cutoff)};
    std::int64_t const level = f.level();
    std::int64_t const rho0 = base.reduce(level);
    for (std::int64_t n = 1; n <= cutoff; ++n)
        for (std::int64_t m = 1; m <= cutoff; ++m)
            rep.matrix(n - 1, m - 1)
                = f.at(PositiveRational(BigInt(n), BigInt(m)), ResidueClass{level, mul_mod(m, rho0, level)});
    return rep;
}

}  // namespace serial

std::vector<double> hamiltonian_diagonal(std::int64_t cutoff)
{
    require_cutoff(cutoff);
    return kernels::tabulate<double>(cutoff, [](std::int64_t n) { return std::log(static_cast<double>(n)); });
}

double hamiltonian_conjugation_check(HeckeElement const & f, BasePoint const & base, std::int64_t cutoff, double t)
{
    ComplexMatrix const evolved = represent(time_evolve(f, t), base, cutoff).matrix;
    ComplexMatrix const plain = represent(f, base, cutoff).matrix;
    auto const energy = hamiltonian_diagonal(cutoff);
    Eigen::VectorXcd phase(cutoff);
    for (std::int64_t n = 0; n < cutoff; ++n)
        phase(n) = std::polar(1.0, t * energy[static_cast<std::size_t>(n)]);
    ComplexMatrix const conjugated = phase.asDiagonal() * plain * phase.conjugate().asDiagonal();
    return (evolved - conjugated).cwiseAbs().maxCoeff();
}

double zeta_tail_bound(double beta, std::int64_t cutoff)
{
    require_beta_above_one(beta);
    return std::pow(static_cast<double>(cutoff), 1.0 - beta) / (beta - 1.0);
}

SeriesValue partition_function(double beta, std::int64_t cutoff)
{
    require_beta_above_one(beta);
    require_cutoff(cutoff);
    double const value = kernels::dirichlet_sum<double>(cutoff, beta, [](std::int64_t) { return 1.0; });
    return SeriesValue{value, zeta_tail_bound(beta, cutoff), cutoff, beta};
}

GibbsState make_gibbs_state(double beta, BasePoint const & base, std::int64_t cutoff)
{
    auto const z = partition_function(beta, cutoff);
    return GibbsState{beta, base, cutoff, z.value.real(), z.tail_bound};
}

StateValue gibbs_evaluate(GibbsState const & state, HeckeElement const & f)
{
    std::int64_t const level = f.level();
    std::int64_t const rho0 = state.base.reduce(level);
    auto const diag = slice_table(f, PositiveRational(1));
    Complex const sum = kernels::dirichlet_sum<Complex>(state.cutoff, state.beta, [&](std::int64_t n) {
        return diag[static_cast<std::size_t>(mul_mod(n, rho0, level))];
    });
    return StateValue{sum / state.normalization, 2.0 * f.sup_norm() * state.tail_bound / state.normalization};
}

KmsResidual kms_check(GibbsState const & state, HeckeElement const & f1, HeckeElement const & f2)
{
    auto const lhs = gibbs_evaluate(state, convolve(f1, analytic_evolve(f2, state.beta)));
    auto const rhs = gibbs_evaluate(state, convolve(f2, f1));
    return KmsResidual{lhs.value, rhs.value, std::abs(lhs.value - rhs.value), lhs.error_bound + rhs.error_bound};
}

GnsReport gns_check(GibbsState const & state, HeckeElement const & f, std::int64_t sample)
{
    return gns_check(state, f, sample, -state.beta / 2.0);
}

GnsReport gns_check(GibbsState const & state, HeckeElement const & f, std::int64_t sample, double weight_exponent)
{
    require_cutoff(sample);
    auto const truncated = make_gibbs_state(state.beta, state.base, sample);
    double const scale = 1.0 / std::sqrt(truncated.normalization);

    // Omega as a sample x sample coefficient array: Omega(g, h) = delta_gh w_h.
    ComplexMatrix omega = ComplexMatrix::Zero(sample, sample);
    for (std::int64_t h = 1; h <= sample; ++h)
        omega(h - 1, h - 1) = scale * std::pow(static_cast<double>(h), weight_exponent);

    // (pi(f) (x) 1) acts on the first tensor factor, i.e. on the rows.
    ComplexMatrix const image = represent(f, state.base, sample).matrix * omega;
    Complex const inner = (image.array() * omega.conjugate().array()).sum();
    Complex const expected = gibbs_evaluate(truncated, f).value;
    return GnsReport{inner, expected, std::abs(inner - expected) / std::max(1.0, std::abs(expected)), sample,
                     weight_exponent};
}

NormBound norm_bound(HeckeElement const & f, BasePoint const & base, std::int64_t cutoff)
{
    ComplexMatrix const a = represent(f, base, cutoff).matrix;
    NormBound out;
    out.l1_bound = f.l1_bound();
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(cutoff).normalized();
    double lambda = 0.0;
    for (int step = 1; step <= 200; ++step) {
        Eigen::VectorXcd const u = a.adjoint() * (a * v);
        double const next = std::abs(v.dot(u));
        out.iterations = step;
        double const norm_u = u.norm();
        if (norm_u == 0.0) {
            lambda = 0.0;
            break;
        }
        v = u / norm_u;
        bool const converged = std::abs(next - lambda) <= 1e-9 * next;
        lambda = next;
        if (converged)
            break;
    }
    out.estimate = std::sqrt(lambda);
    return out;
}

namespace {

template <class Scalar>
std::int64_t commutant_dimension(std::vector<ComplexMatrix> const & mats, std::int64_t cutoff)
{
    using Sparse = Eigen::SparseMatrix<Scalar>;
    std::int64_t const dim = cutoff * cutoff;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> normal
        = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(dim, dim);
    auto convert = [](Complex c) {
        if constexpr (std::is_same_v<Scalar, double>)
            return c.real();
        else
            return c;
    };
    for (auto const & a : mats) {
        // vec(XA - AX) = (A^T (x) 1 - 1 (x) A) vec(X), column-major vec.
        std::vector<Eigen::Triplet<Scalar>> trips;
        for (std::int64_t p = 0; p < cutoff; ++p)
            for (std::int64_t q = 0; q < cutoff; ++q) {
                Complex const c = a(p, q);
                if (c == Complex(0.0, 0.0))
                    continue;
                for (std::int64_t i = 0; i < cutoff; ++i) {
                    trips.emplace_back(i + cutoff * q, i + cutoff * p, convert(c));
                    trips.emplace_back(p + cutoff * i, q + cutoff * i, -convert(c));
                }
            }
        Sparse k(dim, dim);
        k.setFromTriplets(trips.begin(), trips.end());
        Sparse const kk = Sparse(k.adjoint()) * k;
        normal += Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(kk);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> solver(
        normal, Eigen::EigenvaluesOnly);
    auto const & ev = solver.eigenvalues();
    double const top = std::max(1.0, ev.maxCoeff());
    std::int64_t null = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) <= 1e-9 * top)
            ++null;
    return null;
}

}  // namespace

std::int64_t commutant_probe(std::span<HeckeElement const> fs, BasePoint const & base, std::int64_t cutoff)
{
    require_cutoff(cutoff);
    if (fs.empty())
        return cutoff * cutoff;
    std::vector<ComplexMatrix> mats;
    bool real = true;
    for (auto const & f : fs) {
        mats.push_back(represent(f, base, cutoff).matrix);
        real = real && mats.back().imag().isZero(0.0);
    }
    return real ? commutant_dimension<double>(mats, cutoff) : commutant_dimension<Complex>(mats, cutoff);
}

nlohmann::json to_json(SeriesValue const & v)
{
    return {{"value_re", v.value.real()},
            {"value_im", v.value.imag()},
            {"tail_bound", v.tail_bound},
            {"cutoff", v.cutoff},
            {"beta", v.beta}};
}

std::string matrix_csv(TruncatedRepresentation const & rep)
{
    std::ostringstream os;
    os << "n,m,re,im\n";
    for (std::int64_t n = 0; n < rep.cutoff; ++n)
        for (std::int64_t m = 0; m < rep.cutoff; ++m) {
            Complex const c = rep.matrix(n, m);
            if (c != Complex(0.0, 0.0))
                os << fmt::format("{},{},{:.17g},{:.17g}\n", n + 1, m + 1, c.real(), c.imag());
        }
    return os.str();
}

}  // namespace bcsys
