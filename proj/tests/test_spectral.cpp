#include <doctest.h>

#include <numbers>
#include <random>

#include "bcsys/random.hpp"
#include "bcsys/spectral.hpp"
#include "oracles.hpp"

using namespace bcsys;

namespace {

HeckeElement delta(std::int64_t a, std::int64_t b, std::int64_t modulus, std::int64_t residue, Complex v = 1.0)
{
    return HeckeElement::indicator(PositiveRational(a, b), ResidueClass::make(modulus, residue), v);
}

/// Z^{-1} sum f(1, n) n^{-beta} at the base point 1, by direct summation.
Complex gibbs_oracle(HeckeElement const & f, double beta, std::int64_t cutoff)
{
    Complex num{};
    double z = 0.0;
    for (std::int64_t n = 1; n <= cutoff; ++n) {
        double const w = std::pow(static_cast<double>(n), -beta);
        num += oracle::eval(f, PositiveRational(1), n) * w;
        z += w;
    }
    return num / z;
}

double block_diff(ComplexMatrix const & a, ComplexMatrix const & b, std::int64_t block)
{
    if (block <= 0)
        return 0.0;
    return (a.topLeftCorner(block, block) - b.topLeftCorner(block, block)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("base point lifting")
{
    auto const b = BasePoint::make(ResidueClass::make(7, 3));
    CHECK(b.reduce(7) == 3);
    CHECK(b.reduce(14) == 3);
    CHECK(b.reduce(5) == 1);
    CHECK(b.reduce(35) == 31);
    CHECK(b.reduce(1) == 0);
    CHECK(BasePoint::one().reduce(12) == 1);
    CHECK_THROWS_AS(BasePoint::make(ResidueClass::make(6, 2)), std::invalid_argument);
    // The lift is a unit of Zhat, so its reduction is a unit at every modulus.
    auto const c = BasePoint::make(ResidueClass::make(12, 5));
    for (std::int64_t m = 1; m <= 200; ++m) {
        REQUIRE(std::gcd(c.reduce(m), m) == 1);
        REQUIRE(c.reduce(std::lcm(m, std::int64_t{12})) % m == c.reduce(m));
    }
}

TEST_CASE("representation examples")
{
    auto const id = represent(HeckeElement::identity(), BasePoint::one(), 9).matrix;
    CHECK(id == ComplexMatrix::Identity(9, 9));
    auto const d2 = represent(delta(2, 1, 1, 0), BasePoint::one(), 4).matrix;
    ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
    expected(1, 0) = 1.0;
    expected(3, 1) = 1.0;
    CHECK(d2 == expected);
    CHECK_THROWS(represent(HeckeElement::identity(), BasePoint::one(), 0));
}

TEST_CASE("matrix entries are f(n/m, m rho0)")
{
    std::mt19937_64 rng(43);
    for (int i = 0; i < 40; ++i) {
        auto const f = random_hecke(rng);
        auto const mat = represent(f, BasePoint::one(), 30).matrix;
        for (std::int64_t n = 1; n <= 30; ++n)
            for (std::int64_t m = 1; m <= 30; ++m)
                REQUIRE(mat(n - 1, m - 1) == oracle::eval(f, PositiveRational(n, m), m));
    }
}

TEST_CASE("multiplicativity and adjoint compatibility on the interior block")
{
    std::mt19937_64 rng(47);
    RandomHeckeSpec spec;
    spec.max_height = 3;
    std::int64_t const cutoff = 128;
    for (auto const & base : {BasePoint::one(), BasePoint::make(ResidueClass::make(5, 2))}) {
        for (int i = 0; i < 40; ++i) {
            auto const f1 = random_hecke(rng, spec);
            auto const f2 = random_hecke(rng, spec);
            std::int64_t const block = cutoff / (f1.height() * f2.height());
            auto const p1 = represent(f1, base, cutoff).matrix;
            auto const p2 = represent(f2, base, cutoff).matrix;
            ComplexMatrix const prod = p1 * p2;
            REQUIRE(block_diff(represent(convolve(f1, f2), base, cutoff).matrix, prod, block) == 0.0);
            ComplexMatrix const adj = p1.adjoint();
            REQUIRE(block_diff(represent(adjoint(f1), base, cutoff).matrix, adj, cutoff / f1.height()) == 0.0);
        }
    }
}

TEST_CASE("the Hamiltonian generates the time evolution")
{
    auto const h = hamiltonian_diagonal(5);
    CHECK(h.front() == 0.0);
    CHECK(std::is_sorted(h.begin(), h.end()));
    CHECK(hamiltonian_conjugation_check(delta(2, 1, 1, 0), BasePoint::one(), 64, 0.0) == 0.0);
    CHECK(hamiltonian_conjugation_check(delta(2, 1, 1, 0), BasePoint::one(), 64, 1.0) <= 1e-12);
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> t(-10.0, 10.0);
    RandomHeckeSpec spec;
    spec.real_coefficients = true;
    for (int i = 0; i < 30; ++i)
        REQUIRE(hamiltonian_conjugation_check(random_hecke(rng, spec), BasePoint::one(), 64, t(rng)) <= 1e-12);
}

TEST_CASE("partition function")
{
    auto const one = partition_function(2.0, 1);
    CHECK(one.value == Complex(1.0));
    auto const z2 = partition_function(2.0, 1'000'000);
    CHECK(std::abs(z2.value.real() - std::numbers::pi * std::numbers::pi / 6.0) <= 1e-6);
    CHECK(z2.tail_bound == doctest::Approx(1e-6));
    auto const z4 = partition_function(4.0, 10'000);
    CHECK(std::abs(z4.value.real() - std::pow(std::numbers::pi, 4) / 90.0) <= 1e-11);
    CHECK(std::abs(z4.value.real() - oracle::zeta_partial(4.0, 10'000)) <= 1e-13);
    CHECK_THROWS_WITH_AS(partition_function(1.0, 10), doctest::Contains("beta must exceed 1"), std::domain_error);
    CHECK_THROWS_AS(partition_function(0.5, 10), std::domain_error);
    // The true tail lies under the bound.
    double const exact = std::numbers::pi * std::numbers::pi / 6.0;
    for (std::int64_t cutoff : {1, 10, 1000}) {
        auto const v = partition_function(2.0, cutoff);
        CHECK(exact - v.value.real() <= v.tail_bound);
    }
}

TEST_CASE("Gibbs state examples")
{
    auto const state = make_gibbs_state(2.0, BasePoint::one(), 10'000);
    auto const id = gibbs_evaluate(state, HeckeElement::identity());
    CHECK(std::abs(id.value - 1.0) < 1e-15);
    auto const e2 = gibbs_evaluate(state, delta(1, 1, 2, 0));
    CHECK(std::abs(e2.value - 0.25) <= e2.error_bound);
    CHECK(std::abs(e2.value - gibbs_oracle(delta(1, 1, 2, 0), 2.0, 10'000)) < 1e-14);
    CHECK(gibbs_evaluate(state, delta(2, 1, 1, 0)).value == Complex{});
    CHECK_THROWS_AS(make_gibbs_state(1.0, BasePoint::one(), 10), std::domain_error);
}

TEST_CASE("Gibbs state matches direct summation and is positive")
{
    std::mt19937_64 rng(59);
    RandomHeckeSpec spec;
    spec.real_coefficients = true;
    auto const state = make_gibbs_state(1.5, BasePoint::one(), 5000);
    for (int i = 0; i < 50; ++i) {
        auto const f = random_hecke(rng, spec);
        auto const v = gibbs_evaluate(state, f);
        REQUIRE(std::abs(v.value - gibbs_oracle(f, 1.5, 5000)) < 1e-12);
        auto const pos = gibbs_evaluate(state, convolve(adjoint(f), f));
        REQUIRE(pos.value.real() >= -pos.error_bound);
        REQUIRE(std::abs(pos.value.imag()) <= pos.error_bound + 1e-15);
    }
}

TEST_CASE("KMS condition")
{
    auto const state = make_gibbs_state(2.0, BasePoint::one(), 10'000);
    auto const id = kms_check(state, HeckeElement::identity(), HeckeElement::identity());
    CHECK(id.residual == 0.0);
    auto const d2 = delta(2, 1, 1, 0);
    auto const k = kms_check(state, d2, adjoint(d2));
    CHECK(k.ok());
    CHECK(std::abs(k.lhs) > 0.1);

    std::mt19937_64 rng(61);
    RandomHeckeSpec spec;
    spec.real_coefficients = true;
    for (double beta : {1.5, 2.0, 3.0}) {
        auto const s1 = make_gibbs_state(beta, BasePoint::make(ResidueClass::make(3, 2)), 10'000);
        auto const s2 = make_gibbs_state(beta, BasePoint::make(ResidueClass::make(3, 2)), 20'000);
        for (int i = 0; i < 20; ++i) {
            auto const [a, b] = random_overlapping_pair(rng, spec);
            auto const r1 = kms_check(s1, a, b);
            auto const r2 = kms_check(s2, a, b);
            REQUIRE(r1.ok());
            REQUIRE(r2.residual <= r1.residual + r1.tolerance);
        }
    }
}

TEST_CASE("GNS vector reproduces the state")
{
    auto const state = make_gibbs_state(2.0, BasePoint::one(), 64);
    auto const id = gns_check(state, HeckeElement::identity(), 64);
    CHECK(id.deviation <= 1e-14);
    CHECK(id.weight_exponent == -1.0);
    CHECK(gns_check(state, delta(1, 1, 2, 0), 64).deviation <= 1e-10);
    std::mt19937_64 rng(67);
    RandomHeckeSpec spec;
    spec.real_coefficients = true;
    for (int i = 0; i < 30; ++i)
        REQUIRE(gns_check(state, random_hecke(rng, spec), 64).deviation <= 1e-10);
    // The weight n^{-1/2} only reproduces the state at beta = 1.
    CHECK(gns_check(state, HeckeElement::identity(), 64, -0.5).deviation > 0.5);
    auto const s3 = make_gibbs_state(3.0, BasePoint::one(), 64);
    CHECK(gns_check(s3, delta(1, 1, 2, 0), 64, -0.5).deviation > 1e-3);
    CHECK(gns_check(s3, delta(1, 1, 2, 0), 64, -1.5).deviation <= 1e-10);
}

TEST_CASE("norm estimate against the l1 bound")
{
    auto const id = norm_bound(HeckeElement::identity(), BasePoint::one(), 32);
    CHECK(id.estimate == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(id.l1_bound == 1.0);
    auto const d2 = norm_bound(delta(2, 1, 1, 0), BasePoint::one(), 64);
    CHECK(d2.estimate == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d2.l1_bound == 1.0);
    std::mt19937_64 rng(71);
    for (int i = 0; i < 40; ++i) {
        auto const f = random_hecke(rng);
        auto const nb = norm_bound(f, BasePoint::one(), 48);
        REQUIRE(nb.estimate <= nb.l1_bound * (1.0 + 1e-9));
        REQUIRE(nb.iterations <= 200);
    }
}

TEST_CASE("commutant probe")
{
    std::vector<HeckeElement> fs;
    CHECK(commutant_probe(fs, BasePoint::one(), 6) == 36);
    fs.push_back(HeckeElement::identity());
    CHECK(commutant_probe(fs, BasePoint::one(), 6) == 36);
    // Diagonal projections: the commutant of diag(e_2) is block diagonal.
    std::vector<HeckeElement> evens{delta(1, 1, 2, 0)};
    CHECK(commutant_probe(evens, BasePoint::one(), 6) == 3 * 3 + 3 * 3);
    // Growing the generating set can only shrink the commutant.
    std::vector<HeckeElement> suite;
    std::int64_t previous = 10 * 10;
    for (auto const & f : {delta(1, 1, 2, 0), delta(1, 1, 3, 0), delta(2, 1, 1, 0), adjoint(delta(2, 1, 1, 0)),
                           delta(3, 1, 1, 0), adjoint(delta(3, 1, 1, 0))}) {
        suite.push_back(f);
        auto const dim = commutant_probe(suite, BasePoint::one(), 10);
        REQUIRE(dim <= previous);
        previous = dim;
    }
    CHECK(previous >= 1);
}

TEST_CASE("series JSON and matrix CSV")
{
    auto const j = to_json(partition_function(3.0, 10));
    for (char const * key : {"value_re", "value_im", "tail_bound", "cutoff", "beta"})
        CHECK(j.contains(key));
    auto const csv = matrix_csv(represent(delta(2, 1, 1, 0), BasePoint::one(), 4));
    CHECK(csv == "n,m,re,im\n2,1,1,0\n4,2,1,0\n");
}
