#include "bcsys/numberfield.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bcsys/kernels.hpp"

namespace bcsys {

QuadraticField::QuadraticField(FundamentalDiscriminant d) : disc_(d), ideal_count_(ideal_count_function(d)) {}

std::int64_t ideal_count(QuadraticField const & field, std::int64_t n)
{
    return field.ideal_counter()(n);
}

std::vector<std::int64_t> ideal_count_table(QuadraticField const & field, std::int64_t cutoff)
{
    auto const & a = field.ideal_counter();
    return kernels::tabulate<std::int64_t>(cutoff, [&](std::int64_t n) { return a(n); });
}

double dedekind_tail_bound(double beta, std::int64_t cutoff)
{
    if (!(beta > 1.0))
        throw std::domain_error("beta must exceed 1");
    double const x = static_cast<double>(cutoff);
    return beta * std::pow(x, 1.0 - beta) / (beta - 1.0) * (std::log(x) + 1.0 + 1.0 / (beta - 1.0));
}

SeriesValue dedekind_zeta(QuadraticField const & field, double beta, std::int64_t cutoff)
{
    if (!(beta > 1.0))
        throw std::domain_error("beta must exceed 1 for the Dedekind zeta series");
    if (cutoff < 1)
        throw std::invalid_argument("cutoff must be at least 1");
    auto const a = ideal_count_table(field, cutoff);
    double const value = kernels::dirichlet_sum<double>(
        cutoff, beta, [&](std::int64_t n) { return static_cast<double>(a[static_cast<std::size_t>(n - 1)]); });
    return SeriesValue{value, dedekind_tail_bound(beta, cutoff), cutoff, beta};
}

Complex field_gibbs_evaluate(QuadraticField const & field, double beta, std::int64_t cutoff,
                             std::function<Complex(std::int64_t)> const & observable)
{
    auto const z = dedekind_zeta(field, beta, cutoff);
    auto const a = ideal_count_table(field, cutoff);
    Complex const weighted = kernels::dirichlet_sum<Complex>(cutoff, beta, [&](std::int64_t n) {
        auto const an = a[static_cast<std::size_t>(n - 1)];
        return an == 0 ? Complex{} : static_cast<double>(an) * observable(n);
    });
    return weighted / z.value.real();
}

/* Binary quadratic forms */

bool BinaryQuadraticForm::is_reduced() const
{
    if (std::abs(b) > a || a > c)
        return false;
    if ((std::abs(b) == a || a == c) && b < 0)
        return false;
    return true;
}

BinaryQuadraticForm reduce(BinaryQuadraticForm f)
{
    std::int64_t const d = f.discriminant();
    if (d >= 0 || f.a <= 0)
        throw std::invalid_argument("reduce expects a positive definite form");
    for (;;) {
        if (f.b > f.a || f.b <= -f.a) {
            // b -> b + 2ak with the result in (-a, a].
            std::int64_t const two_a = 2 * f.a;
            std::int64_t k = (f.a - f.b) / two_a;
            if ((f.a - f.b) % two_a != 0 && (f.a - f.b) < 0)
                --k;
            f.b += two_a * k;
            f.c = (f.b * f.b - d) / (4 * f.a);
        }
        if (f.a > f.c) {
            std::swap(f.a, f.c);
            f.b = -f.b;
            continue;
        }
        break;
    }
    if (f.a == f.c && f.b < 0)
        f.b = -f.b;
    return f;
}

ClassGroupData class_group(std::int64_t d)
{
    if (d >= 0)
        throw std::invalid_argument("class groups are only computed for imaginary quadratic fields (d < 0); got d = "
                                    + std::to_string(d));
    FundamentalDiscriminant::make(d);
    ClassGroupData out;
    out.discriminant = d;
    std::int64_t const absd = -d;
    for (std::int64_t a = 1; 3 * a * a <= absd; ++a) {
        for (std::int64_t b = -a + 1; b <= a; ++b) {
            if (mod_floor(b - d, 2) != 0)
                continue;
            std::int64_t const num = b * b - d;
            if (num % (4 * a) != 0)
                continue;
            std::int64_t const c = num / (4 * a);
            BinaryQuadraticForm const f{a, b, c};
            if (!f.is_reduced())
                continue;
            if (std::gcd(std::gcd(a, std::abs(b)), c) != 1)
                continue;
            out.forms.push_back(f);
        }
    }
    std::sort(out.forms.begin(), out.forms.end(), [](auto const & x, auto const & y) {
        return std::make_tuple(x.a, std::abs(x.b), -x.b) < std::make_tuple(y.a, std::abs(y.b), -y.b);
    });
    return out;
}

/* Class number one for real quadratic fields */

namespace {

bool is_square(std::int64_t x, std::int64_t * root = nullptr)
{
    if (x < 0)
        return false;
    auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(x))));
    while (r * r > x)
        --r;
    while ((r + 1) * (r + 1) <= x)
        ++r;
    if (root)
        *root = r;
    return r * r == x;
}

/// Fundamental unit (u + v sqrt d)/2 as a double, via the least v >= 1 with
/// d v^2 +- 4 a square.
double fundamental_unit(std::int64_t d)
{
    constexpr std::int64_t kMaxV = 10'000'000;
    for (std::int64_t v = 1; v <= kMaxV; ++v) {
        std::int64_t const dv2 = checked_mul(d, checked_mul(v, v));
        for (std::int64_t delta : {-4, 4}) {
            std::int64_t u;
            if (is_square(dv2 + delta, &u) && u > 0)
                return (static_cast<double>(u) + static_cast<double>(v) * std::sqrt(static_cast<double>(d))) / 2.0;
        }
    }
    throw std::runtime_error("fundamental unit search exceeded its bound for d = " + std::to_string(d));
}

/// Some alpha in O_F has |N(alpha)| = p: X^2 - d y^2 = +-4p, X = d y mod 2.
bool has_element_of_norm(std::int64_t d, std::int64_t p, double unit)
{
    double const ybound = (unit + 1.0) * std::sqrt(static_cast<double>(p)) / std::sqrt(static_cast<double>(d));
    auto const ymax = static_cast<std::int64_t>(std::ceil(ybound));
    for (std::int64_t y = 0; y <= ymax; ++y) {
        std::int64_t const dy2 = checked_mul(d, y * y);
        for (std::int64_t delta : {-4 * p, 4 * p}) {
            std::int64_t x;
            if (is_square(dy2 + delta, &x) && mod_floor(x - d * y, 2) == 0)
                return true;
        }
    }
    return false;
}

}  // namespace

bool has_class_number_one(QuadraticField const & field)
{
    std::int64_t const d = field.discriminant().value();
    if (d < 0)
        return class_group(d).class_number() == 1;
    double const minkowski = std::sqrt(static_cast<double>(d)) / 2.0;
    double const unit = fundamental_unit(d);
    for (std::int64_t p : primes_up_to(static_cast<std::int64_t>(std::floor(minkowski)))) {
        if (kronecker_symbol(field.discriminant(), p) == -1)
            continue;  // inert: (p) is principal
        if (!has_element_of_norm(d, p, unit))
            return false;
    }
    return true;
}

std::vector<std::int64_t> hilbert_coefficients(QuadraticField const & field, std::int64_t cutoff)
{
    auto const a = ideal_count_table(field, cutoff);
    std::vector<std::int64_t> c(static_cast<std::size_t>(cutoff), 0);
    for (std::int64_t k = 1; k <= cutoff; ++k) {
        std::int64_t const ak = a[static_cast<std::size_t>(k - 1)];
        if (ak == 0)
            continue;
        for (std::int64_t j = 1; j * k <= cutoff; ++j) {
            std::int64_t const aj = a[static_cast<std::size_t>(j - 1)];
            auto & slot = c[static_cast<std::size_t>(j * k - 1)];
            slot = checked_add(slot, checked_mul(checked_mul(aj, ak), k));
        }
    }
    return c;
}

SeriesValue hilbert_partition(QuadraticField const & field, double beta, std::int64_t cutoff)
{
    if (!field.is_real())
        throw std::invalid_argument("the Hilbert-modular partition function needs a real quadratic field");
    if (!(beta > 2.0))
        throw std::domain_error("beta must exceed 2 for the Hilbert-modular partition function");
    if (cutoff < 1)
        throw std::invalid_argument("cutoff must be at least 1");
    if (!has_class_number_one(field))
        throw std::invalid_argument("Q(sqrt " + std::to_string(field.discriminant().value())
                                    + ") does not have class number one; the principal/full comparison needs h = 1");
    auto const c = hilbert_coefficients(field, cutoff);
    double const value = kernels::dirichlet_sum<double>(
        cutoff, beta, [&](std::int64_t n) { return static_cast<double>(c[static_cast<std::size_t>(n - 1)]); });

    // Tail pairs (j, k) with jk > cutoff: for k <= cutoff the j-sum starts
    // above cutoff / k, and k > cutoff contributes the full zeta_F(beta).
    auto const a = ideal_count_table(field, cutoff);
    auto const z0 = dedekind_zeta(field, beta, cutoff);
    double const full0 = z0.value.real() + z0.tail_bound;
    double tail = full0 * dedekind_tail_bound(beta - 1.0, cutoff);
    for (std::int64_t k = 1; k <= cutoff; ++k) {
        std::int64_t const ak = a[static_cast<std::size_t>(k - 1)];
        if (ak != 0)
            tail += static_cast<double>(ak) * std::pow(static_cast<double>(k), 1.0 - beta)
                    * std::min(full0, dedekind_tail_bound(beta, cutoff / k));
    }
    return SeriesValue{value, tail, cutoff, beta};
}

nlohmann::json to_json(ClassGroupData const & data)
{
    nlohmann::json forms = nlohmann::json::array();
    for (auto const & f : data.forms)
        forms.push_back({f.a, f.b, f.c});
    return {{"d", data.discriminant}, {"h", data.class_number()}, {"forms", forms}};
}

}  // namespace bcsys
