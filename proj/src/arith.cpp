#include "bcsys/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bcsys {

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("int64 addition overflow");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("int64 multiplication overflow");
    return r;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b)
{
    return std::gcd(a, b);
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b)
{
    if (a == 0 || b == 0)
        return 0;
    std::int64_t g = std::gcd(a, b);
    return checked_mul(std::abs(a) / g, std::abs(b));
}

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m)
{
    __int128 r = static_cast<__int128>(mod_floor(a, m)) * mod_floor(b, m);
    return static_cast<std::int64_t>(r % m);
}

std::int64_t to_int64(BigInt const & x)
{
    if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("integer does not fit in 64 bits: " + x.str());
    return static_cast<std::int64_t>(x);
}

/* PositiveRational */

PositiveRational::PositiveRational() : num_(1), den_(1) {}

PositiveRational::PositiveRational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den))
{
    if (num_ <= 0 || den_ <= 0)
        throw std::invalid_argument("PositiveRational requires positive numerator and denominator");
    BigInt g = boost::multiprecision::gcd(num_, den_);
    if (g != 1) {
        num_ /= g;
        den_ /= g;
    }
}

PositiveRational::PositiveRational(std::int64_t n) : PositiveRational(BigInt(n), BigInt(1)) {}

PositiveRational PositiveRational::inverse() const
{
    PositiveRational r;
    r.num_ = den_;
    r.den_ = num_;
    return r;
}

static double big_log(BigInt const & x)
{
    if (x <= BigInt(std::numeric_limits<std::int64_t>::max()))
        return std::log(static_cast<double>(static_cast<std::int64_t>(x)));
    // Scale down by a power of two so the mantissa stays representable.
    unsigned shift = boost::multiprecision::msb(x) - 60;
    BigInt y = x >> shift;
    return std::log(static_cast<double>(static_cast<std::int64_t>(y))) + shift * std::log(2.0);
}

double PositiveRational::log() const
{
    return big_log(num_) - big_log(den_);
}

double PositiveRational::to_double() const
{
    return std::exp(log());
}

std::string PositiveRational::to_string() const
{
    if (den_ == 1)
        return num_.str();
    return num_.str() + "/" + den_.str();
}

PositiveRational operator*(PositiveRational const & a, PositiveRational const & b)
{
    BigInt g1 = boost::multiprecision::gcd(a.num_, b.den_);
    BigInt g2 = boost::multiprecision::gcd(b.num_, a.den_);
    PositiveRational r;
    r.num_ = (a.num_ / g1) * (b.num_ / g2);
    r.den_ = (a.den_ / g2) * (b.den_ / g1);
    return r;
}

PositiveRational operator/(PositiveRational const & a, PositiveRational const & b)
{
    return a * b.inverse();
}

std::strong_ordering operator<=>(PositiveRational const & a, PositiveRational const & b)
{
    BigInt lhs = a.num_ * b.den_;
    BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs)
        return std::strong_ordering::less;
    if (lhs > rhs)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

ResidueClass ResidueClass::make(std::int64_t modulus, std::int64_t residue)
{
    if (modulus < 1)
        throw std::invalid_argument("residue class modulus must be positive, got " + std::to_string(modulus));
    return ResidueClass{modulus, mod_floor(residue, modulus)};
}

/* Sieve */

namespace {

class SpfTable
{
    std::vector<std::uint32_t> spf_;

  public:
    SpfTable() : spf_(kSieveBound + 1, 0)
    {
        for (std::int64_t i = 2; i <= kSieveBound; ++i) {
            if (spf_[i] != 0)
                continue;
            spf_[i] = static_cast<std::uint32_t>(i);
            if (i * i > kSieveBound)
                continue;
            for (std::int64_t j = i * i; j <= kSieveBound; j += i)
                if (spf_[j] == 0)
                    spf_[j] = static_cast<std::uint32_t>(i);
        }
    }

    std::uint32_t operator[](std::int64_t n) const { return spf_[n]; }
};

SpfTable const & spf_table()
{
    static SpfTable const table;  // thread-safe initialization
    return table;
}

void check_sieve_range(std::int64_t n)
{
    if (n < 1)
        throw std::invalid_argument("expected a positive integer, got " + std::to_string(n));
    if (n > kSieveBound)
        throw std::out_of_range("integer " + std::to_string(n) + " exceeds the factorization sieve bound "
                                + std::to_string(kSieveBound));
}

}  // namespace

Factorization factorize(std::int64_t n)
{
    check_sieve_range(n);
    Factorization out;
    auto const & spf = spf_table();
    while (n > 1) {
        std::int64_t p = spf[n];
        int k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        out.emplace_back(p, k);
    }
    return out;
}

std::vector<std::int64_t> primes_up_to(std::int64_t bound)
{
    std::vector<std::int64_t> out;
    if (bound < 2)
        return out;
    check_sieve_range(bound);
    auto const & spf = spf_table();
    for (std::int64_t i = 2; i <= bound; ++i)
        if (spf[i] == i)
            out.push_back(i);
    return out;
}

bool is_prime(std::int64_t n)
{
    if (n < 2)
        return false;
    check_sieve_range(n);
    return spf_table()[n] == n;
}

bool is_squarefree(std::int64_t n)
{
    for (auto const & [p, k] : factorize(n))
        if (k > 1)
            return false;
    return true;
}

std::vector<std::int64_t> divisors(std::int64_t n)
{
    std::vector<std::int64_t> out{1};
    for (auto const & [p, k] : factorize(n)) {
        std::size_t const base = out.size();
        std::int64_t pk = 1;
        for (int e = 1; e <= k; ++e) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i)
                out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t euler_phi(std::int64_t n)
{
    std::int64_t r = n;
    for (auto const & [p, k] : factorize(n))
        r = r / p * (p - 1);
    return r;
}

/* MultiplicativeFunction */

MultiplicativeFunction::MultiplicativeFunction(std::string name, Rule rule)
    : name_(std::move(name)), rule_(std::move(rule)), memo_(std::make_shared<Memo>())
{
}

std::int64_t MultiplicativeFunction::prime_power(std::int64_t p, int k) const
{
    // p < 2^32 and k < 64, so the key is collision free.
    std::int64_t const key = (p << 6) | k;
    {
        std::shared_lock lock(memo_->mutex);
        auto it = memo_->table.find(key);
        if (it != memo_->table.end())
            return it->second;
    }
    std::int64_t v = rule_(p, k);
    std::unique_lock lock(memo_->mutex);
    memo_->table.emplace(key, v);
    return v;
}

std::int64_t MultiplicativeFunction::operator()(std::int64_t n) const
{
    std::int64_t r = 1;
    for (auto const & [p, k] : factorize(n))
        r = checked_mul(r, prime_power(p, k));
    return r;
}

std::int64_t evaluate_multiplicative(MultiplicativeFunction const & f, std::int64_t n)
{
    return f(n);
}

/* Discriminants and the Kronecker symbol */

bool FundamentalDiscriminant::check(std::int64_t d, std::string * why)
{
    auto fail = [&](std::string msg) {
        if (why)
            *why = std::move(msg);
        return false;
    };
    if (d == 0 || d == 1)
        return fail("discriminant " + std::to_string(d) + " is not a field discriminant");
    std::int64_t const r4 = mod_floor(d, 4);
    if (r4 == 1) {
        if (!is_squarefree(std::abs(d)))
            return fail("d = " + std::to_string(d) + " = 1 mod 4 but is not squarefree");
        return true;
    }
    if (r4 == 0) {
        std::int64_t m = d / 4;
        std::int64_t const m4 = mod_floor(m, 4);
        if (m4 != 2 && m4 != 3)
            return fail("d = 4m with m = " + std::to_string(m) + " = " + std::to_string(m4)
                        + " mod 4; need m = 2 or 3 mod 4");
        if (!is_squarefree(std::abs(m)))
            return fail("d = 4m with m = " + std::to_string(m) + " not squarefree");
        return true;
    }
    return fail("d = " + std::to_string(d) + " = " + std::to_string(r4) + " mod 4; need d = 0 or 1 mod 4");
}

FundamentalDiscriminant FundamentalDiscriminant::make(std::int64_t d)
{
    std::string why;
    if (!check(d, &why))
        throw std::invalid_argument("not a fundamental discriminant: " + why);
    return FundamentalDiscriminant(d);
}

int kronecker_raw(std::int64_t d, std::int64_t n)
{
    if (n < 1)
        throw std::invalid_argument("kronecker symbol needs n >= 1");
    int t = 1;
    int twos = 0;
    while ((n & 1) == 0) {
        n >>= 1;
        ++twos;
    }
    if (twos > 0) {
        if ((d & 1) == 0)
            return 0;
        std::int64_t const r8 = mod_floor(d, 8);
        if ((twos & 1) && (r8 == 3 || r8 == 5))
            t = -t;
    }
    // Jacobi symbol (d|n), n odd.
    std::int64_t a = mod_floor(d, n);
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            std::int64_t const r = n % 8;
            if (r == 3 || r == 5)
                t = -t;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3)
            t = -t;
        a %= n;
    }
    return n == 1 ? t : 0;
}

int kronecker_symbol(FundamentalDiscriminant d, std::int64_t n)
{
    return kronecker_raw(d.value(), n);
}

MultiplicativeFunction sigma1_function()
{
    return MultiplicativeFunction("sigma1", [](std::int64_t p, int k) {
        std::int64_t s = 1, pk = 1;
        for (int i = 0; i < k; ++i) {
            pk = checked_mul(pk, p);
            s = checked_add(s, pk);
        }
        return s;
    });
}

std::int64_t divisor_sigma1(std::int64_t n)
{
    static MultiplicativeFunction const sigma = sigma1_function();
    return sigma(n);
}

MultiplicativeFunction ideal_count_function(FundamentalDiscriminant d)
{
    return MultiplicativeFunction("ideal_count(" + std::to_string(d.value()) + ")", [d](std::int64_t p, int k) {
        switch (kronecker_symbol(d, p)) {
        case 1:
            return static_cast<std::int64_t>(k + 1);  // split
        case -1:
            return static_cast<std::int64_t>(k % 2 == 0 ? 1 : 0);  // inert
        default:
            return std::int64_t{1};  // ramified
        }
    });
}

}  // namespace bcsys
