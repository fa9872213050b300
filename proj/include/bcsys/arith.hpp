#ifndef BCSYS_ARITH_HPP
#define BCSYS_ARITH_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bcsys {

using BigInt = boost::multiprecision::cpp_int;

/* Checked 64-bit arithmetic. Every helper throws std::overflow_error rather
 * than wrapping. */
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t checked_lcm(std::int64_t a, std::int64_t b);
std::int64_t gcd64(std::int64_t a, std::int64_t b);
/// Non-negative remainder.
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}
/// a*b mod m without overflow for m < 2^62.
std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m);
/// Converts to int64, throwing std::overflow_error when out of range.
std::int64_t to_int64(BigInt const & x);

/* An element of Q_+^x, kept in lowest terms with arbitrary-precision parts. */
class PositiveRational
{
    BigInt num_;
    BigInt den_;

  public:
    PositiveRational();
    PositiveRational(BigInt num, BigInt den);
    explicit PositiveRational(std::int64_t n);

    BigInt const & num() const { return num_; }
    BigInt const & den() const { return den_; }
    std::int64_t num64() const { return to_int64(num_); }
    std::int64_t den64() const { return to_int64(den_); }

    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_integer() const { return den_ == 1; }
    /// max(numerator, denominator).
    BigInt height() const { return num_ > den_ ? num_ : den_; }

    PositiveRational inverse() const;
    double log() const;
    double to_double() const;
    std::string to_string() const;

    friend PositiveRational operator*(PositiveRational const & a, PositiveRational const & b);
    friend PositiveRational operator/(PositiveRational const & a, PositiveRational const & b);
    friend bool operator==(PositiveRational const & a, PositiveRational const & b) = default;
    friend std::strong_ordering operator<=>(PositiveRational const & a, PositiveRational const & b);
};

/* A congruence condition x = residue (mod modulus). */
struct ResidueClass
{
    std::int64_t modulus = 1;
    std::int64_t residue = 0;

    /// Reduces residue into [0, modulus); rejects modulus < 1.
    static ResidueClass make(std::int64_t modulus, std::int64_t residue);

    bool contains(std::int64_t x) const { return mod_floor(x, modulus) == residue; }
    bool is_unit() const { return gcd64(residue, modulus) == 1; }

    friend bool operator==(ResidueClass const &, ResidueClass const &) = default;
};

/* Smallest-prime-factor table. Inputs above kSieveBound are rejected. */
inline constexpr std::int64_t kSieveBound = 10'000'000;

using Factorization = std::vector<std::pair<std::int64_t, int>>;

/// Prime factorization of 1 <= n <= kSieveBound, primes ascending.
Factorization factorize(std::int64_t n);
/// All primes up to bound (bound <= kSieveBound).
std::vector<std::int64_t> primes_up_to(std::int64_t bound);
bool is_prime(std::int64_t n);
bool is_squarefree(std::int64_t n);
/// Positive divisors, ascending.
std::vector<std::int64_t> divisors(std::int64_t n);
std::int64_t euler_phi(std::int64_t n);

/* Arithmetic function defined by its values on prime powers. Prime-power
 * values are memoized under a shared mutex so evaluation is safe from
 * concurrent callers. */
class MultiplicativeFunction
{
  public:
    using Rule = std::function<std::int64_t(std::int64_t p, int k)>;

    MultiplicativeFunction(std::string name, Rule rule);

    std::string const & name() const { return name_; }
    std::int64_t prime_power(std::int64_t p, int k) const;
    /// Product of prime-power values over the factorization; throws on overflow.
    std::int64_t operator()(std::int64_t n) const;

  private:
    struct Memo
    {
        std::shared_mutex mutex;
        std::unordered_map<std::int64_t, std::int64_t> table;
    };

    std::string name_;
    Rule rule_;
    std::shared_ptr<Memo> memo_;
};

std::int64_t evaluate_multiplicative(MultiplicativeFunction const & f, std::int64_t n);

/* A validated fundamental discriminant: d = 1 mod 4 squarefree, or d = 4m
 * with m = 2,3 mod 4 squarefree. d = 1 is excluded. */
class FundamentalDiscriminant
{
    std::int64_t d_;
    explicit FundamentalDiscriminant(std::int64_t d) : d_(d) {}

  public:
    /// Throws std::invalid_argument naming the failed condition.
    static FundamentalDiscriminant make(std::int64_t d);
    static bool check(std::int64_t d, std::string * why = nullptr);

    std::int64_t value() const { return d_; }
    bool is_real() const { return d_ > 0; }
    friend bool operator==(FundamentalDiscriminant const &, FundamentalDiscriminant const &) = default;
};

/// Kronecker symbol (d|n) for n >= 1; totally multiplicative in n.
int kronecker_symbol(FundamentalDiscriminant d, std::int64_t n);
/// Kronecker symbol without the discriminant check (any d, n >= 1).
int kronecker_raw(std::int64_t d, std::int64_t n);

std::int64_t divisor_sigma1(std::int64_t n);
MultiplicativeFunction sigma1_function();
/// a_n = number of integral ideals of norm n in Q(sqrt d).
MultiplicativeFunction ideal_count_function(FundamentalDiscriminant d);

}  // namespace bcsys

#endif
