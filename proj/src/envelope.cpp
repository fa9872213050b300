#include "bcsys/envelope.hpp"

#include <stdexcept>

namespace bcsys {

RationalMatrix RationalMatrix::identity(std::size_t n)
{
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::from_json(nlohmann::json const & j)
{
    if (!j.is_array() || j.empty() || !j.front().is_array())
        throw std::invalid_argument("matrix must be a non-empty JSON array of rows");
    RationalMatrix m(j.size(), j.front().size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != m.cols())
            throw std::invalid_argument("matrix rows must all have the same length");
        for (std::size_t k = 0; k < m.cols(); ++k) {
            auto const & e = j[i][k];
            if (e.is_string())
                m(i, k) = parse_rational(e.get<std::string>());
            else if (e.is_number_integer())
                m(i, k) = Rational(e.get<std::int64_t>());
            else
                throw std::invalid_argument("matrix entries must be rational strings or integers");
        }
    }
    return m;
}

RationalMatrix RationalMatrix::transpose() const
{
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

RationalMatrix operator*(RationalMatrix const & a, RationalMatrix const & b)
{
    if (a.cols_ != b.rows_)
        throw std::invalid_argument("matrix dimension mismatch in product");
    RationalMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            if (a(i, k) == 0)
                continue;
            for (std::size_t j = 0; j < b.cols_; ++j)
                c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

Rational determinant(RationalMatrix const & m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("determinant of a non-square matrix");
    RationalMatrix a = m;
    std::size_t const n = a.rows();
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a(pivot, col) == 0)
            ++pivot;
        if (pivot == n)
            return 0;
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(pivot, j), a(col, j));
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            if (a(i, col) == 0)
                continue;
            Rational const f = a(i, col) / a(col, col);
            for (std::size_t j = col; j < n; ++j)
                a(i, j) -= f * a(col, j);
        }
    }
    return det;
}

RationalMatrix inverse(RationalMatrix const & m)
{
    std::size_t const n = m.rows();
    if (n != m.cols())
        throw std::invalid_argument("inverse of a non-square matrix");
    RationalMatrix a = m;
    RationalMatrix inv = RationalMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a(pivot, col) == 0)
            ++pivot;
        if (pivot == n)
            throw std::domain_error("matrix is singular");
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(pivot, j), a(col, j));
            std::swap(inv(pivot, j), inv(col, j));
        }
        Rational const p = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a(i, col) == 0)
                continue;
            Rational const f = a(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

SymplecticSpace::SymplecticSpace(std::size_t genus) : genus_(genus)
{
    if (genus_ < 1)
        throw std::invalid_argument("genus must be at least 1");
}

RationalMatrix SymplecticSpace::form() const
{
    RationalMatrix j(dimension(), dimension());
    for (std::size_t i = 0; i < genus_; ++i) {
        j(i, genus_ + i) = 1;
        j(genus_ + i, i) = -1;
    }
    return j;
}

Rational SymplecticSpace::pairing(std::vector<Rational> const & x, std::vector<Rational> const & y) const
{
    if (x.size() != dimension() || y.size() != dimension())
        throw std::invalid_argument("vector dimension does not match the symplectic space");
    Rational s = 0;
    for (std::size_t i = 0; i < genus_; ++i)
        s += x[i] * y[genus_ + i] - x[genus_ + i] * y[i];
    return s;
}

MembershipVerdict msp_membership(SymplecticSpace const & space, RationalMatrix const & m)
{
    std::size_t const n = space.dimension();
    if (m.rows() != n || m.cols() != n)
        throw std::invalid_argument("matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols())
                                    + " but the symplectic space has dimension " + std::to_string(n));
    RationalMatrix const j = space.form();
    RationalMatrix const pulled = m.transpose() * j * m;
    // mu is forced by the (0, g) entry, where J has a 1.
    Rational const mu = pulled(0, space.genus());
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (pulled(r, c) != mu * j(r, c))
                return MembershipVerdict{false, std::nullopt};
    return MembershipVerdict{true, mu};
}

MembershipVerdict gl2_envelope_check(RationalMatrix const & m)
{
    if (m.rows() != 2 || m.cols() != 2)
        throw std::invalid_argument("the GL2 envelope check needs a 2x2 matrix");
    // (m e1) ^ (m e2) = (m11 m22 - m21 m12) e1 ^ e2.
    Rational const mu = m(0, 0) * m(1, 1) - m(1, 0) * m(0, 1);
    return MembershipVerdict{true, mu};
}

std::string to_string(Rational const & r)
{
    auto const num = boost::multiprecision::numerator(r);
    auto const den = boost::multiprecision::denominator(r);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

Rational parse_rational(std::string const & s)
{
    try {
        auto const slash = s.find('/');
        if (slash == std::string::npos)
            return Rational(boost::multiprecision::cpp_int(s));
        boost::multiprecision::cpp_int num(s.substr(0, slash));
        boost::multiprecision::cpp_int den(s.substr(slash + 1));
        if (den < 0) {
            num = -num;
            den = -den;
        }
        if (den == 0)
            throw std::invalid_argument("zero denominator in \"" + s + "\"");
        return Rational(num, den);
    } catch (std::runtime_error const &) {
        throw std::invalid_argument("not a rational number: \"" + s + "\"");
    }
}

nlohmann::json to_json(MembershipVerdict const & v)
{
    nlohmann::json j{{"member", v.member}};
    j["mu"] = v.multiplier ? nlohmann::json(to_string(*v.multiplier)) : nlohmann::json(nullptr);
    return j;
}

}  // namespace bcsys
