#include "bcsys/groupoid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace bcsys {

bool GroupoidElement::is_valid() const
{
    if (sign != 1 && sign != -1)
        return false;
    BigInt const & b = g.den();
    return constraint.modulus % b == 0 && constraint.residue % b == 0;
}

namespace {

void require_key(PositiveRational const & g, std::int64_t level, std::int64_t residue)
{
    std::int64_t const b = g.den64();
    if (level % b != 0 || residue % b != 0) {
        throw std::invalid_argument("support key (" + g.to_string() + ", " + std::to_string(residue) + " mod "
                                    + std::to_string(level) + ") violates den(g) | rho");
    }
}

/* Dense per-g lookup tables at a fixed level. */
struct SliceTable
{
    PositiveRational g;
    std::vector<Complex> values;
};

std::vector<SliceTable> slices(HeckeElement const & f)
{
    std::vector<SliceTable> out;
    for (auto const & [key, value] : f.support()) {
        if (out.empty() || out.back().g != key.g)
            out.push_back({key.g, std::vector<Complex>(static_cast<std::size_t>(f.level()))});
        out.back().values[static_cast<std::size_t>(key.residue)] = value;
    }
    return out;
}

}  // namespace

HeckeElement::HeckeElement(std::int64_t level, Support support) : level_(level), support_(std::move(support)) {}

HeckeElement HeckeElement::canonical(std::int64_t level, Support support)
{
    std::erase_if(support, [](auto const & kv) { return kv.second == Complex(0.0, 0.0); });
    if (support.empty())
        return HeckeElement{};

    bool lowered = true;
    while (lowered && level > 1) {
        lowered = false;
        for (auto const & [p, k] : factorize(level)) {
            std::int64_t const coarse = level / p;
            bool ok = true;
            // Every class mod coarse must be either absent or present with p
            // equal lifts.
            std::map<HeckeKey, std::pair<int, Complex>> classes;
            for (auto const & [key, value] : support) {
                if (coarse % key.g.den64() != 0) {
                    ok = false;
                    break;
                }
                HeckeKey ck{key.g, key.residue % coarse};
                auto [it, inserted] = classes.try_emplace(ck, 0, value);
                if (it->second.second != value) {
                    ok = false;
                    break;
                }
                ++it->second.first;
            }
            if (!ok)
                continue;
            for (auto const & [ck, cv] : classes) {
                if (cv.first != p) {
                    ok = false;
                    break;
                }
            }
            if (!ok)
                continue;
            Support next;
            for (auto const & [ck, cv] : classes)
                next.emplace(ck, cv.second);
            support = std::move(next);
            level = coarse;
            lowered = true;
            break;
        }
    }
    return HeckeElement(level, std::move(support));
}

HeckeElement HeckeElement::from_entries(std::int64_t level, std::vector<HeckeEntry> const & entries)
{
    if (level < 1)
        throw std::invalid_argument("HeckeElement level must be positive");
    Support support;
    for (auto const & e : entries) {
        if (e.residue < 0 || e.residue >= level)
            throw std::invalid_argument("residue " + std::to_string(e.residue) + " outside [0, "
                                        + std::to_string(level) + ")");
        require_key(e.g, level, e.residue);
        support[HeckeKey{e.g, e.residue}] += e.value;
    }
    return canonical(level, std::move(support));
}

HeckeElement HeckeElement::indicator(PositiveRational const & g, ResidueClass cls, Complex value)
{
    return from_entries(cls.modulus, {HeckeEntry{g, cls.residue, value}});
}

HeckeElement HeckeElement::identity()
{
    return indicator(PositiveRational(1), ResidueClass{1, 0});
}

Complex HeckeElement::at(PositiveRational const & g, ResidueClass rho_class) const
{
    if (rho_class.modulus % level_ != 0)
        throw std::invalid_argument("evaluation point known mod " + std::to_string(rho_class.modulus)
                                    + " but the element has level " + std::to_string(level_));
    auto it = support_.find(HeckeKey{g, rho_class.residue % level_});
    return it == support_.end() ? Complex{} : it->second;
}

std::vector<PositiveRational> HeckeElement::group_support() const
{
    std::vector<PositiveRational> out;
    for (auto const & [key, value] : support_)
        if (out.empty() || out.back() != key.g)
            out.push_back(key.g);
    return out;
}

std::int64_t HeckeElement::height() const
{
    std::int64_t h = 1;
    for (auto const & [key, value] : support_)
        h = std::max(h, to_int64(key.g.height()));
    return h;
}

double HeckeElement::sup_norm() const
{
    double m = 0.0;
    for (auto const & [key, value] : support_)
        m = std::max(m, std::abs(value));
    return m;
}

double HeckeElement::l1_bound() const
{
    double total = 0.0;
    double slice_max = 0.0;
    PositiveRational const * current = nullptr;
    for (auto const & [key, value] : support_) {
        if (current && *current != key.g) {
            total += slice_max;
            slice_max = 0.0;
        }
        current = &key.g;
        slice_max = std::max(slice_max, std::abs(value));
    }
    return total + slice_max;
}

HeckeElement::Support HeckeElement::expanded(std::int64_t new_level) const
{
    if (new_level % level_ != 0)
        throw std::invalid_argument("cannot expand level " + std::to_string(level_) + " to "
                                    + std::to_string(new_level));
    Support out;
    std::int64_t const copies = new_level / level_;
    for (auto const & [key, value] : support_)
        for (std::int64_t j = 0; j < copies; ++j)
            out.emplace(HeckeKey{key.g, key.residue + j * level_}, value);
    return out;
}

std::vector<HeckeEntry> HeckeElement::entries() const
{
    std::vector<HeckeEntry> out;
    out.reserve(support_.size());
    for (auto const & [key, value] : support_)
        out.push_back({key.g, key.residue, value});
    return out;
}

HeckeElement operator+(HeckeElement const & a, HeckeElement const & b)
{
    std::int64_t const level = checked_lcm(a.level_, b.level_);
    auto support = a.expanded(level);
    for (auto const & [key, value] : b.expanded(level))
        support[key] += value;
    return HeckeElement::canonical(level, std::move(support));
}

HeckeElement operator*(Complex s, HeckeElement const & f)
{
    auto support = f.support_;
    for (auto & [key, value] : support)
        value *= s;
    return HeckeElement::canonical(f.level_, std::move(support));
}

double max_abs_difference(HeckeElement const & a, HeckeElement const & b)
{
    std::int64_t const level = checked_lcm(a.level(), b.level());
    auto sa = a.expanded(level);
    auto sb = b.expanded(level);
    double m = 0.0;
    for (auto const & [key, value] : sa) {
        auto it = sb.find(key);
        m = std::max(m, std::abs(value - (it == sb.end() ? Complex{} : it->second)));
    }
    for (auto const & [key, value] : sb)
        if (!sa.contains(key))
            m = std::max(m, std::abs(value));
    return m;
}

bool approx_equal(HeckeElement const & a, HeckeElement const & b, double tol)
{
    return max_abs_difference(a, b) <= tol;
}

/* Algebra operations */

HeckeElement convolve(HeckeElement const & f1, HeckeElement const & f2)
{
    if (f1.is_zero() || f2.is_zero())
        return HeckeElement{};

    std::int64_t const m1 = f1.level();
    std::int64_t const m2 = f2.level();
    // rho/den(h) must be known mod m1 to evaluate f1 at h*rho.
    std::int64_t level = m2;
    for (auto const & h : f2.group_support())
        level = checked_lcm(level, checked_mul(m1, h.den64()));

    auto const table1 = slices(f1);
    HeckeElement::Support out;
    for (auto const & [key2, c2] : f2.support()) {
        std::int64_t const a2 = key2.g.num64();
        std::int64_t const b2 = key2.g.den64();
        std::vector<PositiveRational> products;
        products.reserve(table1.size());
        for (auto const & slice : table1)
            products.push_back(slice.g * key2.g);
        for (std::int64_t s = key2.residue; s < level; s += m2) {
            std::int64_t const target = mul_mod(a2, s / b2, m1);
            for (std::size_t i = 0; i < table1.size(); ++i) {
                Complex const c1 = table1[i].values[static_cast<std::size_t>(target)];
                if (c1 != Complex(0.0, 0.0))
                    out[HeckeKey{products[i], s}] += c1 * c2;
            }
        }
    }
    return HeckeElement::from_entries(level, [&] {
        std::vector<HeckeEntry> entries;
        entries.reserve(out.size());
        for (auto const & [key, value] : out)
            entries.push_back({key.g, key.residue, value});
        return entries;
    }());
}

HeckeElement adjoint(HeckeElement const & f)
{
    if (f.is_zero())
        return f;
    std::int64_t const m = f.level();
    std::int64_t level = m;
    for (auto const & g : f.group_support())
        level = checked_lcm(level, checked_mul(g.num64(), m / g.den64()));

    std::vector<HeckeEntry> entries;
    for (auto const & [key, value] : f.support()) {
        std::int64_t const a = key.g.num64();
        std::int64_t const b = key.g.den64();
        // {g rho : rho = r mod m} = {s : s = a r / b mod a m / b}.
        std::int64_t const step = checked_mul(a, m / b);
        std::int64_t const start = mod_floor(checked_mul(a, key.residue / b), step);
        PositiveRational const inv = key.g.inverse();
        for (std::int64_t s = start; s < level; s += step)
            entries.push_back({inv, s, std::conj(value)});
    }
    return HeckeElement::from_entries(level, entries);
}

HeckeElement time_evolve(HeckeElement const & f, double t)
{
    std::vector<HeckeEntry> entries = f.entries();
    for (auto & e : entries)
        e.value *= std::polar(1.0, t * e.g.log());
    return HeckeElement::from_entries(f.level(), entries);
}

HeckeElement analytic_evolve(HeckeElement const & f, double beta)
{
    std::vector<HeckeEntry> entries = f.entries();
    for (auto & e : entries)
        if (!e.g.is_one())
            e.value *= std::exp(-beta * e.g.log());
    return HeckeElement::from_entries(f.level(), entries);
}

HeckeElement symmetry_act(HeckeElement const & f, SymmetryElement s)
{
    if (s.n < 1)
        throw std::invalid_argument("symmetry n must be a positive integer");
    if (s.sign != 1 && s.sign != -1)
        throw std::invalid_argument("archimedean sign must be +1 or -1");
    std::int64_t const m = f.level();
    std::vector<HeckeEntry> entries;
    for (auto const & g : f.group_support()) {
        std::int64_t const b = g.den64();
        for (std::int64_t r = 0; r < m; r += b) {
            Complex const v = f.at(g, ResidueClass{m, mul_mod(r, s.n, m)});
            if (v != Complex(0.0, 0.0))
                entries.push_back({g, r, v});
        }
    }
    return HeckeElement::from_entries(m, entries);
}

HeckeElement inner_mu(std::int64_t n, std::int64_t level)
{
    if (n < 1)
        throw std::invalid_argument("inner_mu needs n >= 1");
    if (level < 1)
        throw std::invalid_argument("inner_mu level must be positive");
    // The requested level only refines the representation; the canonical form
    // is level independent.
    std::int64_t const fine = checked_lcm(n, level);
    std::vector<HeckeEntry> entries;
    PositiveRational const g(BigInt(1), BigInt(n));
    for (std::int64_t r = 0; r < fine; r += n)
        entries.push_back({g, r, 1.0});
    return HeckeElement::from_entries(fine, entries);
}

/* Orbits */

namespace {

class UnionFind
{
    std::vector<std::int64_t> parent_;

  public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::int64_t find(std::int64_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::int64_t a, std::int64_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent_[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

OrbitPartition coarse_orbits(std::int64_t level, std::int64_t bound)
{
    if (level < 1 || bound < 1)
        throw std::invalid_argument("coarse_orbits needs level >= 1 and bound >= 1");
    auto node = [level](std::int64_t r, int z) { return z > 0 ? r : level + r; };
    UnionFind uf(static_cast<std::size_t>(2 * level));
    for (std::int64_t a = 1; a <= bound; ++a) {
        for (std::int64_t b = 1; b <= bound; ++b) {
            if (std::gcd(a, b) != 1)
                continue;
            for (std::int64_t r = 0; r < level; ++r) {
                // Lifts of r to Z/(b level) divisible by b.
                for (std::int64_t j = 0; j < b; ++j) {
                    std::int64_t const rho = r + level * j;
                    if (rho % b != 0)
                        continue;
                    std::int64_t const s = mul_mod(a, rho / b, level);
                    for (int z : {1, -1}) {
                        uf.unite(node(r, z), node(s, z));
                        uf.unite(node(r, z), node(mod_floor(-s, level), -z));
                    }
                }
            }
        }
    }
    std::map<std::int64_t, std::vector<UnitPoint>> groups;
    for (std::int64_t r = 0; r < level; ++r)
        for (int z : {-1, 1})
            groups[uf.find(node(r, z))].push_back(UnitPoint{r, z});
    OrbitPartition out;
    for (auto & [root, pts] : groups) {
        std::sort(pts.begin(), pts.end());
        out.push_back(std::move(pts));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/* Presentation isomorphism */

namespace {

struct SmallRational
{
    std::int64_t a;
    std::int64_t b;
};

struct PrincipalElement
{
    int s;  // sign of g
    std::int64_t a;
    std::int64_t b;
    std::int64_t rho;
    int z;

    friend bool operator==(PrincipalElement const &, PrincipalElement const &) = default;
};

struct PrincipalHash
{
    std::size_t operator()(PrincipalElement const & e) const
    {
        std::size_t h = std::hash<std::int64_t>{}(e.a);
        h = h * 1000003u ^ std::hash<std::int64_t>{}(e.b);
        h = h * 1000003u ^ std::hash<std::int64_t>{}(e.rho);
        h = h * 1000003u ^ static_cast<std::size_t>(e.s + 2) * 7u ^ static_cast<std::size_t>(e.z + 2);
        return h;
    }
};

std::string describe(PrincipalElement const & e)
{
    std::ostringstream os;
    os << "(" << (e.s < 0 ? "-" : "") << e.a << "/" << e.b << ", " << e.rho << ", " << e.z << ")";
    return os.str();
}

}  // namespace

IsomorphismReport presentation_isomorphism_check(std::int64_t level, std::int64_t bound)
{
    if (level < 1 || bound < 1)
        throw std::invalid_argument("iso-check needs level >= 1 and bound >= 1");
    IsomorphismReport report;
    report.level = level;
    report.bound = bound;

    std::vector<SmallRational> gs;
    for (std::int64_t a = 1; a <= bound; ++a)
        for (std::int64_t b = 1; b <= bound; ++b)
            if (std::gcd(a, b) == 1)
                gs.push_back({a, b});

    // Classical fragment: (g, rho), rho an integer in (-level, level), den(g) | rho.
    struct Classical
    {
        std::int64_t a, b, rho;
    };
    std::vector<Classical> classical;
    std::map<std::int64_t, std::vector<std::size_t>> classical_by_source;
    for (auto const & g : gs)
        for (std::int64_t rho = -(level - 1); rho < level; ++rho)
            if (rho % g.b == 0) {
                classical_by_source[rho].push_back(classical.size());
                classical.push_back({g.a, g.b, rho});
            }

    // Principal fragment and its {+-1}^2 orbits.
    std::vector<PrincipalElement> principal;
    std::unordered_map<PrincipalElement, std::size_t, PrincipalHash> index;
    for (auto const & c : classical)
        for (int s : {1, -1})
            for (int z : {1, -1}) {
                PrincipalElement e{s, c.a, c.b, c.rho, z};
                index.emplace(e, principal.size());
                principal.push_back(e);
            }
    UnionFind uf(principal.size());
    for (std::size_t i = 0; i < principal.size(); ++i) {
        auto const & e = principal[i];
        for (int g1 : {1, -1})
            for (int g2 : {1, -1}) {
                PrincipalElement moved{g1 * e.s * g2, e.a, e.b, g2 * e.rho, g2 * e.z};
                auto it = index.find(moved);
                if (it == index.end()) {
                    report.mismatches.push_back("fragment not closed under {+-1}^2 at " + describe(e));
                    continue;
                }
                uf.unite(static_cast<std::int64_t>(i), static_cast<std::int64_t>(it->second));
            }
    }
    std::vector<std::int64_t> root(principal.size());
    std::map<std::int64_t, std::vector<std::size_t>> orbits;
    for (std::size_t i = 0; i < principal.size(); ++i) {
        root[i] = uf.find(static_cast<std::int64_t>(i));
        orbits[root[i]].push_back(i);
    }

    report.classical_elements = static_cast<std::int64_t>(classical.size());
    report.principal_elements = static_cast<std::int64_t>(principal.size());
    report.quotient_elements = static_cast<std::int64_t>(orbits.size());

    // Unit space (rho, z) modulo (rho, z) ~ (-rho, -z); canonical key z*rho.
    auto unit_key = [](std::int64_t rho, int z) { return z * rho; };
    auto source_key = [&](PrincipalElement const & e) { return unit_key(e.rho, e.z); };
    auto target_key = [&](PrincipalElement const & e) { return unit_key(e.s * e.a * (e.rho / e.b), e.s * e.z); };

    // The map (g, rho) -> [(g, rho, 1)].
    auto image = [&](Classical const & c) {
        return root[index.at(PrincipalElement{1, c.a, c.b, c.rho, 1})];
    };

    std::map<std::int64_t, std::int64_t> hits;
    for (auto const & c : classical) {
        std::int64_t const o = image(c);
        ++hits[o];
        // Source and target must be constant on the orbit and match the classical ones.
        for (std::size_t member : orbits.at(o)) {
            auto const & e = principal[member];
            if (source_key(e) != c.rho || target_key(e) != c.a * (c.rho / c.b)) {
                report.mismatches.push_back("source/target mismatch for classical (" + std::to_string(c.a) + "/"
                                            + std::to_string(c.b) + ", " + std::to_string(c.rho) + ") at member "
                                            + describe(e));
            }
        }
    }
    for (auto const & [root, members] : orbits) {
        auto it = hits.find(root);
        if (it == hits.end())
            report.mismatches.push_back("orbit of " + describe(principal[members.front()]) + " not in the image");
        else if (it->second != 1)
            report.mismatches.push_back("orbit of " + describe(principal[members.front()]) + " hit "
                                        + std::to_string(it->second) + " times");
    }

    // Composition on the classical side, transported, versus composition in
    // the quotient.
    std::int64_t classical_pairs = 0;
    std::vector<std::string> comp_mismatches;
#pragma omp parallel for schedule(dynamic, 64) reduction(+ : classical_pairs)
    for (std::size_t i = 0; i < classical.size(); ++i) {
        auto const & c1 = classical[i];
        std::int64_t const tau = c1.a * (c1.rho / c1.b);
        auto it = classical_by_source.find(tau);
        if (it == classical_by_source.end())
            continue;
        for (std::size_t j : it->second) {
            auto const & c2 = classical[j];
            std::int64_t a = c2.a * c1.a, b = c2.b * c1.b;
            std::int64_t const g = std::gcd(a, b);
            a /= g;
            b /= g;
            if (a > bound || b > bound)
                continue;
            ++classical_pairs;
            std::int64_t const expected = image(Classical{a, b, c1.rho});
            // Quotient composition: pick a member of [c2] whose source is
            // exactly the target of the chosen member of [c1].
            PrincipalElement const u1{1, c1.a, c1.b, c1.rho, 1};
            std::int64_t composite = -1;
            for (std::size_t member : orbits.at(image(c2))) {
                auto const & u2 = principal[member];
                if (u2.rho == tau && u2.z == u1.s * u1.z) {
                    PrincipalElement const comp{u2.s * u1.s, a, b, u1.rho, u1.z};
                    composite = root[index.at(comp)];
                    break;
                }
            }
            if (composite != expected) {
#pragma omp critical
                comp_mismatches.push_back("composition mismatch: (" + std::to_string(c2.a) + "/"
                                          + std::to_string(c2.b) + ") o (" + std::to_string(c1.a) + "/"
                                          + std::to_string(c1.b) + ", " + std::to_string(c1.rho) + ")");
            }
        }
    }
    report.classical_composable = classical_pairs;

    // Composable pairs counted intrinsically in the quotient.
    std::map<std::int64_t, std::vector<std::int64_t>> orbits_by_source;
    for (auto const & [root, members] : orbits)
        orbits_by_source[source_key(principal[members.front()])].push_back(root);
    std::int64_t quotient_pairs = 0;
    for (auto const & [root, members] : orbits) {
        auto const & u1 = principal[members.front()];
        auto it = orbits_by_source.find(target_key(u1));
        if (it == orbits_by_source.end())
            continue;
        for (std::int64_t root2 : it->second) {
            auto const & u2 = principal[orbits.at(root2).front()];
            std::int64_t a = u2.a * u1.a, b = u2.b * u1.b;
            std::int64_t const g = std::gcd(a, b);
            if (a / g <= bound && b / g <= bound)
                ++quotient_pairs;
        }
    }
    report.quotient_composable = quotient_pairs;
    if (quotient_pairs != classical_pairs)
        report.mismatches.push_back("composable pair counts differ: classical " + std::to_string(classical_pairs)
                                    + " vs quotient " + std::to_string(quotient_pairs));

    std::sort(comp_mismatches.begin(), comp_mismatches.end());
    report.mismatches.insert(report.mismatches.end(), comp_mismatches.begin(), comp_mismatches.end());
    return report;
}

/* JSON */

namespace {

nlohmann::json big_to_json(BigInt const & x)
{
    if (x <= BigInt(std::numeric_limits<std::int64_t>::max()))
        return static_cast<std::int64_t>(x);
    return x.str();
}

BigInt big_from_json(nlohmann::json const & j)
{
    if (j.is_number_integer())
        return BigInt(j.get<std::int64_t>());
    if (j.is_string())
        return BigInt(j.get<std::string>());
    throw std::invalid_argument("expected an integer or a decimal string in HeckeElement JSON");
}

}  // namespace

nlohmann::json to_json(HeckeElement const & f)
{
    nlohmann::json entries = nlohmann::json::array();
    for (auto const & [key, value] : f.support()) {
        entries.push_back({{"num", big_to_json(key.g.num())},
                           {"den", big_to_json(key.g.den())},
                           {"residue", key.residue},
                           {"re", value.real()},
                           {"im", value.imag()}});
    }
    return {{"level", f.level()}, {"entries", entries}};
}

HeckeElement hecke_from_json(nlohmann::json const & j)
{
    try {
        std::int64_t const level = j.at("level").get<std::int64_t>();
        std::vector<HeckeEntry> entries;
        for (auto const & e : j.at("entries")) {
            entries.push_back({PositiveRational(big_from_json(e.at("num")), big_from_json(e.at("den"))),
                               e.at("residue").get<std::int64_t>(),
                               Complex(e.at("re").get<double>(), e.value("im", 0.0))});
        }
        return HeckeElement::from_entries(level, entries);
    } catch (nlohmann::json::exception const & ex) {
        throw std::invalid_argument(std::string("malformed HeckeElement JSON: ") + ex.what());
    }
}

nlohmann::json to_json(IsomorphismReport const & r)
{
    return {{"level", r.level},
            {"bound", r.bound},
            {"classical_elements", r.classical_elements},
            {"principal_elements", r.principal_elements},
            {"quotient_elements", r.quotient_elements},
            {"classical_composable", r.classical_composable},
            {"quotient_composable", r.quotient_composable},
            {"bijection", r.ok()},
            {"mismatches", r.mismatches}};
}

nlohmann::json to_json(OrbitPartition const & orbits)
{
    nlohmann::json out = nlohmann::json::array();
    for (auto const & orbit : orbits) {
        nlohmann::json o = nlohmann::json::array();
        for (auto const & p : orbit)
            o.push_back({p.residue, p.sign});
        out.push_back(o);
    }
    return out;
}

}  // namespace bcsys
