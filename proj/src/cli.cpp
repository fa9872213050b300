#include "bcsys/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "bcsys/dirichlet.hpp"
#include "bcsys/envelope.hpp"
#include "bcsys/groupoid.hpp"
#include "bcsys/lattice_gl2.hpp"
#include "bcsys/numberfield.hpp"
#include "bcsys/random.hpp"
#include "bcsys/spectral.hpp"

namespace bcsys::cli {

namespace {

using nlohmann::json;

/* Failure of a numerical check; carries the report that shows the residual. */
struct CheckFailure
{
    json report;
};

void dump_number(double x, std::string & out)
{
    if (!std::isfinite(x)) {
        out += "null";
        return;
    }
    out += fmt::format("{:.17g}", x);
}

void dump(json const & j, std::string & out)
{
    switch (j.type()) {
    case json::value_t::object: {
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first)
                out += ',';
            first = false;
            out += json(it.key()).dump();
            out += ':';
            dump(it.value(), out);
        }
        out += '}';
        break;
    }
    case json::value_t::array: {
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i)
                out += ',';
            dump(j[i], out);
        }
        out += ']';
        break;
    }
    case json::value_t::number_float:
        dump_number(j.get<double>(), out);
        break;
    default:
        out += j.dump();
    }
}

std::string csv_cell(json const & v)
{
    if (v.is_string())
        return v.get<std::string>();
    std::string s;
    dump(v, s);
    if (v.is_structured()) {
        std::string quoted = "\"";
        for (char c : s)
            quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        return quoted + "\"";
    }
    return s;
}

std::string csv_table(std::vector<json> const & rows)
{
    if (rows.empty())
        return "";
    std::vector<std::string> header;
    for (auto it = rows.front().begin(); it != rows.front().end(); ++it)
        header.push_back(it.key());
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i)
        out += (i ? "," : "") + header[i];
    out += '\n';
    for (auto const & row : rows) {
        for (std::size_t i = 0; i < header.size(); ++i)
            out += (i ? "," : "") + (row.contains(header[i]) ? csv_cell(row[header[i]]) : std::string());
        out += '\n';
    }
    return out;
}

std::int64_t parse_count(std::string const & text, char const * what)
{
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (std::exception const &) {
        used = 0;
    }
    if (used != text.size() || !(v >= 1) || v != std::floor(v) || v > 9.0e15)
        throw std::invalid_argument(std::string(what) + " must be a positive integer, got \"" + text + "\"");
    return static_cast<std::int64_t>(v);
}

HeckeElement load_element(std::string const & spec)
{
    if (spec.empty())
        return HeckeElement::identity();
    json j;
    if (spec.front() == '{') {
        j = json::parse(spec);
    } else {
        std::ifstream in(spec);
        if (!in)
            throw std::invalid_argument("cannot open element file \"" + spec + "\"");
        j = json::parse(in);
    }
    return hecke_from_json(j);
}

json complex_fields(Complex z, char const * prefix)
{
    return {{std::string(prefix) + "_re", z.real()}, {std::string(prefix) + "_im", z.imag()}};
}

void require_beta_above(double beta, double bound)
{
    if (!(beta > bound))
        throw std::domain_error(fmt::format("beta must exceed {} (got {})", bound, beta));
}

/* Flag values shared by all subcommands. */
struct Config
{
    double beta = 2.0;
    std::string cutoff;
    std::int64_t level = 1;
    std::int64_t disc = 0;
    std::int64_t modulus = 1;
    std::int64_t bound = 1;
    std::string format = "json";
    std::string out;
    std::optional<double> tolerance;
    std::vector<std::string> elements;
    std::int64_t base_level = 1;
    std::int64_t base_residue = 0;
    std::int64_t samples = 0;
    std::uint64_t seed = 1;
    std::vector<std::int64_t> ns;
    std::optional<std::int64_t> index;
    std::optional<std::size_t> genus;
    std::string matrix;
    bool gl2 = false;
    std::string source = "sigma";
    std::optional<double> exponent;

    std::int64_t cutoff_or(std::int64_t fallback) const
    {
        return cutoff.empty() ? fallback : parse_count(cutoff, "cutoff");
    }
    double tolerance_or(double fallback) const { return tolerance.value_or(fallback); }
    BasePoint base() const { return BasePoint::make(ResidueClass::make(base_level, base_residue)); }
};

json cmd_zeta(Config const & c)
{
    require_beta_above(c.beta, 1.0);
    return to_json(partition_function(c.beta, c.cutoff_or(10000)));
}

json cmd_dedekind(Config const & c)
{
    require_beta_above(c.beta, 1.0);
    auto const field = QuadraticField::make(c.disc);
    std::int64_t const cutoff = c.cutoff_or(10000);
    auto const zf = dedekind_zeta(field, c.beta, cutoff);
    auto const z = partition_function(c.beta, cutoff);
    auto const l = dirichlet_L(kronecker_character(field.discriminant()), c.beta, cutoff);
    Complex const product = z.value * l.value;
    double const tolerance = zf.tail_bound + std::abs(z.value) * l.tail_bound + std::abs(l.value) * z.tail_bound
                             + z.tail_bound * l.tail_bound;
    json r = to_json(zf);
    r["d"] = c.disc;
    r["factorization"] = {{"zeta_times_L_re", product.real()},
                          {"zeta_times_L_im", product.imag()},
                          {"residual", std::abs(zf.value - product)},
                          {"tolerance", tolerance}};
    if (std::abs(zf.value - product) > tolerance)
        throw CheckFailure{r};
    return r;
}

json cmd_dirichlet_l(Config const & c)
{
    std::int64_t const cutoff = c.cutoff_or(10000);
    std::vector<DirichletCharacter> chars;
    if (c.disc != 0) {
        chars.push_back(kronecker_character(FundamentalDiscriminant::make(c.disc)));
    } else {
        if (c.modulus < 1)
            throw std::invalid_argument("modulus must be at least 1");
        chars = characters_mod(c.modulus);
        if (c.index) {
            if (*c.index < 0 || *c.index >= static_cast<std::int64_t>(chars.size()))
                throw std::invalid_argument(
                    fmt::format("index must lie in [0, {}) for modulus {}", chars.size(), c.modulus));
            chars = {chars[static_cast<std::size_t>(*c.index)]};
        }
    }
    double const tol = c.tolerance_or(1e-12);
    json rows = json::array();
    double worst = 0.0;
    for (std::size_t i = 0; i < chars.size(); ++i) {
        auto const & chi = chars[i];
        auto const series = dirichlet_L(chi, c.beta, cutoff);
        Complex const trace = twisted_trace(chi, c.beta, cutoff);
        double const dev = std::abs(series.value - trace);
        worst = std::max(worst, dev);
        json row = to_json(series);
        row.update(complex_fields(trace, "trace"));
        row["deviation"] = dev;
        row["character"] = to_json(chi);
        rows.push_back(row);
    }
    json r{{"beta", c.beta}, {"cutoff", cutoff}, {"rows", rows}, {"max_deviation", worst}, {"tolerance", tol}};
    if (worst > tol)
        throw CheckFailure{r};
    return r;
}

json cmd_gl2(Config const & c)
{
    require_beta_above(c.beta, 2.0);
    CoefficientSource source;
    if (c.source == "sigma")
        source = CoefficientSource::sigma_formula;
    else if (c.source == "hnf")
        source = CoefficientSource::hnf_enumeration;
    else
        throw std::invalid_argument("source must be sigma or hnf");
    json r = to_json(gl2_partition(c.beta, c.cutoff_or(10000), source));
    r["source"] = c.source;
    return r;
}

json cmd_hilbert(Config const & c)
{
    require_beta_above(c.beta, 2.0);
    auto const field = QuadraticField::make(c.disc);
    json r = to_json(hilbert_partition(field, c.beta, c.cutoff_or(10000)));
    r["d"] = c.disc;
    return r;
}

json cmd_gibbs(Config const & c)
{
    require_beta_above(c.beta, 1.0);
    auto const state = make_gibbs_state(c.beta, c.base(), c.cutoff_or(10000));
    auto const f = load_element(c.elements.empty() ? std::string() : c.elements.front());
    auto const v = gibbs_evaluate(state, f);
    json r = complex_fields(v.value, "value");
    r["error_bound"] = v.error_bound;
    r["beta"] = c.beta;
    r["cutoff"] = state.cutoff;
    return r;
}

json cmd_kms(Config const & c)
{
    require_beta_above(c.beta, 1.0);
    auto const state = make_gibbs_state(c.beta, c.base(), c.cutoff_or(10000));
    std::vector<std::pair<HeckeElement, HeckeElement>> pairs;
    if (c.elements.size() == 2)
        pairs.emplace_back(load_element(c.elements[0]), load_element(c.elements[1]));
    else if (!c.elements.empty())
        throw std::invalid_argument("kms-check takes exactly two --element values or none");
    std::int64_t const samples = c.elements.empty() ? (c.samples > 0 ? c.samples : 100) : 0;
    std::mt19937_64 rng(c.seed);
    RandomHeckeSpec spec;
    spec.real_coefficients = true;
    for (std::int64_t i = 0; i < samples; ++i) {
        pairs.push_back(random_overlapping_pair(rng, spec));
    }
    json rows = json::array();
    bool all_ok = true;
    double worst = 0.0;
    for (auto const & [a, b] : pairs) {
        auto const k = kms_check(state, a, b);
        all_ok = all_ok && k.ok();
        worst = std::max(worst, k.residual);
        json row = complex_fields(k.lhs, "lhs");
        row.update(complex_fields(k.rhs, "rhs"));
        row["residual"] = k.residual;
        row["tolerance"] = k.tolerance;
        rows.push_back(row);
    }
    json r{{"beta", c.beta},   {"cutoff", state.cutoff}, {"rows", rows},
           {"all_ok", all_ok}, {"max_residual", worst},  {"seed", c.seed}};
    if (!all_ok)
        throw CheckFailure{r};
    return r;
}

json cmd_symmetry(Config const & c)
{
    std::int64_t const cutoff = c.cutoff_or(64);
    std::vector<std::int64_t> const ns = c.ns.empty() ? std::vector<std::int64_t>{2, 3, 5} : c.ns;
    std::int64_t const samples = c.samples > 0 ? c.samples : 50;
    double const tol = c.tolerance_or(1e-12);
    BasePoint const base = c.base();
    std::mt19937_64 rng(c.seed);
    RandomHeckeSpec spec;
    spec.real_coefficients = true;

    json rows = json::array();
    double worst = 0.0;
    bool structural = true;
    for (std::int64_t n : ns) {
        if (n < 1)
            throw std::invalid_argument("symmetry index n must be positive");
        auto const mu = inner_mu(n);
        ComplexMatrix const m = represent(mu, base, cutoff).matrix;
        std::int64_t const block = cutoff / n;
        double dev_n = 0.0;
        bool structural_n = true;
        for (std::int64_t s = 0; s < samples; ++s) {
            auto const f = random_hecke(rng, spec);
            auto const theta = symmetry_act(f, SymmetryElement{n, 1});
            structural_n = structural_n && approx_equal(theta, convolve(convolve(mu, f), adjoint(mu)), tol);
            ComplexMatrix const lhs = represent(theta, base, cutoff).matrix;
            ComplexMatrix const rhs = m * represent(f, base, cutoff).matrix * m.adjoint();
            if (block > 0)
                dev_n = std::max(dev_n, (lhs.topLeftCorner(block, block) - rhs.topLeftCorner(block, block))
                                            .cwiseAbs()
                                            .maxCoeff());
        }
        worst = std::max(worst, dev_n);
        structural = structural && structural_n;
        rows.push_back({{"n", n}, {"interior_block", block}, {"max_deviation", dev_n}, {"structural", structural_n}});
    }
    json r{{"cutoff", cutoff}, {"samples", samples}, {"rows", rows}, {"max_deviation", worst},
           {"structural", structural}, {"tolerance", tol}, {"seed", c.seed}};
    if (worst > tol || !structural)
        throw CheckFailure{r};
    return r;
}

json cmd_orbit(Config const & c)
{
    auto const orbits = coarse_orbits(c.level, c.bound);
    return {{"level", c.level}, {"bound", c.bound}, {"count", orbits.size()}, {"orbits", to_json(orbits)}};
}

json cmd_iso(Config const & c)
{
    auto const report = presentation_isomorphism_check(c.level, c.bound);
    json r = to_json(report);
    if (!report.ok())
        throw CheckFailure{r};
    return r;
}

json cmd_class_group(Config const & c)
{
    if (c.disc > 0) {
        auto const field = QuadraticField::make(c.disc);
        return {{"d", c.disc}, {"class_number_one", has_class_number_one(field)}};
    }
    return to_json(class_group(c.disc));
}

json cmd_msp(Config const & c)
{
    if (c.matrix.empty())
        throw std::invalid_argument("--matrix is required");
    json j;
    if (c.matrix.front() == '[') {
        j = json::parse(c.matrix);
    } else {
        std::ifstream in(c.matrix);
        if (!in)
            throw std::invalid_argument("cannot open matrix file \"" + c.matrix + "\"");
        j = json::parse(in);
    }
    auto const m = RationalMatrix::from_json(j);
    if (c.gl2) {
        json r = to_json(gl2_envelope_check(m));
        r["semigroup"] = "M2";
        return r;
    }
    if (m.rows() % 2 != 0 && !c.genus)
        throw std::invalid_argument("matrix dimension must be even for MSp");
    SymplecticSpace const space(c.genus.value_or(m.rows() / 2));
    json r = to_json(msp_membership(space, m));
    r["genus"] = space.genus();
    r["semigroup"] = "MSp";
    return r;
}

json cmd_gns(Config const & c)
{
    require_beta_above(c.beta, 1.0);
    std::int64_t const sample = c.cutoff_or(64);
    auto const state = make_gibbs_state(c.beta, c.base(), sample);
    auto const f = load_element(c.elements.empty() ? std::string() : c.elements.front());
    auto const rep = c.exponent ? gns_check(state, f, sample, *c.exponent) : gns_check(state, f, sample);
    double const tol = c.tolerance_or(1e-10);
    json r = complex_fields(rep.gns_value, "gns");
    r.update(complex_fields(rep.state_value, "state"));
    r["deviation"] = rep.deviation;
    r["sample"] = rep.sample;
    r["weight_exponent"] = rep.weight_exponent;
    r["tolerance"] = tol;
    r["beta"] = c.beta;
    if (rep.deviation > tol)
        throw CheckFailure{r};
    return r;
}

json cmd_norm(Config const & c)
{
    auto const f = load_element(c.elements.empty() ? std::string() : c.elements.front());
    auto const nb = norm_bound(f, c.base(), c.cutoff_or(64));
    double const tol = c.tolerance_or(1e-9);
    json r{{"estimate", nb.estimate}, {"l1_bound", nb.l1_bound}, {"iterations", nb.iterations},
           {"cutoff", c.cutoff_or(64)}, {"tolerance", tol}};
    if (nb.estimate > nb.l1_bound * (1.0 + tol))
        throw CheckFailure{r};
    return r;
}

void emit(json const & report, Config const & c, std::ostream & out)
{
    std::string const text = c.format == "csv" ? dump_csv(report) : dump_json(report) + "\n";
    if (c.out.empty()) {
        out << text;
        return;
    }
    std::ofstream file(c.out, std::ios::binary);
    if (!file)
        throw std::invalid_argument("cannot open output file \"" + c.out + "\"");
    file << text;
}

}  // namespace

std::string dump_json(nlohmann::json const & j)
{
    std::string out;
    dump(j, out);
    return out;
}

std::string dump_csv(nlohmann::json const & j)
{
    if (j.is_object() && j.contains("rows") && j["rows"].is_array()) {
        std::vector<json> rows(j["rows"].begin(), j["rows"].end());
        return csv_table(rows);
    }
    return csv_table({j});
}

int run(std::vector<std::string> const & args, std::ostream & out, std::ostream & err)
{
    CLI::App app{"Bost-Connes systems: partition functions, KMS states and arithmetic checks", "bcsys"};
    app.require_subcommand(1);
    Config c;

    auto add_beta = [&](CLI::App * s, bool required) {
        auto * o = s->add_option("--beta", c.beta, "inverse temperature");
        if (required)
            o->required();
    };
    auto add_cutoff = [&](CLI::App * s) { s->add_option("--cutoff", c.cutoff, "truncation, e.g. 10000 or 1e4"); };
    auto add_disc = [&](CLI::App * s, bool required) {
        auto * o = s->add_option("-d,--disc", c.disc, "fundamental discriminant");
        if (required)
            o->required();
    };
    auto add_base = [&](CLI::App * s) {
        s->add_option("--base-level", c.base_level, "modulus of the invertible base point");
        s->add_option("--base-residue", c.base_residue, "unit residue of the base point");
    };
    auto add_tol = [&](CLI::App * s) { s->add_option("--tolerance", c.tolerance, "check tolerance"); };
    auto add_element = [&](CLI::App * s) {
        s->add_option("--element", c.elements, "HeckeElement JSON file or inline JSON");
    };

    std::vector<std::pair<CLI::App *, json (*)(Config const &)>> commands;
    auto sub = [&](char const * name, char const * help, json (*fn)(Config const &)) {
        auto * s = app.add_subcommand(name, help);
        s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        s->add_option("--out", c.out, "write the report to this file");
        commands.emplace_back(s, fn);
        return s;
    };

    auto * zeta = sub("zeta", "partial sums of the Riemann partition function", cmd_zeta);
    add_beta(zeta, true);
    add_cutoff(zeta);

    auto * ded = sub("dedekind", "Dedekind zeta of a quadratic field with the factorization check", cmd_dedekind);
    add_beta(ded, true);
    add_cutoff(ded);
    add_disc(ded, true);
    add_tol(ded);

    auto * dl = sub("dirichlet-l", "Dirichlet L-series against the twisted trace", cmd_dirichlet_l);
    add_beta(dl, true);
    add_cutoff(dl);
    add_disc(dl, false);
    dl->add_option("--modulus", c.modulus, "modulus m; all characters mod m unless --index is given");
    dl->add_option("--index", c.index, "position in the character list mod m");
    add_tol(dl);

    auto * gl2 = sub("gl2-partition", "sum sigma_1(n) n^-beta for the modular pair", cmd_gl2);
    add_beta(gl2, true);
    add_cutoff(gl2);
    gl2->add_option("--source", c.source, "sigma or hnf coefficients");

    auto * hil = sub("hilbert-partition", "zeta_F(beta) zeta_F(beta-1) for a real quadratic field", cmd_hilbert);
    add_beta(hil, true);
    add_cutoff(hil);
    add_disc(hil, true);

    auto * kms = sub("kms-check", "KMS residuals for random or given pairs", cmd_kms);
    add_beta(kms, true);
    add_cutoff(kms);
    add_base(kms);
    add_element(kms);
    kms->add_option("--samples", c.samples, "number of random pairs (default 100)");
    kms->add_option("--seed", c.seed, "random seed");

    auto * gib = sub("gibbs", "Gibbs state value of an element", cmd_gibbs);
    add_beta(gib, true);
    add_cutoff(gib);
    add_base(gib);
    add_element(gib);

    auto * sym = sub("symmetry-check", "inner symmetries against conjugation by mu_n", cmd_symmetry);
    add_cutoff(sym);
    add_base(sym);
    add_tol(sym);
    sym->add_option("--n", c.ns, "symmetry indices (default 2 3 5)");
    sym->add_option("--samples", c.samples, "random elements per n (default 50)");
    sym->add_option("--seed", c.seed, "random seed");

    auto * orb = sub("orbit", "orbits of the finite unit space", cmd_orbit);
    orb->add_option("--level", c.level, "modulus M")->required()->check(CLI::Range(std::int64_t{1}, std::int64_t{100000}));
    orb->add_option("--bound", c.bound, "height bound B")->required()->check(CLI::PositiveNumber);

    auto * iso = sub("iso-check", "finite-fragment presentation isomorphism", cmd_iso);
    iso->add_option("--level", c.level, "modulus M")->required()->check(CLI::Range(std::int64_t{1}, std::int64_t{10000}));
    iso->add_option("--bound", c.bound, "height bound B")->required()->check(CLI::PositiveNumber);

    auto * cg = sub("class-group", "reduced forms of an imaginary quadratic discriminant", cmd_class_group);
    add_disc(cg, true);

    auto * msp = sub("msp-check", "membership in MSp_2g or the GL2 envelope", cmd_msp);
    msp->add_option("--matrix", c.matrix, "JSON rows of rational strings, inline or a file")->required();
    msp->add_option("--genus", c.genus, "g (default: half the matrix size)");
    msp->add_flag("--gl2", c.gl2, "test membership in M2 via the wedge-square line");

    auto * gns = sub("gns-check", "GNS vector against the Gibbs state", cmd_gns);
    add_beta(gns, true);
    add_cutoff(gns);
    add_base(gns);
    add_element(gns);
    add_tol(gns);
    gns->add_option("--exponent", c.exponent, "weight exponent (default -beta/2)");

    auto * nb = sub("norm-bound", "power-iteration operator norm against the l1 bound", cmd_norm);
    add_cutoff(nb);
    add_base(nb);
    add_element(nb);
    add_tol(nb);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (CLI::CallForHelp const &) {
        out << app.help();
        return ok;
    } catch (CLI::ParseError const & e) {
        err << "error: " << e.what() << "\n" << app.help();
        return validation_error;
    }

    for (auto const & [s, fn] : commands) {
        if (!s->parsed())
            continue;
        try {
            emit(fn(c), c, out);
            return ok;
        } catch (CheckFailure const & f) {
            emit(f.report, c, out);
            err << "check failed: residual exceeds tolerance\n";
            return check_failed;
        } catch (std::invalid_argument const & e) {
            err << "error: " << e.what() << "\n" << s->help();
            return validation_error;
        } catch (std::domain_error const & e) {
            err << "error: " << e.what() << "\n" << s->help();
            return validation_error;
        } catch (json::exception const & e) {
            err << "error: malformed JSON input: " << e.what() << "\n";
            return validation_error;
        }
    }
    return validation_error;
}

}  // namespace bcsys::cli
