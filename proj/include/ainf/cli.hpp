#pragma once

/**
 * @file cli.hpp
 * @brief The batch driver behind tools/ainf: configure, compute, verify,
 *        print, serialize, and answer per-tuple queries.
 */

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ainf/endo_dga.hpp"
#include "ainf/error.hpp"
#include "ainf/kadeishvili.hpp"
#include "ainf/notation.hpp"
#include "ainf/stasheff.hpp"
#include "ainf/structure_file.hpp"

namespace ainf {

struct RunConfig {
    Scalar p = 2;
    int q = 4;
    int max_arity = 8;
    std::optional<int> truncation;
    Mode mode = Mode::reduced;
    SectionMode section = SectionMode::closed_form;
    bool verify = false;
    bool parallel = true;
    std::optional<std::string> output;
    std::optional<std::string> query;
    std::optional<std::string> input;
};

inline void validate(const RunConfig& c)
{
    if (!ff::Field::is_prime(c.p))
        throw Error(ErrorKind::invalid_parameter, "p = " + std::to_string(c.p) + " is not prime");
    if (c.q < 3)
        throw Error(ErrorKind::invalid_parameter, "q must be at least 3");
    if (c.max_arity < 2)
        throw Error(ErrorKind::invalid_parameter, "max-arity must be at least 2");
    if (c.truncation && *c.truncation < 2)
        throw Error(ErrorKind::invalid_parameter, "truncation must be at least 2");
}

/// Largest generator degree that reaches the engine: 2 for the k[z]-basis
/// plus z, 3 when brute force enumerates x*y as well.
inline int generator_degree(Mode m) { return m == Mode::reduced ? 2 : 3; }

inline int truncation_for(const RunConfig& c)
{
    return c.truncation ? *c.truncation : default_truncation(c.max_arity, generator_degree(c.mode));
}

inline std::string tuple_name(const Tuple& t)
{
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i)
        s += (i ? "," : "") + monomial_name(t[i].degree);
    return s;
}

/// One line per position of a map; a periodic map prints one period.
inline std::string format_map(const ff::Field& k, const GradedEndomorphism& f, int period)
{
    std::ostringstream out;
    std::optional<PeriodicForm> form;
    if (static_cast<int>(f.size()) >= 2 * period)
        form = periodic_compact(f, period);
    const int last = form ? f.first() + period - 1 : f.last();
    for (int n = f.first(); n <= last; ++n)
        out << "  X_" << n << " -> X_" << n - f.degree() << ": " << map_component_to_string(k, f.at(n)) << "\n";
    if (form)
        out << "  (repeats with period " << period << ")\n";
    return out.str();
}

inline std::string status_string(const HaltingState& h)
{
    return h.complete ? "complete-at-" + std::to_string(h.arity) : "open";
}

/// Nonzero values on the k[z]-basis tuples, the halting state and the
/// periodicity certificates.
inline void print_table(std::ostream& out, AInfRecord& rec, int max_arity)
{
    const auto& k = rec.field();
    const auto& res = rec.resolution();
    const int top = std::min(max_arity, rec.computed_through());
    for (int n = 2; n <= top; ++n)
        for (const auto& t : rec.frontier(n)) {
            auto m = rec.high_product(t);
            if (!m.is_zero())
                out << "m_" << n << "(" << tuple_name(t) << ") = " << class_to_string(k, m) << "\n";
        }
    for (int n = 2; n <= top; ++n)
        for (const auto& t : rec.frontier(n)) {
            auto f = rec.high_map(t);
            if (!f.is_zero())
                out << "f_" << n << "(" << tuple_name(t) << "), degree " << f.degree() << ":\n"
                    << format_map(k, f, res.period());
        }
    out << "status: " << status_string(rec.halting()) << " (computed through arity " << rec.computed_through()
        << ")\n";
    if (rec.mode() == Mode::reduced) {
        bool all = !rec.certificates().empty();
        for (const auto& [n, c] : rec.certificates())
            all = all && c.valid();
        out << "periodicity: " << (all ? "certified with period " + std::to_string(res.period()) : "not certified")
            << " at every computed arity\n";
    }
}

/// Arity range the verifier covers: everything computed, and up to 2t past a
/// halting arity t.
inline int verification_arity(const AInfRecord& rec, int max_arity)
{
    int n = std::min(max_arity, rec.computed_through());
    if (rec.halting().complete)
        n = std::max(n, 2 * rec.halting().arity);
    return n;
}

inline std::string answer_query(AInfRecord& rec, const std::string& text)
{
    const auto& k = rec.field();
    auto q = parse_query(k, text);
    const int n = static_cast<int>(q.args.size());
    bool zero = false;
    int s = 0;
    std::vector<HomologyClass> args;
    for (const auto& a : q.args) {
        if (a.zero) {
            zero = true;
            continue;
        }
        rec.homology().require_degree(a.degree);
        HomologyClass c = rec.homology().zero_class(a.degree);
        c.coords.at(0) = a.coeff;
        args.push_back(std::move(c));
        s += a.degree;
    }
    if (!rec.resolvable(n))
        throw Error(ErrorKind::unresolvable_value, "arity " + std::to_string(n) +
                                                       " is beyond the computed range and the structure is not complete");
    if (q.kind == QueryKind::product) {
        if (zero)
            return "0";
        StructureTable tbl(rec);
        return class_to_string(k, tbl.m(args));
    }
    if (zero || s + 1 - n < 0)
        return "0";
    StructureTable tbl(rec);
    auto f = tbl.f(args);
    if (f.is_zero())
        return "0";
    std::string out = "degree " + std::to_string(f.degree()) + "\n" + format_map(k, f, rec.resolution().period());
    out.pop_back();
    return out;
}

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::parse_error, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Answers a query from a structure file without recomputing anything.
inline int query(const std::string& path, const std::string& text, std::ostream& out, std::ostream& err)
{
    try {
        auto file = parse_structure_file(read_file(path));
        auto rec = load_record(file);
        out << answer_query(*rec, text) << "\n";
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

/// Runs the configured computation. Returns the process exit status: 0 iff
/// the computation finished and, when requested, verification passed.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    if (c.input) {
        if (!c.query) {
            err << "error: --input needs --query\n";
            return 1;
        }
        return query(*c.input, *c.query, out, err);
    }
    try {
        validate(c);
        const int L = truncation_for(c);
        AInfRecord::Options opts;
        opts.mode = c.mode;
        opts.parallel = c.parallel;
        auto rec = make_cyclic_record(c.p, c.q, L, c.section, opts);
        out << "Ext over F_" << c.p << "[α]/(α^" << c.q << "): period " << rec->resolution().period()
            << ", truncation " << L << ", mode " << mode_name(c.mode) << ", f1 " << section_name(c.section) << "\n";
        rec->compute_structure(c.max_arity);
        print_table(out, *rec, c.max_arity);

        std::optional<VerificationReport> report;
        if (c.verify) {
            VerifyOptions vo;
            vo.max_arity = verification_arity(*rec, c.max_arity);
            report = verify_structure(*rec, vo);
            out << "verify: " << report->summary() << "\n";
        }
        if (c.output) {
            auto file = make_structure_file(*rec, {c.max_arity, c.section}, report);
            std::ofstream f(*c.output, std::ios::binary);
            if (!f)
                throw Error(ErrorKind::invalid_parameter, "cannot write " + *c.output);
            f << serialize(file);
        }
        if (c.query)
            out << c.query.value() << " = " << answer_query(*rec, *c.query) << "\n";
        return report && !report->passed ? 1 : 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace ainf
