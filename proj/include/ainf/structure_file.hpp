#pragma once

/**
 * @file structure_file.hpp
 * @brief JSON serialization of a computed structure, and loading it back
 *        into a queryable record.
 *
 * Every stored basis value is written, zeros included, in memo order (arity,
 * then tuple), so two runs with the same configuration produce identical
 * bytes. Matrices are nested integer arrays mod p: component -> row ->
 * column -> coefficients of 1, a, ..., a^{q-1}.
 */

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ainf/endo_dga.hpp"
#include "ainf/error.hpp"
#include "ainf/kadeishvili.hpp"
#include "ainf/notation.hpp"
#include "ainf/resolution.hpp"
#include "ainf/stasheff.hpp"

namespace ainf {

using Json = nlohmann::json;

struct FileHeader {
    Scalar p = 0;
    int q = 0;
    int period = 0;
    int truncation = 0;
    std::string mode;   ///< "reduced" | "brute-force"
    std::string f1;     ///< "paper" | "auto"
    std::string status; ///< "open" | "complete"
    int halting_arity = 0;
    int max_arity = 0;
    int computed_through = 0;
    /// Symmetric representative c with m_q(x,...,x) = c*y, once computed.
    std::optional<long long> mq_coefficient;

    bool operator==(const FileHeader&) const = default;
};

struct BasisEntry {
    int degree = 0;
    int index = 0;
    std::string name;
    /// [coefficient, power of z, k[z]-basis index]
    std::vector<std::array<long long, 3>> kz;

    bool operator==(const BasisEntry&) const = default;
};

using Inputs = std::vector<std::array<int, 2>>;

struct ProductEntry {
    int arity = 0;
    Inputs inputs;
    int degree = 0;
    std::vector<Scalar> coords;

    bool operator==(const ProductEntry&) const = default;
};

using ComponentArray = std::vector<std::vector<std::vector<Scalar>>>;

struct MapEntry {
    int arity = 0;
    Inputs inputs;
    int degree = 0;
    int period = 0; ///< 0 when the components are stored in full
    int base = 0;
    std::vector<ComponentArray> components;

    bool operator==(const MapEntry&) const = default;
};

struct VerificationEntry {
    bool performed = false;
    bool passed = false;
    int max_arity = 0;
    std::size_t structure_checks = 0;
    std::size_t morphism_checks = 0;
    std::size_t skipped = 0;
    std::string first_failure;

    bool operator==(const VerificationEntry&) const = default;
};

struct StructureFile {
    FileHeader header;
    std::vector<BasisEntry> basis;
    Inputs kz_basis;
    std::array<int, 2> z{};
    std::vector<ProductEntry> products;
    std::vector<MapEntry> maps;
    MapEntry zeta;
    VerificationEntry verification;

    bool operator==(const StructureFile&) const = default;
};

inline std::string mode_name(Mode m) { return m == Mode::reduced ? "reduced" : "brute-force"; }
inline std::string section_name(SectionMode m) { return m == SectionMode::closed_form ? "paper" : "auto"; }

inline Mode parse_mode(const std::string& s)
{
    if (s == "reduced")
        return Mode::reduced;
    if (s == "brute-force")
        return Mode::brute_force;
    throw Error(ErrorKind::invalid_parameter, "unknown mode \"" + s + "\"");
}

inline SectionMode parse_section(const std::string& s)
{
    if (s == "paper")
        return SectionMode::closed_form;
    if (s == "auto")
        return SectionMode::automatic;
    throw Error(ErrorKind::invalid_parameter, "unknown f1 choice \"" + s + "\"");
}

// ---------------------------------------------------------------------------
// Record -> file

namespace detail {

inline Inputs encode_inputs(const Tuple& t)
{
    Inputs out;
    for (const auto& b : t)
        out.push_back({b.degree, static_cast<int>(b.index)});
    return out;
}

inline Tuple decode_inputs(const Inputs& in)
{
    Tuple t;
    for (const auto& [d, i] : in) {
        if (i < 0)
            throw Error(ErrorKind::parse_error, "negative basis index");
        t.push_back({d, static_cast<std::size_t>(i)});
    }
    return t;
}

inline ComponentArray encode_component(const AlgebraMap& m)
{
    ComponentArray out(m.target_rank(), std::vector<std::vector<Scalar>>(m.source_rank()));
    for (std::size_t i = 0; i < m.target_rank(); ++i)
        for (std::size_t j = 0; j < m.source_rank(); ++j) {
            auto e = m.entry(i, j);
            out[i][j].assign(e.begin(), e.end());
        }
    return out;
}

inline AlgebraMap decode_component(const ComponentArray& c, const PeriodicResolution& res, int target, int source)
{
    const std::size_t rows = res.rank(target), cols = res.rank(source), q = res.algebra().dim();
    if (c.size() != rows)
        throw Error(ErrorKind::parse_error, "component has the wrong number of rows");
    AlgebraMap m(rows, cols, q);
    for (std::size_t i = 0; i < rows; ++i) {
        if (c[i].size() != cols)
            throw Error(ErrorKind::parse_error, "component has the wrong number of columns");
        for (std::size_t j = 0; j < cols; ++j) {
            if (c[i][j].size() != q)
                throw Error(ErrorKind::parse_error, "component entry has the wrong length");
            auto e = m.entry(i, j);
            for (std::size_t l = 0; l < q; ++l) {
                if (c[i][j][l] >= res.algebra().p())
                    throw Error(ErrorKind::parse_error, "coefficient out of range");
                e[l] = c[i][j][l];
            }
        }
    }
    return m;
}

inline MapEntry encode_map(const Tuple& t, const GradedEndomorphism& f, const std::optional<PeriodicForm>& compact)
{
    MapEntry e;
    e.arity = static_cast<int>(t.size());
    e.inputs = encode_inputs(t);
    e.degree = f.degree();
    if (compact) {
        e.period = compact->period;
        e.base = compact->base;
        for (const auto& c : compact->block)
            e.components.push_back(encode_component(c));
    } else {
        e.base = f.first();
        for (const auto& c : f.components())
            e.components.push_back(encode_component(c));
    }
    return e;
}

inline GradedEndomorphism decode_map(const MapEntry& e, const PeriodicResolution& res)
{
    GradedEndomorphism::check_degree(res, e.degree);
    std::vector<AlgebraMap> comps;
    if (e.period > 0) {
        if (static_cast<int>(e.components.size()) != e.period || e.base != e.degree)
            throw Error(ErrorKind::parse_error, "periodic map block does not match its period");
        PeriodicForm form{e.degree, e.period, e.base, {}};
        for (int i = 0; i < e.period; ++i)
            form.block.push_back(decode_component(e.components[static_cast<std::size_t>(i)], res,
                                                  e.base + i - e.degree, e.base + i));
        return form.expand(res);
    }
    if (static_cast<int>(e.components.size()) != res.length() - e.degree + 1)
        throw Error(ErrorKind::parse_error, "map does not cover the truncation");
    for (int n = e.degree; n <= res.length(); ++n)
        comps.push_back(decode_component(e.components[static_cast<std::size_t>(n - e.degree)], res, n - e.degree, n));
    return {e.degree, res.length(), std::move(comps)};
}

} // namespace detail

struct RunInfo {
    int max_arity = 0;
    SectionMode section = SectionMode::closed_form;
};

inline StructureFile make_structure_file(const AInfRecord& rec, const RunInfo& info,
                                         const std::optional<VerificationReport>& report)
{
    const auto& res = rec.resolution();
    const auto& k = rec.field();
    StructureFile s;
    auto& h = s.header;
    h.p = res.algebra().p();
    h.q = res.algebra().q();
    h.period = res.period();
    h.truncation = res.length();
    h.mode = mode_name(rec.mode());
    h.f1 = section_name(info.section);
    h.status = rec.halting().complete ? "complete" : "open";
    h.halting_arity = rec.halting().complete ? rec.halting().arity : 0;
    h.max_arity = info.max_arity;
    h.computed_through = rec.computed_through();
    {
        Tuple xs(static_cast<std::size_t>(h.q), BasisRef{1, 0});
        auto it = rec.memo().find(xs);
        if (it != rec.memo().end())
            h.mq_coefficient = it->second.m.is_zero() ? 0 : k.symmetric(it->second.m.coords.at(0));
        else if (rec.halting().complete && h.q >= rec.halting().arity)
            h.mq_coefficient = 0;
    }

    const int top = std::min(4, rec.homology().max_degree());
    for (int g = 0; g <= top; ++g)
        for (std::size_t i = 0; i < rec.homology().dim(g); ++i) {
            BasisEntry b{g, static_cast<int>(i), rec.homology().dim(g) == 1 ? monomial_name(g) : "", {}};
            for (const auto& t : rec.decompose({g, i}))
                b.kz.push_back({k.symmetric(t.coeff), t.z_power, static_cast<long long>(t.kz_index)});
            s.basis.push_back(std::move(b));
        }
    for (const auto& b : rec.kz().basis)
        s.kz_basis.push_back({b.degree, static_cast<int>(b.index)});
    s.z = {rec.kz().z.degree, static_cast<int>(rec.kz().z.index)};

    for (const auto& [t, e] : rec.memo()) {
        s.products.push_back({static_cast<int>(t.size()), detail::encode_inputs(t), e.m.degree, e.m.coords});
        s.maps.push_back(detail::encode_map(t, e.f, rec.mode() == Mode::reduced ? e.compact : std::nullopt));
    }
    auto by_arity = [](const auto& a, const auto& b) {
        return a.arity != b.arity ? a.arity < b.arity : a.inputs < b.inputs;
    };
    std::stable_sort(s.products.begin(), s.products.end(), by_arity);
    std::stable_sort(s.maps.begin(), s.maps.end(), by_arity);

    s.zeta = detail::encode_map({rec.kz().z}, rec.zeta(),
                                rec.mode() == Mode::reduced ? periodic_compact(rec.zeta(), res.period()) : std::nullopt);

    if (report) {
        auto& v = s.verification;
        v.performed = true;
        v.passed = report->passed;
        v.max_arity = report->max_arity;
        v.structure_checks = report->structure_checks;
        v.morphism_checks = report->morphism_checks;
        v.skipped = report->skipped;
        v.first_failure = report->first_failure ? report->summary() : "";
    }
    return s;
}

// ---------------------------------------------------------------------------
// JSON

inline Json to_json(const StructureFile& s)
{
    const auto& h = s.header;
    Json j;
    j["header"] = {{"p", h.p},
                   {"q", h.q},
                   {"period", h.period},
                   {"truncation", h.truncation},
                   {"mode", h.mode},
                   {"f1", h.f1},
                   {"status", h.status},
                   {"halting_arity", h.halting_arity},
                   {"max_arity", h.max_arity},
                   {"computed_through", h.computed_through},
                   {"mq_coefficient", h.mq_coefficient ? Json(*h.mq_coefficient) : Json(nullptr)}};
    j["basis"] = Json::array();
    for (const auto& b : s.basis)
        j["basis"].push_back({{"degree", b.degree}, {"index", b.index}, {"name", b.name}, {"kz", b.kz}});
    j["kz_basis"] = s.kz_basis;
    j["z"] = s.z;
    j["products"] = Json::array();
    for (const auto& e : s.products)
        j["products"].push_back({{"arity", e.arity}, {"inputs", e.inputs}, {"degree", e.degree}, {"coords", e.coords}});
    auto map_json = [](const MapEntry& e) {
        return Json{{"arity", e.arity},   {"inputs", e.inputs}, {"degree", e.degree},
                    {"period", e.period}, {"base", e.base},     {"components", e.components}};
    };
    j["maps"] = Json::array();
    for (const auto& e : s.maps)
        j["maps"].push_back(map_json(e));
    j["zeta"] = map_json(s.zeta);
    const auto& v = s.verification;
    j["verification"] = {{"performed", v.performed},
                         {"passed", v.passed},
                         {"max_arity", v.max_arity},
                         {"structure_checks", v.structure_checks},
                         {"morphism_checks", v.morphism_checks},
                         {"skipped", v.skipped},
                         {"first_failure", v.first_failure}};
    return j;
}

inline StructureFile from_json(const Json& j)
{
    try {
        StructureFile s;
        const auto& h = j.at("header");
        auto& o = s.header;
        h.at("p").get_to(o.p);
        h.at("q").get_to(o.q);
        h.at("period").get_to(o.period);
        h.at("truncation").get_to(o.truncation);
        h.at("mode").get_to(o.mode);
        h.at("f1").get_to(o.f1);
        h.at("status").get_to(o.status);
        h.at("halting_arity").get_to(o.halting_arity);
        h.at("max_arity").get_to(o.max_arity);
        h.at("computed_through").get_to(o.computed_through);
        if (!h.at("mq_coefficient").is_null())
            o.mq_coefficient = h.at("mq_coefficient").get<long long>();
        for (const auto& b : j.at("basis"))
            s.basis.push_back({b.at("degree").get<int>(), b.at("index").get<int>(), b.at("name").get<std::string>(),
                               b.at("kz").get<std::vector<std::array<long long, 3>>>()});
        j.at("kz_basis").get_to(s.kz_basis);
        j.at("z").get_to(s.z);
        for (const auto& e : j.at("products"))
            s.products.push_back({e.at("arity").get<int>(), e.at("inputs").get<Inputs>(), e.at("degree").get<int>(),
                                  e.at("coords").get<std::vector<Scalar>>()});
        auto read_map = [](const Json& e) {
            return MapEntry{e.at("arity").get<int>(),  e.at("inputs").get<Inputs>(), e.at("degree").get<int>(),
                            e.at("period").get<int>(), e.at("base").get<int>(),
                            e.at("components").get<std::vector<ComponentArray>>()};
        };
        for (const auto& e : j.at("maps"))
            s.maps.push_back(read_map(e));
        s.zeta = read_map(j.at("zeta"));
        const auto& v = j.at("verification");
        auto& w = s.verification;
        v.at("performed").get_to(w.performed);
        v.at("passed").get_to(w.passed);
        v.at("max_arity").get_to(w.max_arity);
        v.at("structure_checks").get_to(w.structure_checks);
        v.at("morphism_checks").get_to(w.morphism_checks);
        v.at("skipped").get_to(w.skipped);
        v.at("first_failure").get_to(w.first_failure);
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse_error, std::string("malformed structure file: ") + e.what());
    }
}

inline std::string serialize(const StructureFile& s) { return to_json(s).dump(1) + "\n"; }

inline StructureFile parse_structure_file(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse_error, std::string("not valid JSON: ") + e.what());
    }
    return from_json(j);
}

// ---------------------------------------------------------------------------
// File -> record

/// Rebuilds the resolution and record described by the header and installs
/// the stored values. The recomputed halting state must match the header.
inline std::unique_ptr<AInfRecord> load_record(const StructureFile& s)
{
    const auto& h = s.header;
    AInfRecord::Options opts;
    opts.mode = parse_mode(h.mode);
    auto rec = make_cyclic_record(h.p, h.q, h.truncation, parse_section(h.f1), opts);
    if (rec->resolution().period() != h.period)
        throw Error(ErrorKind::parse_error, "period in header does not match the resolution");
    const auto& res = rec->resolution();
    if (s.products.size() != s.maps.size())
        throw Error(ErrorKind::parse_error, "products and maps lists differ in length");
    std::map<Tuple, MemoEntry> memo;
    for (std::size_t i = 0; i < s.products.size(); ++i) {
        const auto& pe = s.products[i];
        const auto& me = s.maps[i];
        if (pe.inputs != me.inputs || static_cast<int>(pe.inputs.size()) != pe.arity)
            throw Error(ErrorKind::parse_error, "products and maps lists are not aligned");
        auto t = detail::decode_inputs(pe.inputs);
        HomologyClass m{pe.degree, pe.coords};
        if (m.coords.size() != rec->homology().dim(pe.degree))
            throw Error(ErrorKind::parse_error, "product coordinates have the wrong length");
        for (auto c : m.coords)
            if (c >= h.p)
                throw Error(ErrorKind::parse_error, "coefficient out of range");
        auto f = detail::decode_map(me, res);
        std::optional<PeriodicForm> compact;
        if (me.period > 0)
            compact = periodic_compact(f, me.period);
        memo.emplace(std::move(t), MemoEntry{std::move(m), std::move(f), std::move(compact)});
    }
    rec->restore(std::move(memo), h.computed_through);
    const bool complete = h.status == "complete";
    if (rec->halting().complete != complete || (complete && rec->halting().arity != h.halting_arity))
        throw Error(ErrorKind::parse_error, "stored values do not reproduce the recorded halting status");
    return rec;
}

} // namespace ainf
