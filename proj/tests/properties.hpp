#pragma once

// Randomized property checks shared by the unit tests and the acceptance
// binary. Each returns how many cases ran and the first counterexample.

#include <cstdint>
#include <optional>
#include <tuple>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ainf/ainf.hpp"

namespace ainf::props {

struct PropertyResult {
    int cases = 0;
    int failures = 0;
    std::string first_failure;

    bool ok() const { return failures == 0 && cases > 0; }
    void fail(const std::string& what)
    {
        if (failures++ == 0)
            first_failure = what;
    }
};

inline AlgebraMap random_map(const TruncatedPolyAlgebra& alg, std::size_t rows, std::size_t cols, std::mt19937& rng)
{
    std::uniform_int_distribution<Scalar> coeff(0, alg.p() - 1);
    ff::Vector data(rows * cols * alg.dim());
    for (auto& v : data)
        v = coeff(rng);
    return {rows, cols, alg.dim(), std::move(data)};
}

inline GradedEndomorphism random_endomorphism(const PeriodicResolution& res, int degree, std::mt19937& rng)
{
    std::vector<AlgebraMap> comps;
    for (int n = degree; n <= res.length(); ++n)
        comps.push_back(random_map(res.algebra(), res.rank(n - degree), res.rank(n), rng));
    return {degree, res.length(), std::move(comps)};
}

inline std::shared_ptr<const PeriodicResolution> cyclic(Scalar p, int q, int L)
{
    return std::make_shared<const PeriodicResolution>(build_cyclic_resolution(p, q, L));
}

inline const std::vector<std::pair<Scalar, int>>& small_rings()
{
    static const std::vector<std::pair<Scalar, int>> r{{2, 3}, {2, 4}, {2, 5}, {3, 3}, {3, 4}, {5, 3}, {5, 5}, {7, 4}};
    return r;
}

/// d(d f) = 0 for random f of random degree.
inline PropertyResult prop_dd_zero(int cases, std::uint32_t seed)
{
    std::mt19937 rng(seed);
    PropertyResult r;
    const int L = 14;
    for (int i = 0; i < cases; ++i) {
        auto [p, q] = small_rings()[rng() % small_rings().size()];
        auto res = cyclic(p, q, L);
        const int g = static_cast<int>(rng() % (L - 1));
        auto f = random_endomorphism(*res, g, rng);
        auto dd = differential(*res, differential(*res, f));
        ++r.cases;
        if (!dd.is_zero())
            r.fail("p=" + std::to_string(p) + " q=" + std::to_string(q) + " degree " + std::to_string(g));
    }
    return r;
}

/// d(uv) = d(u) v + (-1)^{|u|} u d(v).
inline PropertyResult prop_leibniz(int cases, std::uint32_t seed)
{
    std::mt19937 rng(seed);
    PropertyResult r;
    const int L = 14;
    for (int i = 0; i < cases; ++i) {
        auto [p, q] = small_rings()[rng() % small_rings().size()];
        auto res = cyclic(p, q, L);
        const auto& k = res->algebra().field();
        const int gu = static_cast<int>(rng() % 6), gv = static_cast<int>(rng() % 6);
        auto u = random_endomorphism(*res, gu, rng);
        auto v = random_endomorphism(*res, gv, rng);
        auto lhs = differential(*res, compose(*res, u, v));
        auto rhs = add_scaled(*res, compose(*res, differential(*res, u), v), k.sign(gu),
                              compose(*res, u, differential(*res, v)));
        ++r.cases;
        if (!(lhs == rhs))
            r.fail("p=" + std::to_string(p) + " q=" + std::to_string(q) + " degrees " + std::to_string(gu) + "," +
                   std::to_string(gv));
    }
    return r;
}

/// class_of(f1(c) + d h) = c for random classes c and random h, with both
/// choices of representatives.
inline PropertyResult prop_section(int cases, std::uint32_t seed)
{
    std::mt19937 rng(seed);
    PropertyResult r;
    const int L = 16;
    std::map<std::tuple<Scalar, int, int>, std::unique_ptr<HomologyModel>> models;
    for (int i = 0; i < cases; ++i) {
        auto [p, q] = small_rings()[rng() % small_rings().size()];
        const int mode = static_cast<int>(rng() % 2);
        auto& hm = models[{p, q, mode}];
        if (!hm)
            hm = std::make_unique<HomologyModel>(cyclic(p, q, L), mode ? SectionMode::automatic : SectionMode::closed_form);
        const auto& res = hm->resolution();
        const int g = static_cast<int>(rng() % (hm->max_degree() + 1));
        HomologyClass c = hm->zero_class(g);
        for (auto& v : c.coords)
            v = static_cast<Scalar>(rng() % p);
        auto rep = hm->section(c);
        if (g >= 1)
            rep = add_scaled(res, rep, 1, differential(res, random_endomorphism(res, g - 1, rng)));
        ++r.cases;
        if (!hm->is_cycle(rep) || !(hm->class_of(rep) == c))
            r.fail("p=" + std::to_string(p) + " q=" + std::to_string(q) + " degree " + std::to_string(g));
    }
    return r;
}

/// For memo entries of computed records: d f = Psi + f1(m), Psi a cycle,
/// and the degrees |m| = S + 2 - n, |f| = S + 1 - n.
///
/// In characteristic 2 this is literally d f = Psi - f1(m).
inline PropertyResult prop_defining_equation(int cases, std::uint32_t seed)
{
    std::mt19937 rng(seed);
    PropertyResult r;
    struct Entry {
        AInfRecord* rec;
        Tuple t;
    };
    std::vector<std::unique_ptr<AInfRecord>> recs;
    std::vector<Entry> pool;
    for (auto [p, q] : small_rings()) {
        AInfRecord::Options ro;
        recs.push_back(make_cyclic_record(p, q, default_truncation(2 * q, 2), SectionMode::closed_form, ro));
        recs.back()->compute_structure(2 * q);
        AInfRecord::Options bo;
        bo.mode = Mode::brute_force;
        recs.push_back(make_cyclic_record(p, q, 40, rng() % 2 ? SectionMode::closed_form : SectionMode::automatic, bo));
        recs.back()->compute_structure(4);
    }
    for (auto& rec : recs)
        for (const auto& [t, e] : rec->memo())
            pool.push_back({rec.get(), t});
    for (int i = 0; i < cases; ++i) {
        const auto& [rec, t] = pool[rng() % pool.size()];
        const auto& res = rec->resolution();
        const auto& e = rec->memo().at(t);
        auto psi = rec->psi(t);
        const int n = static_cast<int>(t.size()), s = total_degree(t);
        ++r.cases;
        const std::string where = "p=" + std::to_string(res.algebra().p()) + " q=" + std::to_string(res.algebra().q()) +
                                  " " + mode_name(rec->mode()) + " " + to_string(t);
        if (e.m.degree != s + 2 - n || e.f.degree() != s + 1 - n) {
            r.fail(where + ": degree bookkeeping");
            continue;
        }
        if (!rec->homology().is_cycle(psi)) {
            r.fail(where + ": Psi is not a cycle");
            continue;
        }
        auto rhs = add_scaled(res, psi, 1, rec->section(e.m));
        if (!(differential(res, e.f) == rhs))
            r.fail(where + ": d f != Psi + f1(m)");
    }
    return r;
}

/// Definition of the halting arity, checked directly against random flags.
inline PropertyResult prop_halting_window(int cases, std::uint32_t seed)
{
    std::mt19937 rng(seed);
    PropertyResult r;
    for (int i = 0; i < cases; ++i) {
        std::map<int, bool> flags;
        const int top = 2 + static_cast<int>(rng() % 20);
        const int onset = 2 + static_cast<int>(rng() % 12); // zeros tend to start here
        for (int n = 2; n <= top; ++n) {
            if (rng() % 7 == 0)
                continue; // arity not computed
            flags[n] = n >= onset ? rng() % 6 != 0 : rng() % 3 == 0;
        }
        auto t = find_halting_arity(flags);
        auto window_zero = [&](int s) {
            for (int k = s; k <= 2 * s - 2; ++k)
                if (!flags.count(k) || !flags.at(k))
                    return false;
            return true;
        };
        bool ok = true;
        if (t) {
            ok = *t >= 3 && window_zero(*t);
            for (int s = 3; s < *t && ok; ++s)
                ok = !window_zero(s);
        } else {
            for (int s = 3; s <= top && ok; ++s)
                ok = !window_zero(s);
        }
        ++r.cases;
        if (!ok)
            r.fail("case " + std::to_string(i) + " (top arity " + std::to_string(top) + ")");
    }
    return r;
}

// ---------------------------------------------------------------------------
// Expected values for the cyclic family

/// The component a^e * c as a 1x1 map.
inline AlgebraMap monomial_map(const TruncatedPolyAlgebra& alg, int e, Scalar c)
{
    return scalar_map(alg, alg.monomial(e, c));
}

/// Is f (degree 1) of the form (c*a^e at even positions, 0 at odd positions)
/// with c a nonzero scalar? Returns c.
inline std::optional<Scalar> alternating_monomial(const PeriodicResolution& res, const GradedEndomorphism& f, int e)
{
    const auto& alg = res.algebra();
    if (f.degree() != 1 || f.is_zero())
        return std::nullopt;
    const Scalar c = f.at(2).entry(0, 0)[static_cast<std::size_t>(e)];
    if (c == 0)
        return std::nullopt;
    for (int n = f.first(); n <= f.last(); ++n) {
        const auto want = n % 2 == 0 ? monomial_map(alg, e, c) : AlgebraMap(1, 1, alg.dim());
        if (!(f.at(n) == want))
            return std::nullopt;
    }
    return c;
}

} // namespace ainf::props
