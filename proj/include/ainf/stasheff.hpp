#pragma once

/**
 * @file stasheff.hpp
 * @brief Element-level evaluation of the Stasheff identities.
 *
 * Structure identity on a tuple a_1..a_n of homology classes:
 *
 *   sum_{r+s+t=n} (-1)^{r+st} m_{r+1+t}(id^r (x) m_s (x) id^t) = 0
 *
 * Morphism identity, with the dg-algebra operations m_1 = d, m_2 = composition:
 *
 *   sum_{r+s+t=n} (-1)^{r+st} f_{r+1+t}(id^r (x) m_s (x) id^t)
 *       = d f_n + sum_{i+j=n} (-1)^{i-1} f_i (x) f_j
 *
 * Operators act on elements with the Koszul rule
 * (F (x) G)(u (x) v) = (-1)^{|G||u|} F(u) G(v), where |m_s| = 2-s and
 * |f_i| = 1-i. Nothing here reuses the signs of the construction.
 */

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ainf/endo_dga.hpp"
#include "ainf/error.hpp"
#include "ainf/kadeishvili.hpp"

namespace ainf {

/// Total view of the m and f families of a record: stored values, their
/// k[z]-linear extensions, and zeros past a completed halting window.
class StructureTable {
public:
    explicit StructureTable(AInfRecord& rec) : rec_(&rec) {}

    AInfRecord& record() const noexcept { return *rec_; }

    HomologyClass m(const std::vector<HomologyClass>& args) const
    {
        require(static_cast<int>(args.size()));
        if (args.size() == 1)
            return rec_->zero_class(args[0].degree + 1);
        return rec_->evaluate(args).first;
    }

    GradedEndomorphism f(const std::vector<HomologyClass>& args) const
    {
        require(static_cast<int>(args.size()));
        if (args.size() == 1)
            return rec_->section(args[0]);
        return rec_->evaluate(args).second;
    }

private:
    void require(int n) const
    {
        if (!rec_->resolvable(n))
            throw Error(ErrorKind::unresolvable_value,
                        "arity " + std::to_string(n) + " is neither computed nor covered by a halting certificate");
    }

    AInfRecord* rec_;
};

namespace detail {

inline bool odd(long long e) { return (e % 2 + 2) % 2 == 1; }

inline int degree_sum(const std::vector<HomologyClass>& a, std::size_t from, std::size_t to)
{
    int s = 0;
    for (std::size_t i = from; i < to; ++i)
        s += a[i].degree;
    return s;
}

inline std::vector<HomologyClass> slice(const std::vector<HomologyClass>& a, std::size_t from, std::size_t to)
{
    return {a.begin() + static_cast<std::ptrdiff_t>(from), a.begin() + static_cast<std::ptrdiff_t>(to)};
}

/// a_1..a_r, inner, a_{r+s+1}..a_n
inline std::vector<HomologyClass> splice(const std::vector<HomologyClass>& a, std::size_t r, std::size_t s,
                                         const HomologyClass& inner)
{
    std::vector<HomologyClass> out(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(r));
    out.push_back(inner);
    out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(r + s), a.end());
    return out;
}

} // namespace detail

/// Residual of the structure identity; zero iff it holds on `a`.
inline HomologyClass check_structure(const StructureTable& tbl, const std::vector<HomologyClass>& a)
{
    const auto& rec = tbl.record();
    const auto& k = rec.field();
    const std::size_t n = a.size();
    HomologyClass out = rec.zero_class(detail::degree_sum(a, 0, n) + 3 - static_cast<int>(n));
    // m_1 = 0 kills the s = 1 terms and the outer-m_1 term (s = n).
    for (std::size_t s = 2; s + 1 <= n; ++s)
        for (std::size_t r = 0; r + s <= n; ++r) {
            const std::size_t t = n - r - s;
            auto inner = tbl.m(detail::slice(a, r, r + s));
            if (inner.is_zero())
                continue;
            auto outer = tbl.m(detail::splice(a, r, s, inner));
            const long long e = static_cast<long long>(r + s * t) +
                                static_cast<long long>(2 - static_cast<int>(s)) * detail::degree_sum(a, 0, r);
            const Scalar sign = detail::odd(e) ? k.neg(1) : 1;
            for (std::size_t i = 0; i < out.coords.size(); ++i)
                out.coords[i] = k.add(out.coords[i], k.mul(sign, outer.coords[i]));
        }
    return out;
}

/// Residual (left side minus right side) of the morphism identity.
inline GradedEndomorphism check_morphism(const StructureTable& tbl, const std::vector<HomologyClass>& a)
{
    const auto& rec = tbl.record();
    const auto& res = rec.resolution();
    const auto& k = rec.field();
    const std::size_t n = a.size();
    const int deg = detail::degree_sum(a, 0, n) + 2 - static_cast<int>(n);
    auto out = GradedEndomorphism::zero(res, deg);

    for (std::size_t s = 2; s <= n; ++s)
        for (std::size_t r = 0; r + s <= n; ++r) {
            const std::size_t t = n - r - s;
            auto inner = tbl.m(detail::slice(a, r, r + s));
            if (inner.is_zero())
                continue;
            auto val = tbl.f(detail::splice(a, r, s, inner));
            const long long e = static_cast<long long>(r + s * t) +
                                static_cast<long long>(2 - static_cast<int>(s)) * detail::degree_sum(a, 0, r);
            out = add_scaled(res, out, detail::odd(e) ? k.neg(1) : 1, val);
        }

    out = add_scaled(res, out, k.neg(1), differential(res, tbl.f(a)));
    for (std::size_t i = 1; i < n; ++i) {
        const std::size_t j = n - i;
        auto left = tbl.f(detail::slice(a, 0, i));
        auto right = tbl.f(detail::slice(a, i, n));
        const long long e = static_cast<long long>(i - 1) +
                            static_cast<long long>(1 - static_cast<int>(j)) * detail::degree_sum(a, 0, i);
        out = add_scaled(res, out, detail::odd(e) ? 1 : k.neg(1), compose(res, left, right));
    }
    return out;
}

struct VerificationFailure {
    std::string identity; ///< "structure" or "morphism"
    int arity = 0;
    Tuple tuple;
    int position = -1; ///< first nonzero component of a morphism residual
};

struct VerificationReport {
    bool passed = true;
    std::size_t structure_checks = 0;
    std::size_t morphism_checks = 0;
    std::size_t skipped = 0; ///< tuples whose values do not fit in the truncation
    int max_arity = 0;
    std::optional<VerificationFailure> first_failure;

    std::string summary() const
    {
        std::string s = std::string(passed ? "pass" : "FAIL") + ": " + std::to_string(structure_checks) +
                        " structure and " + std::to_string(morphism_checks) + " morphism identities through arity " +
                        std::to_string(max_arity);
        if (first_failure)
            s += "; first failure: " + first_failure->identity + " identity, arity " +
                 std::to_string(first_failure->arity) + ", tuple " + to_string(first_failure->tuple) +
                 (first_failure->position >= 0 ? ", position " + std::to_string(first_failure->position) : "");
        return s;
    }
};

/// Checks both identities on one basis tuple, recording into `report`.
inline bool verify_tuple(const StructureTable& tbl, const Tuple& t, VerificationReport& report)
{
    const auto& rec = tbl.record();
    std::vector<HomologyClass> args;
    for (const auto& b : t)
        args.push_back(rec.basis_class(b));
    const int n = static_cast<int>(t.size());
    report.max_arity = std::max(report.max_arity, n);

    ++report.structure_checks;
    if (!check_structure(tbl, args).is_zero()) {
        report.passed = false;
        if (!report.first_failure)
            report.first_failure = VerificationFailure{"structure", n, t, -1};
        return false;
    }
    ++report.morphism_checks;
    auto r = check_morphism(tbl, args);
    if (auto pos = r.first_nonzero()) {
        report.passed = false;
        if (!report.first_failure)
            report.first_failure = VerificationFailure{"morphism", n, t, *pos};
        return false;
    }
    return true;
}

struct VerifyOptions {
    int max_arity = 0;
    /// Every tuple over basis classes of degree 1..exhaustive_degree is
    /// checked up to this arity.
    int exhaustive_arity = 4;
    int exhaustive_degree = 3;
    /// Extra random tuples over the same classes at each higher arity.
    int samples_per_arity = 2;
    unsigned seed = 1;
};

/// Verifies the record on every unit-free tuple over its k[z]-basis up to
/// `max_arity`, exhaustively on small tuples with higher-degree classes, and
/// on seeded random samples beyond that.
inline VerificationReport verify_structure(AInfRecord& rec, const VerifyOptions& opt)
{
    StructureTable tbl(rec);
    VerificationReport report;
    std::vector<BasisRef> elems;
    for (int g = 1; g <= opt.exhaustive_degree; ++g)
        for (std::size_t i = 0; i < rec.homology().dim(g); ++i)
            elems.push_back({g, i});
    std::mt19937 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> pick(0, elems.empty() ? 0 : elems.size() - 1);

    for (int n = 1; n <= opt.max_arity; ++n) {
        std::vector<Tuple> tuples = rec.frontier(n);
        if (n <= opt.exhaustive_arity) {
            Tuple t(static_cast<std::size_t>(n));
            std::function<void(std::size_t)> rec_fill = [&](std::size_t i) {
                if (i == t.size()) {
                    if (std::find(tuples.begin(), tuples.end(), t) == tuples.end())
                        tuples.push_back(t);
                    return;
                }
                for (const auto& b : elems) {
                    t[i] = b;
                    rec_fill(i + 1);
                }
            };
            rec_fill(0);
        } else if (!elems.empty()) {
            for (int i = 0; i < opt.samples_per_arity; ++i) {
                Tuple t;
                for (int j = 0; j < n; ++j)
                    t.push_back(elems[pick(rng)]);
                tuples.push_back(std::move(t));
            }
        }
        for (const auto& t : tuples) {
            if (total_degree(t) + 2 - n > rec.homology().max_degree()) {
                ++report.skipped;
                continue;
            }
            verify_tuple(tbl, t, report);
        }
    }
    return report;
}

} // namespace ainf
