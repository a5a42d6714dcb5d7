#pragma once

/**
 * @file kadeishvili.hpp
 * @brief Inductive computation of the A-infinity structure on H(End_R(X)).
 *
 * For a basis tuple a = (a_1, ..., a_n) the obstruction is
 *
 *   Psi_n(a) = sum_{s=1}^{n-1} (-1)^{eps1(a,s)} f_s(a_1..a_s) f_{n-s}(a_{s+1}..a_n)
 *            + sum_{j=2}^{n-1} sum_{k=0}^{n-j} (-1)^{eps2(a,k,j)}
 *                  f_{n-j+1}(a_1..a_k, m_j(a_{k+1}..a_{k+j}), ..., a_n)
 *
 *   eps1(a,s)   = s + (n-s+1)(|a_1| + ... + |a_s|)
 *   eps2(a,k,j) = k + j(n-k-j + |a_1| + ... + |a_k|)
 *
 * These are the signs of the morphism identity with its f_1 m_n and m_1 f_n
 * terms split off, which reads d f_n = Psi_n + f_1(m_n). Hence
 *
 *   m_n(a) = -[Psi_n(a)],   f_n(a) = canonical h with dh = Psi_n(a) + f_1(m_n(a)).
 *
 * The same formula at n = 2 gives Psi_2 = -f_1(a_1) f_1(a_2), so m_2 is the
 * induced product. In characteristic 2 all of this collapses to
 * m_n = [Psi_n], dh = Psi_n - f_1(m_n).
 *
 * Reduced mode evaluates only tuples over a k[z]-basis of H (minus the unit)
 * and extends k[z]-multilinearly: m(.., z a, ..) = z m(..), f(.., z a, ..) =
 * zeta f(..) with zeta = f_1(z). Brute-force mode evaluates every basis tuple
 * directly.
 */

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <deque>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ainf/endo_dga.hpp"
#include "ainf/error.hpp"
#include "ainf/ff_linalg.hpp"
#include "ainf/resolution.hpp"

namespace ainf {

/// A basis element of H^degree: the index-th chosen class.
struct BasisRef {
    int degree = 0;
    std::size_t index = 0;

    auto operator<=>(const BasisRef&) const = default;
};

using Tuple = std::vector<BasisRef>;

inline int total_degree(std::span<const BasisRef> t)
{
    int s = 0;
    for (const auto& b : t)
        s += b.degree;
    return s;
}

inline std::string to_string(const Tuple& t)
{
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(t[i].degree) + ":" + std::to_string(t[i].index);
    }
    return s + ")";
}

// ---------------------------------------------------------------------------
// Signs

inline int eps1_exponent(std::span<const int> degrees, int n, int s)
{
    int a = 0;
    for (int i = 0; i < s; ++i)
        a += degrees[static_cast<std::size_t>(i)];
    return s + (n - s + 1) * a;
}

inline int eps2_exponent(std::span<const int> degrees, int n, int k, int j)
{
    int a = 0;
    for (int i = 0; i < k; ++i)
        a += degrees[static_cast<std::size_t>(i)];
    return k + j * (n - k - j + a);
}

/// (-1)^{eps1}, as +1 / -1. Requires 1 <= s <= n-1.
inline int eps1(std::span<const int> degrees, int n, int s)
{
    if (s < 1 || s > n - 1 || static_cast<int>(degrees.size()) < s)
        throw Error(ErrorKind::invalid_parameter, "eps1: need 1 <= s <= n-1");
    return eps1_exponent(degrees, n, s) % 2 == 0 ? 1 : -1;
}

/// (-1)^{eps2}. Requires 2 <= j <= n-1 and 0 <= k <= n-j.
inline int eps2(std::span<const int> degrees, int n, int k, int j)
{
    if (j < 2 || j > n - 1 || k < 0 || k > n - j || static_cast<int>(degrees.size()) < k)
        throw Error(ErrorKind::invalid_parameter, "eps2: need 2 <= j <= n-1, 0 <= k <= n-j");
    return eps2_exponent(degrees, n, k, j) % 2 == 0 ? 1 : -1;
}

// ---------------------------------------------------------------------------
// Halting window

/// Smallest t >= 3 such that every arity in [t, 2t-2] has been computed and
/// vanishes. `zero_by_arity` maps each computed arity to its zero flag.
inline std::optional<int> find_halting_arity(const std::map<int, bool>& zero_by_arity)
{
    if (zero_by_arity.empty())
        return std::nullopt;
    const int top = zero_by_arity.rbegin()->first;
    for (int t = 3; 2 * t - 2 <= top; ++t) {
        bool ok = true;
        for (int k = t; k <= 2 * t - 2 && ok; ++k) {
            auto it = zero_by_arity.find(k);
            ok = it != zero_by_arity.end() && it->second;
        }
        if (ok)
            return t;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Periodicity certificate

struct Certificate {
    int arity = 0;
    bool zeta_identity = false; ///< every component of zeta is an identity map
    bool periodic = false;      ///< every basis value is periodic of the period
    bool commutes = false;      ///< zeta f = f zeta componentwise for every basis value
    std::optional<Tuple> offending;
    std::string detail;

    bool valid() const noexcept { return zeta_identity && periodic && commutes; }
};

inline bool zeta_is_identity(const PeriodicResolution& res, const GradedEndomorphism& zeta)
{
    for (int n = zeta.first(); n <= zeta.last(); ++n) {
        const auto& c = zeta.at(n);
        if (c.source_rank() != c.target_rank() || !(c == identity_map(res.algebra(), c.source_rank())))
            return false;
    }
    return true;
}

/// Checks the hypotheses that let arity-n values be extended k[z]-linearly
/// and stored one period at a time.
inline Certificate certify_values(const PeriodicResolution& res, const GradedEndomorphism& zeta, int arity,
                                  const std::vector<std::pair<Tuple, GradedEndomorphism>>& values,
                                  std::vector<std::optional<PeriodicForm>>* compact_out = nullptr)
{
    Certificate cert;
    cert.arity = arity;
    cert.zeta_identity = zeta_is_identity(res, zeta);
    cert.periodic = true;
    cert.commutes = true;
    if (!cert.zeta_identity)
        cert.detail = "zeta is not the identity in every position";
    if (compact_out)
        compact_out->clear();
    for (const auto& [tuple, f] : values) {
        auto form = periodic_compact(f, res.period());
        if (!form && cert.periodic) {
            cert.periodic = false;
            cert.offending = tuple;
            cert.detail = "value on " + to_string(tuple) + " is not periodic";
        }
        if (compact_out)
            compact_out->push_back(std::move(form));
        if (f.degree() + zeta.degree() <= res.length() &&
            !(compose(res, zeta, f) == compose(res, f, zeta)) && cert.commutes) {
            cert.commutes = false;
            if (!cert.offending)
                cert.offending = tuple;
            cert.detail = "zeta does not commute with the value on " + to_string(tuple);
        }
    }
    return cert;
}

// ---------------------------------------------------------------------------
// The record

enum class Mode { reduced, brute_force };

/// The distinguished polynomial class z and a k[z]-basis of H (containing
/// the unit).
struct KzStructure {
    BasisRef z;
    std::vector<BasisRef> basis;
};

/// For Ext over F_p[a]/(a^q): z = y in degree 2, basis {1, x}.
inline KzStructure cyclic_kz_structure() { return {{2, 0}, {{0, 0}, {1, 0}}}; }

struct HaltingState {
    bool complete = false;
    int arity = 0; ///< t of complete-at-t

    bool operator==(const HaltingState&) const = default;
};

struct MemoEntry {
    HomologyClass m;
    GradedEndomorphism f;
    std::optional<PeriodicForm> compact;
};

struct StructureSummary {
    int max_arity = 0;
    int computed_through = 0;
    HaltingState halting;
    std::vector<std::pair<Tuple, HomologyClass>> nonzero_products;
    std::vector<std::pair<Tuple, GradedEndomorphism>> nonzero_maps;
    std::map<int, Certificate> certificates;
    double seconds = 0.0;
};

/// Default truncation: every value up to `max_arity` has degree at most
/// max_arity * max_generator_degree, plus two periods of margin.
inline int default_truncation(int max_arity, int max_generator_degree)
{
    return 2 * (max_arity * max_generator_degree + 2);
}

class AInfRecord {
public:
    struct Options {
        Mode mode = Mode::reduced;
        bool parallel = true;
        /// Brute-force mode enumerates tuples over basis classes of degree
        /// 1..brute_degree.
        int brute_degree = 3;
    };

    AInfRecord(std::shared_ptr<const PeriodicResolution> res, SectionMode section, KzStructure kz, Options opts)
        : res_(std::move(res)), hom_(std::make_unique<HomologyModel>(res_, section)), kz_(std::move(kz)),
          opts_(opts), cache_mutex_(std::make_unique<std::mutex>())
    {
        if (hom_->dim(0) != 1)
            throw Error(ErrorKind::invalid_parameter, "H^0 must be one-dimensional (connected homology)");
        zeta_ = hom_->representative(kz_.z.degree, kz_.z.index);
        for (const auto& b : kz_.basis)
            if (!is_unit(b))
                kz_nonunit_.push_back(b);
    }

    const PeriodicResolution& resolution() const noexcept { return *res_; }
    std::shared_ptr<const PeriodicResolution> resolution_ptr() const noexcept { return res_; }
    const HomologyModel& homology() const noexcept { return *hom_; }
    const KzStructure& kz() const noexcept { return kz_; }
    const Options& options() const noexcept { return opts_; }
    Mode mode() const noexcept { return opts_.mode; }
    const GradedEndomorphism& zeta() const noexcept { return zeta_; }
    const HaltingState& halting() const noexcept { return halting_; }
    const std::map<int, Certificate>& certificates() const noexcept { return certificates_; }
    const std::map<Tuple, MemoEntry>& memo() const noexcept { return memo_; }
    const std::map<int, bool>& zero_flags() const noexcept { return zero_flags_; }
    int computed_through() const noexcept { return computed_through_; }

    static bool is_unit(const BasisRef& b) noexcept { return b.degree == 0 && b.index == 0; }
    static bool has_unit(std::span<const BasisRef> t) noexcept
    {
        return std::any_of(t.begin(), t.end(), [](const BasisRef& b) { return is_unit(b); });
    }

    /// Can the table answer arity-n queries without computing anything new?
    bool resolvable(int n) const noexcept
    {
        if (opts_.mode == Mode::brute_force)
            return true;
        return n <= computed_through_ || (halting_.complete && n >= halting_.arity);
    }

    // -- f_1 -----------------------------------------------------------------

    /// The cycle-choosing section on a basis element. In reduced mode it is
    /// the k[z]-linear extension of the section on the k[z]-basis.
    GradedEndomorphism section(const BasisRef& b) const
    {
        if (opts_.mode == Mode::brute_force)
            return hom_->representative(b.degree, b.index);
        auto out = GradedEndomorphism::zero(*res_, b.degree);
        for (const auto& t : decompose(b)) {
            const auto& base = kz_.basis[t.kz_index];
            auto term = ainf::compose(*res_, zeta_power(t.z_power), hom_->representative(base.degree, base.index));
            out = add_scaled(*res_, out, t.coeff, term);
        }
        return out;
    }

    GradedEndomorphism section(const HomologyClass& c) const
    {
        auto out = GradedEndomorphism::zero(*res_, c.degree);
        for (std::size_t i = 0; i < c.coords.size(); ++i)
            if (c.coords[i])
                out = add_scaled(*res_, out, c.coords[i], section(BasisRef{c.degree, i}));
        return out;
    }

    // -- k[z] decomposition -----------------------------------------------------

    struct KzTerm {
        Scalar coeff;
        int z_power;
        std::size_t kz_index;
    };

    /// b = sum coeff * z^{z_power} * kz_basis[kz_index].
    std::vector<KzTerm> decompose(const BasisRef& b) const
    {
        {
            std::lock_guard lock(*cache_mutex_);
            auto it = decomposition_.find(b);
            if (it != decomposition_.end())
                return it->second;
        }
        const auto& k = field();
        const int zdeg = kz_.z.degree;
        std::vector<std::pair<int, std::size_t>> cands;
        for (std::size_t j = 0; j < kz_.basis.size(); ++j) {
            int rest = b.degree - kz_.basis[j].degree;
            if (rest >= 0 && rest % zdeg == 0)
                cands.emplace_back(rest / zdeg, j);
        }
        const std::size_t dim = hom_->dim(b.degree);
        ff::Matrix m(dim, cands.size());
        for (std::size_t c = 0; c < cands.size(); ++c) {
            const auto& base = kz_.basis[cands[c].second];
            auto rep = ainf::compose(*res_, zeta_power(cands[c].first), hom_->representative(base.degree, base.index));
            auto cls = hom_->class_of(rep);
            for (std::size_t r = 0; r < dim; ++r)
                m(r, c) = cls.coords[r];
        }
        if (cands.size() != dim || ff::rank(k, m) != dim)
            throw Error(ErrorKind::invalid_parameter,
                        "H^" + std::to_string(b.degree) + " is not free over k[z] on the supplied basis");
        ff::Vector target(dim, 0);
        target.at(b.index) = 1;
        auto sol = ff::solve(k, m, target);
        std::vector<KzTerm> out;
        for (std::size_t c = 0; c < cands.size(); ++c)
            if ((*sol)[c])
                out.push_back({(*sol)[c], cands[c].first, cands[c].second});
        std::lock_guard lock(*cache_mutex_);
        decomposition_.emplace(b, out);
        return out;
    }

    const GradedEndomorphism& zeta_power(int e) const
    {
        std::lock_guard lock(*cache_mutex_);
        if (zeta_powers_.empty())
            zeta_powers_.push_back(GradedEndomorphism::identity(*res_));
        while (static_cast<int>(zeta_powers_.size()) <= e) {
            hom_->require_degree(zeta_.degree() * static_cast<int>(zeta_powers_.size()));
            zeta_powers_.push_back(ainf::compose(*res_, zeta_, zeta_powers_.back()));
        }
        return zeta_powers_[static_cast<std::size_t>(e)];
    }

    /// z^e * c.
    HomologyClass z_times(int e, const HomologyClass& c) const
    {
        if (e == 0 || c.is_zero())
            return e == 0 ? c : zero_class(c.degree + e * kz_.z.degree);
        return hom_->class_of(ainf::compose(*res_, zeta_power(e), section(c)));
    }

    // -- values ------------------------------------------------------------------

    /// m_n on a basis tuple.
    HomologyClass high_product(const Tuple& t) { return value(t).first; }

    /// f_n on a basis tuple.
    GradedEndomorphism high_map(const Tuple& t) { return value(t).second; }

    /// m_n and f_n on arbitrary homogeneous classes, extended multilinearly.
    std::pair<HomologyClass, GradedEndomorphism> evaluate(const std::vector<HomologyClass>& args)
    {
        const int n = static_cast<int>(args.size());
        int s = 0;
        for (const auto& a : args)
            s += a.degree;
        HomologyClass m = zero_class(s + 2 - n);
        std::optional<GradedEndomorphism> f;
        if (s + 1 - n >= 0)
            f = GradedEndomorphism::zero(*res_, s + 1 - n);
        Tuple t(args.size());
        std::function<void(std::size_t, Scalar)> rec = [&](std::size_t i, Scalar coeff) {
            if (i == args.size()) {
                auto [vm, vf] = value_opt(t);
                add_into(m, coeff, vm);
                if (f && vf)
                    *f = add_scaled(*res_, *f, coeff, *vf);
                return;
            }
            for (std::size_t c = 0; c < args[i].coords.size(); ++c) {
                if (!args[i].coords[c])
                    continue;
                t[i] = {args[i].degree, c};
                rec(i + 1, field().mul(coeff, args[i].coords[c]));
            }
        };
        rec(0, 1);
        if (!f)
            throw Error(ErrorKind::invalid_parameter, "f_n would have negative degree on this tuple");
        return {std::move(m), std::move(*f)};
    }

    /// Reduced-mode k[z]-linear extension from stored k[z]-basis values.
    std::pair<HomologyClass, GradedEndomorphism> extend_linear(const std::vector<HomologyClass>& args)
    {
        if (opts_.mode != Mode::reduced)
            throw Error(ErrorKind::invalid_parameter, "extend_linear is a reduced-mode operation");
        return evaluate(args);
    }

    /// The obstruction cycle Psi_n on a basis tuple, n >= 2 (no unit shortcut
    /// at the top level).
    GradedEndomorphism psi(const Tuple& a)
    {
        const int n = static_cast<int>(a.size());
        if (n < 2)
            throw Error(ErrorKind::invalid_parameter, "psi needs arity >= 2");
        const auto& k = field();
        std::vector<int> degs;
        for (const auto& b : a)
            degs.push_back(b.degree);
        const int s_total = total_degree(a);
        const int deg = s_total + 2 - n;
        if (deg < 0)
            throw Error(ErrorKind::invalid_parameter, "psi has negative degree on this tuple");
        auto out = GradedEndomorphism::zero(*res_, deg);

        for (int s = 1; s <= n - 1; ++s) {
            Tuple left(a.begin(), a.begin() + s), right(a.begin() + s, a.end());
            auto fl = value_opt(left).second;
            auto fr = value_opt(right).second;
            if (!fl || !fr || fl->is_zero() || fr->is_zero())
                continue;
            Scalar sign = eps1(degs, n, s) > 0 ? 1 : k.neg(1);
            out = add_scaled(*res_, out, sign, compose(*res_, *fl, *fr));
        }
        for (int j = 2; j <= n - 1; ++j)
            for (int kk = 0; kk <= n - j; ++kk) {
                Tuple inner(a.begin() + kk, a.begin() + kk + j);
                auto inner_m = value_opt(inner).first;
                if (inner_m.is_zero())
                    continue;
                std::vector<HomologyClass> args;
                for (int i = 0; i < kk; ++i)
                    args.push_back(basis_class(a[static_cast<std::size_t>(i)]));
                args.push_back(inner_m);
                for (int i = kk + j; i < n; ++i)
                    args.push_back(basis_class(a[static_cast<std::size_t>(i)]));
                auto term = evaluate(args).second;
                if (term.is_zero())
                    continue;
                Scalar sign = eps2(degs, n, kk, j) > 0 ? 1 : k.neg(1);
                out = add_scaled(*res_, out, sign, term);
            }
        return out;
    }

    /// Psi, m and f for one basis tuple, unit shortcuts bypassed.
    MemoEntry compute_entry(const Tuple& t)
    {
        auto p = psi(t);
        HomologyClass cls;
        try {
            cls = hom_->class_of(p);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::not_a_cycle)
                throw Error(ErrorKind::psi_not_cycle, "Psi on " + to_string(t) + " is not a cycle");
            throw;
        }
        HomologyClass m = negate(cls);
        auto target = add_scaled(*res_, p, 1, section(m));
        auto f = hom_->nullhomotopy(target);
        return {std::move(m), std::move(f), std::nullopt};
    }

    // -- driver --------------------------------------------------------------------

    /// Unit-free k[z]-basis tuples of arity n (reduced mode).
    std::vector<Tuple> frontier(int n) const
    {
        std::vector<Tuple> out;
        Tuple t(static_cast<std::size_t>(n));
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == t.size()) {
                out.push_back(t);
                return;
            }
            for (const auto& b : kz_nonunit_) {
                t[i] = b;
                rec(i + 1);
            }
        };
        rec(0);
        return out;
    }

    /// Unit-free tuples over basis classes of degree 1..brute_degree.
    std::vector<Tuple> brute_tuples(int n) const
    {
        std::vector<BasisRef> elems;
        for (int g = 1; g <= opts_.brute_degree; ++g)
            for (std::size_t i = 0; i < hom_->dim(g); ++i)
                elems.push_back({g, i});
        std::vector<Tuple> out;
        Tuple t(static_cast<std::size_t>(n));
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == t.size()) {
                out.push_back(t);
                return;
            }
            for (const auto& b : elems) {
                t[i] = b;
                rec(i + 1);
            }
        };
        rec(0);
        return out;
    }

    Certificate certify_periodicity(int n)
    {
        std::vector<std::pair<Tuple, GradedEndomorphism>> values;
        for (const auto& t : frontier(n)) {
            auto it = memo_.find(t);
            if (it == memo_.end())
                throw Error(ErrorKind::certificate_missing, "arity " + std::to_string(n) + " is not fully computed");
            values.emplace_back(t, it->second.f);
        }
        std::vector<std::optional<PeriodicForm>> forms;
        auto cert = certify_values(*res_, zeta_, n, values, &forms);
        if (cert.periodic)
            for (std::size_t i = 0; i < values.size(); ++i)
                memo_[values[i].first].compact = forms[i];
        certificates_[n] = cert;
        return cert;
    }

    HaltingState halting_check()
    {
        if (auto t = find_halting_arity(zero_flags_))
            halting_ = {true, *t};
        return halting_;
    }

    StructureSummary compute_structure(int max_arity)
    {
        auto start = std::chrono::steady_clock::now();
        StructureSummary out;
        out.max_arity = max_arity;
        for (int n = 2; n <= max_arity; ++n) {
            if (opts_.mode == Mode::reduced && halting_.complete)
                break;
            try {
                if (opts_.mode == Mode::reduced)
                    populate_arity(n);
                else
                    populate_brute(n);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::truncation_too_short)
                    throw Error(ErrorKind::truncation_too_short,
                                e.message() + " (while computing arity " + std::to_string(n) + ")");
                throw;
            }
        }
        out.computed_through = computed_through_;
        out.halting = halting_;
        out.certificates = certificates_;
        for (const auto& [t, e] : memo_) {
            if (static_cast<int>(t.size()) > max_arity)
                continue;
            if (opts_.mode == Mode::brute_force && !in_brute_range(t))
                continue;
            if (!e.m.is_zero())
                out.nonzero_products.emplace_back(t, e.m);
            if (!e.f.is_zero())
                out.nonzero_maps.emplace_back(t, e.f);
        }
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return out;
    }

    /// All k[z]-basis values of arity n, then the certificate and halting
    /// state (reduced mode).
    void populate_arity(int n)
    {
        for (int k = 2; k < n; ++k)
            if (k > computed_through_)
                populate_arity(k);
        if (n <= computed_through_)
            return;
        auto tuples = frontier(n);
        std::vector<MemoEntry> entries(tuples.size());
        if (opts_.parallel && tuples.size() > 1) {
            std::vector<std::future<MemoEntry>> futs;
            for (const auto& t : tuples)
                futs.push_back(std::async(std::launch::async, [this, t] { return compute_entry(t); }));
            for (std::size_t i = 0; i < futs.size(); ++i)
                entries[i] = futs[i].get();
        } else {
            for (std::size_t i = 0; i < tuples.size(); ++i)
                entries[i] = compute_entry(tuples[i]);
        }
        bool zero = true;
        for (std::size_t i = 0; i < tuples.size(); ++i) {
            zero = zero && entries[i].m.is_zero() && entries[i].f.is_zero();
            memo_[tuples[i]] = std::move(entries[i]);
        }
        zero_flags_[n] = zero;
        computed_through_ = n;
        auto cert = certify_periodicity(n);
        if (!cert.commutes)
            throw Error(ErrorKind::commutation_failure, cert.detail);
        if (!cert.zeta_identity)
            throw Error(ErrorKind::certificate_missing, cert.detail);
        halting_check();
    }

    void populate_brute(int n)
    {
        bool zero = true;
        for (const auto& t : brute_tuples(n)) {
            const auto& e = entry(t);
            zero = zero && e.m.is_zero() && e.f.is_zero();
        }
        zero_flags_[n] = zero;
        computed_through_ = std::max(computed_through_, n);
        halting_check();
    }

    /// Reinstalls stored basis values (e.g. read back from a file) and
    /// rebuilds zero flags, certificates and the halting state from them.
    void restore(std::map<Tuple, MemoEntry> memo, int computed_through)
    {
        memo_ = std::move(memo);
        zero_flags_.clear();
        certificates_.clear();
        halting_ = {};
        computed_through_ = 1;
        for (int n = 2; n <= computed_through; ++n) {
            auto tuples = opts_.mode == Mode::reduced ? frontier(n) : brute_tuples(n);
            bool zero = true;
            for (const auto& t : tuples) {
                auto it = memo_.find(t);
                if (it == memo_.end())
                    throw Error(ErrorKind::invalid_parameter, "no stored value for " + to_string(t));
                zero = zero && it->second.m.is_zero() && it->second.f.is_zero();
            }
            zero_flags_[n] = zero;
            computed_through_ = n;
            if (opts_.mode == Mode::reduced) {
                auto cert = certify_periodicity(n);
                if (!cert.commutes)
                    throw Error(ErrorKind::commutation_failure, cert.detail);
            }
            halting_check();
        }
    }

    /// Overwrites one stored value. Exists so that tests can corrupt a
    /// record and watch the checks catch it.
    void replace_entry(const Tuple& t, MemoEntry e) { memo_[t] = std::move(e); }

    HomologyClass zero_class(int g) const { return g < 0 ? HomologyClass{g, {}} : hom_->zero_class(g); }
    HomologyClass basis_class(const BasisRef& b) const { return hom_->basis_class(b.degree, b.index); }

    const ff::Field& field() const noexcept { return res_->algebra().field(); }

private:
    bool in_brute_range(const Tuple& t) const
    {
        return std::all_of(t.begin(), t.end(), [&](const BasisRef& b) { return b.degree >= 1 && b.degree <= opts_.brute_degree; });
    }

    HomologyClass negate(const HomologyClass& c) const
    {
        HomologyClass out = c;
        for (auto& v : out.coords)
            v = field().neg(v);
        return out;
    }

    void add_into(HomologyClass& acc, Scalar coeff, const HomologyClass& v) const
    {
        if (v.coords.empty())
            return;
        if (acc.coords.size() != v.coords.size())
            acc.coords.resize(v.coords.size(), 0);
        for (std::size_t i = 0; i < v.coords.size(); ++i)
            acc.coords[i] = field().add(acc.coords[i], field().mul(coeff, v.coords[i]));
    }

    /// Value on a basis tuple; the map is nullopt when its degree is negative.
    std::pair<HomologyClass, std::optional<GradedEndomorphism>> value_opt(const Tuple& t)
    {
        const int n = static_cast<int>(t.size());
        const int s = total_degree(t);
        const int fdeg = s + 1 - n;
        auto zero_map = [&]() -> std::optional<GradedEndomorphism> {
            if (fdeg < 0)
                return std::nullopt;
            return GradedEndomorphism::zero(*res_, fdeg);
        };
        if (n == 1)
            return {zero_class(s + 1), section(t[0])};
        if (has_unit(t)) {
            if (n == 2)
                return {basis_class(is_unit(t[0]) ? t[1] : t[0]), zero_map()};
            return {zero_class(s + 2 - n), zero_map()};
        }
        if (opts_.mode == Mode::reduced && halting_.complete && n >= halting_.arity)
            return {zero_class(s + 2 - n), zero_map()};
        if (opts_.mode == Mode::brute_force) {
            const auto& e = entry(t);
            return {e.m, e.f};
        }
        return reduced_value(t);
    }

    std::pair<HomologyClass, GradedEndomorphism> value(const Tuple& t)
    {
        auto [m, f] = value_opt(t);
        if (!f)
            throw Error(ErrorKind::invalid_parameter, "f_n would have negative degree on " + to_string(t));
        return {std::move(m), std::move(*f)};
    }

    /// Multilinear expansion over the k[z]-decompositions of the entries.
    std::pair<HomologyClass, std::optional<GradedEndomorphism>> reduced_value(const Tuple& t)
    {
        const int n = static_cast<int>(t.size());
        const int s = total_degree(t);
        HomologyClass m = zero_class(s + 2 - n);
        auto f = GradedEndomorphism::zero(*res_, s + 1 - n);
        if (n > computed_through_ && !(halting_.complete && n >= halting_.arity))
            populate_arity(n);
        std::vector<std::vector<KzTerm>> parts;
        for (const auto& b : t)
            parts.push_back(decompose(b));
        Tuple base(t.size());
        std::function<void(std::size_t, Scalar, int)> rec = [&](std::size_t i, Scalar coeff, int zp) {
            if (i == t.size()) {
                if (zp > 0) {
                    auto it = certificates_.find(n);
                    if (it == certificates_.end() || !it->second.commutes || !it->second.zeta_identity)
                        throw Error(ErrorKind::certificate_missing,
                                    "arity " + std::to_string(n) + " has no periodicity certificate");
                }
                HomologyClass bm;
                std::optional<GradedEndomorphism> bf;
                if (has_unit(base)) {
                    if (n == 2)
                        bm = basis_class(is_unit(base[0]) ? base[1] : base[0]);
                } else {
                    if (halting_.complete && n >= halting_.arity)
                        return;
                    const auto& e = memo_.at(base);
                    bm = e.m;
                    bf = e.f;
                }
                if (!bm.coords.empty() && !bm.is_zero())
                    add_into(m, coeff, z_times(zp, bm));
                if (bf && !bf->is_zero())
                    f = add_scaled(*res_, f, coeff, ainf::compose(*res_, zeta_power(zp), *bf));
                return;
            }
            for (const auto& term : parts[i]) {
                base[i] = kz_.basis[term.kz_index];
                rec(i + 1, field().mul(coeff, term.coeff), zp + term.z_power);
            }
        };
        rec(0, 1, 0);
        return {std::move(m), std::move(f)};
    }

    /// Brute-force memo lookup with on-demand computation.
    const MemoEntry& entry(const Tuple& t)
    {
        auto it = memo_.find(t);
        if (it != memo_.end())
            return it->second;
        auto e = compute_entry(t);
        return memo_.emplace(t, std::move(e)).first->second;
    }

    std::shared_ptr<const PeriodicResolution> res_;
    std::unique_ptr<HomologyModel> hom_;
    KzStructure kz_;
    Options opts_;
    GradedEndomorphism zeta_;
    std::vector<BasisRef> kz_nonunit_;

    std::map<Tuple, MemoEntry> memo_;
    std::map<int, bool> zero_flags_;
    std::map<int, Certificate> certificates_;
    HaltingState halting_;
    int computed_through_ = 1;

    std::unique_ptr<std::mutex> cache_mutex_;
    mutable std::map<BasisRef, std::vector<KzTerm>> decomposition_;
    mutable std::deque<GradedEndomorphism> zeta_powers_;
};

/// Record for Ext over F_p[a]/(a^q) on the built-in resolution of length L.
inline std::unique_ptr<AInfRecord> make_cyclic_record(Scalar p, int q, int length, SectionMode section,
                                                      AInfRecord::Options opts = {})
{
    auto res = std::make_shared<const PeriodicResolution>(build_cyclic_resolution(p, q, length));
    return std::make_unique<AInfRecord>(std::move(res), section, cyclic_kz_structure(), opts);
}

} // namespace ainf
