#pragma once

/**
 * @file endo_dga.hpp
 * @brief The endomorphism dg-algebra End_R(X) of a truncated resolution.
 *
 * Grading is cohomological: a map of degree g has components
 * X_n -> X_{n-g} for g <= n <= L. The differential is
 *
 *     (df)_n = d_{n-g} f_n - (-1)^g f_{n-1} d_n,        g+1 <= n <= L,
 *
 * and the product is composition, (f g)_n = f_{n-|g|} g_n. Both only look at
 * positions <= n, so every computation below is the exact truncation of the
 * untruncated one.
 *
 * Homology in degree g is detected at the bottom of the truncation: a cycle
 * is a boundary iff its component at position g lies in the image of
 * (h_g, h_{g-1}) |-> d_1 h_g - (-1)^{g-1} h_{g-1} d_g. Everything above that
 * position can then be lifted one position at a time because X is exact.
 */

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ainf/error.hpp"
#include "ainf/ff_linalg.hpp"
#include "ainf/resolution.hpp"

namespace ainf {

class GradedEndomorphism {
public:
    GradedEndomorphism() = default;
    GradedEndomorphism(int degree, int length, std::vector<AlgebraMap> components)
        : degree_(degree), length_(length), comps_(std::move(components))
    {
        if (degree_ < 0)
            throw Error(ErrorKind::invalid_parameter, "negative degree endomorphism");
        if (static_cast<int>(comps_.size()) != length_ - degree_ + 1)
            throw Error(ErrorKind::dimension_mismatch, "component count does not match [degree, L]");
    }

    static GradedEndomorphism zero(const PeriodicResolution& res, int degree)
    {
        check_degree(res, degree);
        std::vector<AlgebraMap> comps;
        for (int n = degree; n <= res.length(); ++n)
            comps.emplace_back(res.rank(n - degree), res.rank(n), res.algebra().dim());
        return {degree, res.length(), std::move(comps)};
    }

    static GradedEndomorphism identity(const PeriodicResolution& res)
    {
        std::vector<AlgebraMap> comps;
        for (int n = 0; n <= res.length(); ++n)
            comps.push_back(identity_map(res.algebra(), res.rank(n)));
        return {0, res.length(), std::move(comps)};
    }

    static void check_degree(const PeriodicResolution& res, int degree)
    {
        if (degree < 0)
            throw Error(ErrorKind::invalid_parameter, "negative degree endomorphism");
        if (degree > res.length())
            throw Error(ErrorKind::truncation_too_short,
                        "degree " + std::to_string(degree) + " exceeds truncation length " + std::to_string(res.length()));
    }

    int degree() const noexcept { return degree_; }
    int first() const noexcept { return degree_; }
    int last() const noexcept { return length_; }
    std::size_t size() const noexcept { return comps_.size(); }

    const AlgebraMap& at(int n) const
    {
        if (n < degree_ || n > length_)
            throw Error(ErrorKind::truncation_too_short, "component at position " + std::to_string(n) + " not stored");
        return comps_[static_cast<std::size_t>(n - degree_)];
    }
    AlgebraMap& at(int n)
    {
        if (n < degree_ || n > length_)
            throw Error(ErrorKind::truncation_too_short, "component at position " + std::to_string(n) + " not stored");
        return comps_[static_cast<std::size_t>(n - degree_)];
    }
    const std::vector<AlgebraMap>& components() const noexcept { return comps_; }

    bool is_zero() const noexcept
    {
        for (const auto& c : comps_)
            if (!c.is_zero())
                return false;
        return true;
    }
    /// First position whose component is nonzero.
    std::optional<int> first_nonzero() const
    {
        for (int n = degree_; n <= length_; ++n)
            if (!at(n).is_zero())
                return n;
        return std::nullopt;
    }

    bool operator==(const GradedEndomorphism&) const = default;

private:
    int degree_ = 0;
    int length_ = 0;
    std::vector<AlgebraMap> comps_;
};

inline GradedEndomorphism differential(const PeriodicResolution& res, const GradedEndomorphism& f)
{
    const int g = f.degree();
    GradedEndomorphism::check_degree(res, g + 1);
    const auto& alg = res.algebra();
    const Scalar sign = alg.field().neg(alg.field().sign(g));
    std::vector<AlgebraMap> comps;
    for (int n = g + 1; n <= res.length(); ++n)
        comps.push_back(add_scaled(alg, compose(alg, res.d(n - g), f.at(n)), sign, compose(alg, f.at(n - 1), res.d(n))));
    return {g + 1, res.length(), std::move(comps)};
}

/// f o g.
inline GradedEndomorphism compose(const PeriodicResolution& res, const GradedEndomorphism& f,
                                  const GradedEndomorphism& g)
{
    const int deg = f.degree() + g.degree();
    GradedEndomorphism::check_degree(res, deg);
    std::vector<AlgebraMap> comps;
    for (int n = deg; n <= res.length(); ++n)
        comps.push_back(compose(res.algebra(), f.at(n - g.degree()), g.at(n)));
    return {deg, res.length(), std::move(comps)};
}

/// f + c*g (equal degrees).
inline GradedEndomorphism add_scaled(const PeriodicResolution& res, const GradedEndomorphism& f, Scalar c,
                                     const GradedEndomorphism& g)
{
    if (f.degree() != g.degree() || f.last() != g.last())
        throw Error(ErrorKind::dimension_mismatch, "add: degrees differ");
    std::vector<AlgebraMap> comps;
    for (int n = f.first(); n <= f.last(); ++n)
        comps.push_back(add_scaled(res.algebra(), f.at(n), c, g.at(n)));
    return {f.degree(), f.last(), std::move(comps)};
}

inline GradedEndomorphism scale(const PeriodicResolution& res, Scalar c, const GradedEndomorphism& f)
{
    std::vector<AlgebraMap> comps;
    for (const auto& m : f.components())
        comps.push_back(scale(res.algebra(), c, m));
    return {f.degree(), f.last(), std::move(comps)};
}

/// m_1 = differential and m_2 = composition, with the differential cached.
class DGAElement {
public:
    DGAElement(std::shared_ptr<const PeriodicResolution> res, GradedEndomorphism value)
        : res_(std::move(res)), value_(std::move(value))
    {
    }
    const GradedEndomorphism& value() const noexcept { return value_; }
    const GradedEndomorphism& boundary() const
    {
        if (!boundary_)
            boundary_ = differential(*res_, value_);
        return *boundary_;
    }

private:
    std::shared_ptr<const PeriodicResolution> res_;
    GradedEndomorphism value_;
    mutable std::optional<GradedEndomorphism> boundary_;
};

/// A periodic map stored as one block of `period` components starting at
/// position `base` (the map's degree).
struct PeriodicForm {
    int degree = 0;
    int period = 0;
    int base = 0;
    std::vector<AlgebraMap> block;

    GradedEndomorphism expand(const PeriodicResolution& res) const
    {
        GradedEndomorphism::check_degree(res, degree);
        std::vector<AlgebraMap> comps;
        for (int n = degree; n <= res.length(); ++n)
            comps.push_back(block[static_cast<std::size_t>((n - base) % period)]);
        return {degree, res.length(), std::move(comps)};
    }

    bool operator==(const PeriodicForm&) const = default;
};

/// nullopt when some f_{n+period} != f_n.
inline std::optional<PeriodicForm> periodic_compact(const GradedEndomorphism& f, int period)
{
    if (period < 1)
        throw Error(ErrorKind::invalid_parameter, "period must be positive");
    if (static_cast<int>(f.size()) < 2 * period)
        throw Error(ErrorKind::truncation_too_short,
                    "periodicity needs " + std::to_string(2 * period) + " components, have " + std::to_string(f.size()));
    for (int n = f.first(); n + period <= f.last(); ++n)
        if (!(f.at(n) == f.at(n + period)))
            return std::nullopt;
    PeriodicForm form{f.degree(), period, f.first(), {}};
    for (int i = 0; i < period; ++i)
        form.block.push_back(f.at(f.first() + i));
    return form;
}

/// The degree-1 cocycle representing x for the built-in cyclic resolution:
/// 1 at odd positions, -a^{q-2} at even positions. The sign makes it a cycle
/// in every characteristic.
inline GradedEndomorphism cyclic_xi(const PeriodicResolution& res)
{
    if (!res.is_cyclic())
        throw Error(ErrorKind::invalid_parameter, "xi is only defined for the built-in cyclic resolution");
    const auto& alg = res.algebra();
    std::vector<AlgebraMap> comps;
    for (int n = 1; n <= res.length(); ++n)
        comps.push_back(n % 2 == 1 ? scalar_map(alg, alg.one())
                                   : scalar_map(alg, alg.monomial(alg.q() - 2, alg.field().neg(1))));
    return {1, res.length(), std::move(comps)};
}

/// The degree-2 cocycle representing y: identity maps X_n -> X_{n-2}.
inline GradedEndomorphism cyclic_eta(const PeriodicResolution& res)
{
    if (!res.is_cyclic())
        throw Error(ErrorKind::invalid_parameter, "eta is only defined for the built-in cyclic resolution");
    GradedEndomorphism::check_degree(res, 2);
    const auto& alg = res.algebra();
    std::vector<AlgebraMap> comps;
    for (int n = 2; n <= res.length(); ++n)
        comps.push_back(scalar_map(alg, alg.one()));
    return {2, res.length(), std::move(comps)};
}

struct HomologyClass {
    int degree = 0;
    ff::Vector coords;

    bool is_zero() const noexcept
    {
        for (auto v : coords)
            if (v)
                return false;
        return true;
    }
    bool operator==(const HomologyClass&) const = default;
};

enum class SectionMode { closed_form, automatic };

/// Homology of End_R(X) with a fixed cycle-choosing section.
///
/// In `automatic` mode the basis of H^g is read off an echelon basis of
/// bottom components of cycles modulo bottom components of boundaries, and
/// each basis class is represented by the canonical lift of its bottom
/// component. In `closed_form` mode (cyclic resolution only) the representatives
/// are xi^e eta^j.
class HomologyModel {
public:
    HomologyModel(std::shared_ptr<const PeriodicResolution> res, SectionMode mode)
        : res_(std::move(res)), mode_(mode)
    {
        if (mode_ == SectionMode::closed_form && !res_->is_cyclic())
            throw Error(ErrorKind::invalid_parameter, "closed-form section requires the cyclic resolution");
    }
    HomologyModel(const HomologyModel&) = delete;
    HomologyModel& operator=(const HomologyModel&) = delete;

    const PeriodicResolution& resolution() const noexcept { return *res_; }
    std::shared_ptr<const PeriodicResolution> resolution_ptr() const noexcept { return res_; }
    SectionMode mode() const noexcept { return mode_; }

    /// Largest degree for which values keep at least two periods of
    /// components inside the truncation.
    int max_degree() const noexcept { return res_->length() - 2 * res_->period() + 1; }

    void require_degree(int g) const
    {
        if (g > max_degree())
            throw Error(ErrorKind::truncation_too_short,
                        "degree " + std::to_string(g) + " needs truncation length >= " +
                            std::to_string(g + 2 * res_->period() - 1) + ", have " + std::to_string(res_->length()));
    }

    std::size_t dim(int g) const { return g < 0 ? 0 : data(g).reps.size(); }

    HomologyClass zero_class(int g) const { return {g, ff::Vector(dim(g), 0)}; }
    HomologyClass basis_class(int g, std::size_t i) const
    {
        HomologyClass c = zero_class(g);
        c.coords.at(i) = 1;
        return c;
    }

    const GradedEndomorphism& representative(int g, std::size_t i) const { return data(g).reps.at(i); }

    std::vector<std::pair<HomologyClass, GradedEndomorphism>> homology_basis(int g) const
    {
        std::vector<std::pair<HomologyClass, GradedEndomorphism>> out;
        for (std::size_t i = 0; i < dim(g); ++i)
            out.emplace_back(basis_class(g, i), representative(g, i));
        return out;
    }

    /// f_1: a class to its representative cocycle (linear in the coordinates).
    GradedEndomorphism section(const HomologyClass& c) const
    {
        auto out = GradedEndomorphism::zero(*res_, c.degree);
        for (std::size_t i = 0; i < c.coords.size(); ++i)
            if (c.coords[i])
                out = add_scaled(*res_, out, c.coords[i], representative(c.degree, i));
        return out;
    }

    bool is_cycle(const GradedEndomorphism& f) const
    {
        if (f.degree() + 1 > res_->length())
            return true;
        return differential(*res_, f).is_zero();
    }

    HomologyClass class_of(const GradedEndomorphism& f) const
    {
        const int g = f.degree();
        if (!is_cycle(f))
            throw Error(ErrorKind::not_a_cycle, "class_of: degree " + std::to_string(g) + " map is not a cycle");
        const auto& dd = data(g);
        auto sol = dd.class_solver->solve(f.at(g).coordinates());
        if (!sol)
            throw Error(ErrorKind::not_a_cycle, "class_of: bottom component outside the cycle space");
        HomologyClass c{g, {}};
        c.coords.assign(sol->end() - static_cast<std::ptrdiff_t>(dd.reps.size()), sol->end());
        return c;
    }

    /// Canonical h with dh = f, solved from the bottom of the truncation up.
    GradedEndomorphism nullhomotopy(const GradedEndomorphism& f) const
    {
        const int g = f.degree();
        if (g < 1)
            throw Error(ErrorKind::invalid_parameter, "nullhomotopy needs degree >= 1");
        if (!is_cycle(f))
            throw Error(ErrorKind::not_a_boundary, "nullhomotopy: argument is not a cycle");
        const auto& res = *res_;
        const auto& alg = res.algebra();
        const auto& k = alg.field();
        const auto& dd = data(g);
        auto bottom = dd.boundary_solver->solve(f.at(g).coordinates());
        if (!bottom)
            throw Error(ErrorKind::not_a_boundary, "nullhomotopy: class in degree " + std::to_string(g) + " is nonzero");

        auto h = GradedEndomorphism::zero(res, g - 1);
        const std::size_t top_size = h.at(g).coordinates().size();
        std::copy(bottom->begin(), bottom->begin() + static_cast<std::ptrdiff_t>(top_size), h.at(g).coordinates().begin());
        std::copy(bottom->begin() + static_cast<std::ptrdiff_t>(top_size), bottom->end(), h.at(g - 1).coordinates().begin());

        const Scalar sign = k.sign(g - 1);
        for (int n = g + 1; n <= res.length(); ++n) {
            auto rhs = add_scaled(alg, f.at(n), sign, compose(alg, h.at(n - 1), res.d(n)));
            auto op = left_operator(alg, res.d(n - g + 1), res.rank(n));
            auto x = ff::solve(k, op, rhs.coordinates());
            if (!x)
                throw Error(ErrorKind::not_a_boundary, "nullhomotopy: lifting failed at position " + std::to_string(n));
            h.at(n).coordinates() = std::move(*x);
        }
        return h;
    }

    /// Canonical cycle of degree g whose bottom component is `bottom`.
    GradedEndomorphism lift(int g, const AlgebraMap& bottom) const
    {
        const auto& res = *res_;
        const auto& alg = res.algebra();
        auto f = GradedEndomorphism::zero(res, g);
        f.at(g) = bottom;
        const Scalar sign = alg.field().sign(g);
        for (int n = g + 1; n <= res.length(); ++n) {
            auto rhs = scale(alg, sign, compose(alg, f.at(n - 1), res.d(n)));
            auto op = left_operator(alg, res.d(n - g), res.rank(n));
            auto x = ff::solve(alg.field(), op, rhs.coordinates());
            if (!x)
                throw Error(ErrorKind::not_a_cycle, "lift: bottom component does not extend to a cycle");
            f.at(n).coordinates() = std::move(*x);
        }
        return f;
    }

private:
    struct DegreeData {
        std::vector<GradedEndomorphism> reps;
        std::optional<ff::Solver> boundary_solver; // unknowns (h_g, h_{g-1})
        std::optional<ff::Solver> class_solver;    // unknowns (h_g, h_{g-1}, c)
    };

    const DegreeData& data(int g) const
    {
        if (g < 0)
            throw Error(ErrorKind::invalid_parameter, "negative homology degree");
        require_degree(g);
        std::lock_guard lock(mutex_);
        auto it = cache_.find(g);
        if (it == cache_.end())
            it = cache_.emplace(g, std::make_unique<DegreeData>(build(g))).first;
        return *it->second;
    }

    /// Columns: h_g : X_g -> X_1, then h_{g-1} : X_{g-1} -> X_0 (if g >= 1).
    ff::Matrix bottom_boundary_operator(int g) const
    {
        const auto& res = *res_;
        const auto& alg = res.algebra();
        auto left = left_operator(alg, res.d(1), res.rank(g));
        if (g == 0)
            return left;
        auto right = right_operator(alg, res.d(g), 1);
        const Scalar sign = alg.field().neg(alg.field().sign(g - 1));
        ff::Matrix op(left.rows(), left.cols() + right.cols());
        for (std::size_t r = 0; r < op.rows(); ++r) {
            for (std::size_t c = 0; c < left.cols(); ++c)
                op(r, c) = left(r, c);
            for (std::size_t c = 0; c < right.cols(); ++c)
                op(r, left.cols() + c) = alg.field().mul(sign, right(r, c));
        }
        return op;
    }

    DegreeData build(int g) const
    {
        const auto& res = *res_;
        const auto& alg = res.algebra();
        const auto& k = alg.field();
        DegreeData dd;
        auto boundary_op = bottom_boundary_operator(g);
        const std::size_t bottom_dim = boundary_op.rows();

        if (mode_ == SectionMode::closed_form) {
            auto rep = GradedEndomorphism::identity(res);
            if (g >= 2) {
                auto eta = cyclic_eta(res);
                for (int j = 0; j < g / 2; ++j)
                    rep = compose(res, eta, rep);
            }
            if (g % 2 == 1)
                rep = compose(res, cyclic_xi(res), rep);
            if (!is_cycle(rep))
                throw Error(ErrorKind::not_a_cycle, "closed-form representative in degree " + std::to_string(g));
            dd.reps.push_back(std::move(rep));
        } else {
            // Cycle bottoms: kernel of (f_{g+1}, f_g) |-> d_1 f_{g+1} - (-1)^g f_g d_{g+1}.
            auto left = left_operator(alg, res.d(1), res.rank(g + 1));
            auto right = right_operator(alg, res.d(g + 1), 1);
            const Scalar sign = k.neg(k.sign(g));
            ff::Matrix op(left.rows(), left.cols() + right.cols());
            for (std::size_t r = 0; r < op.rows(); ++r) {
                for (std::size_t c = 0; c < left.cols(); ++c)
                    op(r, c) = left(r, c);
                for (std::size_t c = 0; c < right.cols(); ++c)
                    op(r, left.cols() + c) = k.mul(sign, right(r, c));
            }
            ff::Matrix bottoms(0, bottom_dim);
            std::vector<ff::Scalar> rows;
            auto kernel = ff::kernel_basis(k, op);
            for (const auto& v : kernel)
                rows.insert(rows.end(), v.end() - static_cast<std::ptrdiff_t>(bottom_dim), v.end());
            auto echelon = ff::rref(k, ff::Matrix(kernel.size(), bottom_dim, std::move(rows)));

            // Greedy complement of the boundary bottoms inside the cycle bottoms.
            std::vector<ff::Vector> span;
            for (std::size_t c = 0; c < boundary_op.cols(); ++c) {
                ff::Vector col(bottom_dim);
                for (std::size_t r = 0; r < bottom_dim; ++r)
                    col[r] = boundary_op(r, c);
                span.push_back(std::move(col));
            }
            auto span_rank = [&](const std::vector<ff::Vector>& vs) {
                ff::Matrix m(vs.size(), bottom_dim);
                for (std::size_t i = 0; i < vs.size(); ++i)
                    for (std::size_t j = 0; j < bottom_dim; ++j)
                        m(i, j) = vs[i][j];
                return ff::rank(k, m);
            };
            std::size_t current = span_rank(span);
            for (std::size_t r = 0; r < echelon.pivots.size(); ++r) {
                ff::Vector w(echelon.reduced.row(r).begin(), echelon.reduced.row(r).end());
                span.push_back(w);
                std::size_t next = span_rank(span);
                if (next == current) {
                    span.pop_back();
                    continue;
                }
                current = next;
                AlgebraMap bottom(1, res.rank(g), alg.dim(), std::move(w));
                dd.reps.push_back(lift(g, bottom));
            }
            // Strict unitality needs f_1(1) to be the identity itself.
            if (g == 0 && dd.reps.size() == 1)
                dd.reps[0] = GradedEndomorphism::identity(res);
        }

        // class solver: [boundary columns | representative bottoms].
        ff::Matrix cls(bottom_dim, boundary_op.cols() + dd.reps.size());
        for (std::size_t r = 0; r < bottom_dim; ++r) {
            for (std::size_t c = 0; c < boundary_op.cols(); ++c)
                cls(r, c) = boundary_op(r, c);
            for (std::size_t i = 0; i < dd.reps.size(); ++i)
                cls(r, boundary_op.cols() + i) = dd.reps[i].at(g).coordinates()[r];
        }
        dd.boundary_solver.emplace(k, boundary_op);
        dd.class_solver.emplace(k, cls);
        if (dd.class_solver->rank() != dd.boundary_solver->rank() + dd.reps.size())
            throw Error(ErrorKind::invalid_parameter,
                        "representatives in degree " + std::to_string(g) + " are not independent in homology");
        return dd;
    }

    std::shared_ptr<const PeriodicResolution> res_;
    SectionMode mode_;
    mutable std::mutex mutex_;
    mutable std::map<int, std::unique_ptr<DegreeData>> cache_;
};

} // namespace ainf
