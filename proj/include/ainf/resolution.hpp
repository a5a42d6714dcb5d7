#pragma once

/**
 * @file resolution.hpp
 * @brief The coefficient ring R = F_p[a]/(a^q), R-linear maps between free
 *        R-modules, and periodic free resolutions of k = R/(a).
 *
 * An R-linear map R^s -> R^t is a t x s matrix of ring elements. It is stored
 * flat: entry (i, j) occupies coefficients [(i*s + j)*q, (i*s + j + 1)*q),
 * coefficient e being that of a^e. The same flat vector doubles as the
 * coordinate vector of the map when we solve linear equations for unknown
 * maps (see left_operator / right_operator).
 */

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ainf/error.hpp"
#include "ainf/ff_linalg.hpp"

namespace ainf {

using ff::Scalar;

struct AlgebraElement {
    ff::Vector coeffs;

    bool operator==(const AlgebraElement&) const = default;
};

class TruncatedPolyAlgebra {
public:
    TruncatedPolyAlgebra(Scalar p, int q) : field_(p), q_(q)
    {
        if (q < 3)
            throw Error(ErrorKind::invalid_parameter, "truncation exponent q must be >= 3, got " + std::to_string(q));
    }

    const ff::Field& field() const noexcept { return field_; }
    Scalar p() const noexcept { return field_.p(); }
    int q() const noexcept { return q_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(q_); }

    AlgebraElement zero() const { return {ff::Vector(dim(), 0)}; }
    AlgebraElement one() const { return monomial(0); }
    /// c * a^k; zero when k >= q.
    AlgebraElement monomial(int k, Scalar c = 1) const
    {
        AlgebraElement r = zero();
        if (k >= 0 && k < q_)
            r.coeffs[k] = field_.reduce(c);
        return r;
    }

    AlgebraElement add(const AlgebraElement& a, const AlgebraElement& b) const
    {
        AlgebraElement r = zero();
        for (std::size_t i = 0; i < dim(); ++i)
            r.coeffs[i] = field_.add(a.coeffs[i], b.coeffs[i]);
        return r;
    }
    AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) const
    {
        AlgebraElement r = zero();
        for (int i = 0; i < q_; ++i) {
            if (!a.coeffs[i])
                continue;
            for (int j = 0; i + j < q_; ++j)
                r.coeffs[i + j] = field_.add(r.coeffs[i + j], field_.mul(a.coeffs[i], b.coeffs[j]));
        }
        return r;
    }
    AlgebraElement scale(Scalar c, const AlgebraElement& a) const
    {
        AlgebraElement r = a;
        for (auto& v : r.coeffs)
            v = field_.mul(c, v);
        return r;
    }

    /// k-matrix of multiplication by a on R (q x q, column j = a * a^j).
    ff::Matrix multiplication_matrix(std::span<const Scalar> a) const
    {
        ff::Matrix m(dim(), dim());
        for (int j = 0; j < q_; ++j)
            for (int e = j; e < q_; ++e)
                m(e, j) = a[e - j];
        return m;
    }

    bool operator==(const TruncatedPolyAlgebra& o) const noexcept { return field_ == o.field_ && q_ == o.q_; }

private:
    ff::Field field_;
    int q_;
};

/// R-linear map between free modules, as a (target rank) x (source rank)
/// matrix over R.
class AlgebraMap {
public:
    AlgebraMap() = default;
    AlgebraMap(std::size_t target_rank, std::size_t source_rank, std::size_t q)
        : rows_(target_rank), cols_(source_rank), q_(q), data_(target_rank * source_rank * q, 0)
    {
    }
    AlgebraMap(std::size_t target_rank, std::size_t source_rank, std::size_t q, ff::Vector data)
        : rows_(target_rank), cols_(source_rank), q_(q), data_(std::move(data))
    {
        if (data_.size() != rows_ * cols_ * q_)
            throw Error(ErrorKind::dimension_mismatch, "algebra map data length does not match shape");
    }

    std::size_t target_rank() const noexcept { return rows_; }
    std::size_t source_rank() const noexcept { return cols_; }
    std::size_t q() const noexcept { return q_; }

    std::span<Scalar> entry(std::size_t i, std::size_t j) { return {data_.data() + (i * cols_ + j) * q_, q_}; }
    std::span<const Scalar> entry(std::size_t i, std::size_t j) const
    {
        return {data_.data() + (i * cols_ + j) * q_, q_};
    }
    AlgebraElement element(std::size_t i, std::size_t j) const
    {
        auto e = entry(i, j);
        return {ff::Vector(e.begin(), e.end())};
    }

    const ff::Vector& coordinates() const noexcept { return data_; }
    ff::Vector& coordinates() noexcept { return data_; }

    bool is_zero() const noexcept
    {
        for (auto v : data_)
            if (v)
                return false;
        return true;
    }

    bool operator==(const AlgebraMap&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0, q_ = 0;
    ff::Vector data_;
};

inline AlgebraMap scalar_map(const TruncatedPolyAlgebra& alg, const AlgebraElement& a)
{
    return AlgebraMap(1, 1, alg.dim(), a.coeffs);
}

inline AlgebraMap identity_map(const TruncatedPolyAlgebra& alg, std::size_t rank)
{
    AlgebraMap m(rank, rank, alg.dim());
    for (std::size_t i = 0; i < rank; ++i)
        m.entry(i, i)[0] = 1;
    return m;
}

/// f o g (apply g first).
inline AlgebraMap compose(const TruncatedPolyAlgebra& alg, const AlgebraMap& f, const AlgebraMap& g)
{
    if (f.source_rank() != g.target_rank())
        throw Error(ErrorKind::dimension_mismatch, "compose: ranks do not match");
    const auto& k = alg.field();
    const int q = alg.q();
    AlgebraMap r(f.target_rank(), g.source_rank(), alg.dim());
    for (std::size_t i = 0; i < f.target_rank(); ++i)
        for (std::size_t l = 0; l < f.source_rank(); ++l) {
            auto a = f.entry(i, l);
            for (std::size_t j = 0; j < g.source_rank(); ++j) {
                auto b = g.entry(l, j);
                auto out = r.entry(i, j);
                for (int u = 0; u < q; ++u) {
                    if (!a[u])
                        continue;
                    for (int v = 0; u + v < q; ++v)
                        if (b[v])
                            out[u + v] = k.add(out[u + v], k.mul(a[u], b[v]));
                }
            }
        }
    return r;
}

/// f + c*g.
inline AlgebraMap add_scaled(const TruncatedPolyAlgebra& alg, const AlgebraMap& f, Scalar c, const AlgebraMap& g)
{
    if (f.target_rank() != g.target_rank() || f.source_rank() != g.source_rank())
        throw Error(ErrorKind::dimension_mismatch, "add: shapes differ");
    const auto& k = alg.field();
    AlgebraMap r = f;
    auto& out = r.coordinates();
    const auto& in = g.coordinates();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = k.add(out[i], k.mul(c, in[i]));
    return r;
}

inline AlgebraMap scale(const TruncatedPolyAlgebra& alg, Scalar c, const AlgebraMap& f)
{
    AlgebraMap r = f;
    for (auto& v : r.coordinates())
        v = alg.field().mul(c, v);
    return r;
}

/// The underlying k-linear map: (target_rank*q) x (source_rank*q).
inline ff::Matrix flatten(const TruncatedPolyAlgebra& alg, const AlgebraMap& f)
{
    const std::size_t q = alg.dim();
    ff::Matrix m(f.target_rank() * q, f.source_rank() * q);
    for (std::size_t i = 0; i < f.target_rank(); ++i)
        for (std::size_t j = 0; j < f.source_rank(); ++j) {
            auto block = alg.multiplication_matrix(f.entry(i, j));
            for (std::size_t a = 0; a < q; ++a)
                for (std::size_t b = 0; b < q; ++b)
                    m(i * q + a, j * q + b) = block(a, b);
        }
    return m;
}

/// k-matrix of h |-> d o h on coordinate vectors, for unknown maps
/// h : R^{source_rank} -> R^{d.source_rank()}.
inline ff::Matrix left_operator(const TruncatedPolyAlgebra& alg, const AlgebraMap& d, std::size_t source_rank)
{
    const std::size_t q = alg.dim();
    const std::size_t s = source_rank;
    ff::Matrix m(d.target_rank() * s * q, d.source_rank() * s * q);
    for (std::size_t i = 0; i < d.target_rank(); ++i)
        for (std::size_t j = 0; j < d.source_rank(); ++j) {
            auto a = d.entry(i, j);
            for (std::size_t c = 0; c < s; ++c)
                for (std::size_t b = 0; b < q; ++b)
                    for (std::size_t e = b; e < q; ++e)
                        m((i * s + c) * q + e, (j * s + c) * q + b) = a[e - b];
        }
    return m;
}

/// k-matrix of h |-> h o d on coordinate vectors, for unknown maps
/// h : R^{d.target_rank()} -> R^{target_rank}.
inline ff::Matrix right_operator(const TruncatedPolyAlgebra& alg, const AlgebraMap& d, std::size_t target_rank)
{
    const std::size_t q = alg.dim();
    const std::size_t t = target_rank;
    ff::Matrix m(t * d.source_rank() * q, t * d.target_rank() * q);
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < d.target_rank(); ++j)
            for (std::size_t c = 0; c < d.source_rank(); ++c) {
                auto a = d.entry(j, c);
                for (std::size_t b = 0; b < q; ++b)
                    for (std::size_t e = b; e < q; ++e)
                        m((i * d.source_rank() + c) * q + e, (i * d.target_rank() + j) * q + b) = a[e - b];
            }
    return m;
}

/// Free resolution X_L -> ... -> X_0 -> k truncated at length L, with a
/// declared period. X_0 must be R itself; the augmentation is the constant
/// coefficient.
class PeriodicResolution {
public:
    PeriodicResolution(TruncatedPolyAlgebra alg, int period, std::vector<std::size_t> ranks,
                       std::vector<AlgebraMap> differentials)
        : alg_(std::move(alg)), period_(period), ranks_(std::move(ranks)), d_(std::move(differentials))
    {
        if (period_ < 1)
            throw Error(ErrorKind::invalid_parameter, "period must be positive");
        if (ranks_.size() < 3)
            throw Error(ErrorKind::invalid_parameter, "resolution length must be >= 2");
        if (ranks_[0] != 1)
            throw Error(ErrorKind::invalid_parameter, "X_0 must have rank 1");
        if (d_.size() + 1 != ranks_.size())
            throw Error(ErrorKind::dimension_mismatch, "need one differential per position 1..L");
        for (std::size_t n = 1; n < ranks_.size(); ++n) {
            const auto& dn = d_[n - 1];
            if (dn.target_rank() != ranks_[n - 1] || dn.source_rank() != ranks_[n] || dn.q() != alg_.dim())
                throw Error(ErrorKind::dimension_mismatch, "d_" + std::to_string(n) + " has the wrong shape");
        }
    }

    const TruncatedPolyAlgebra& algebra() const noexcept { return alg_; }
    int period() const noexcept { return period_; }
    /// Truncation index L: positions 0..L exist.
    int length() const noexcept { return static_cast<int>(ranks_.size()) - 1; }
    std::size_t rank(int n) const { return ranks_.at(static_cast<std::size_t>(n)); }
    /// d_n : X_n -> X_{n-1}, 1 <= n <= L.
    const AlgebraMap& d(int n) const
    {
        if (n < 1 || n > length())
            throw Error(ErrorKind::truncation_too_short, "differential d_" + std::to_string(n) + " outside truncation");
        return d_[static_cast<std::size_t>(n - 1)];
    }

    /// Set when the resolution is the built-in one for R = F_p[a]/(a^q).
    bool is_cyclic() const noexcept { return cyclic_; }
    void mark_cyclic() noexcept { cyclic_ = true; }

private:
    TruncatedPolyAlgebra alg_;
    int period_;
    std::vector<std::size_t> ranks_;
    std::vector<AlgebraMap> d_;
    bool cyclic_ = false;
};

/// R <-a- R <-a^{q-1}- R <-a- ... : d_n = a for odd n, a^{q-1} for even n.
inline PeriodicResolution build_cyclic_resolution(Scalar p, int q, int length)
{
    if (length < 2)
        throw Error(ErrorKind::invalid_parameter, "resolution length must be >= 2");
    TruncatedPolyAlgebra alg(p, q);
    std::vector<std::size_t> ranks(static_cast<std::size_t>(length) + 1, 1);
    std::vector<AlgebraMap> d;
    for (int n = 1; n <= length; ++n)
        d.push_back(scalar_map(alg, alg.monomial(n % 2 == 1 ? 1 : q - 1)));
    PeriodicResolution res(std::move(alg), 2, std::move(ranks), std::move(d));
    res.mark_cyclic();
    return res;
}

struct ExactnessEntry {
    enum class Check { composite_zero, exactness, periodicity };
    Check check;
    int position;
    bool ok;
    std::string detail;
};

struct ExactnessReport {
    bool passed = true;
    std::vector<ExactnessEntry> entries;

    std::vector<int> failing_positions() const
    {
        std::vector<int> out;
        for (const auto& e : entries)
            if (!e.ok)
                out.push_back(e.position);
        return out;
    }
};

/// d o d = 0 everywhere, ker d_n = im d_{n+1} for 1 <= n <= L-1 and ker(eps)
/// = im d_1, compared as k-dimensions of the flattened maps. Periodicity of
/// the declared period is reported as well.
inline ExactnessReport check_exactness(const PeriodicResolution& res)
{
    ExactnessReport report;
    const auto& alg = res.algebra();
    const auto& k = alg.field();
    auto record = [&](ExactnessEntry::Check c, int n, bool ok, std::string detail) {
        report.entries.push_back({c, n, ok, std::move(detail)});
        report.passed = report.passed && ok;
    };
    const int L = res.length();
    for (int n = 2; n <= L; ++n) {
        bool ok = compose(alg, res.d(n - 1), res.d(n)).is_zero();
        record(ExactnessEntry::Check::composite_zero, n, ok, ok ? "" : "d_{n-1} o d_n != 0");
    }
    {
        // ker(eps) on X_0 = R has dimension q - 1.
        auto im = ff::rank(k, flatten(alg, res.d(1)));
        bool ok = im == alg.dim() - 1;
        record(ExactnessEntry::Check::exactness, 0, ok,
               ok ? "" : "dim im d_1 = " + std::to_string(im) + ", dim ker eps = " + std::to_string(alg.dim() - 1));
    }
    for (int n = 1; n <= L - 1; ++n) {
        auto dn = flatten(alg, res.d(n));
        auto ker = dn.cols() - ff::rank(k, dn);
        auto im = ff::rank(k, flatten(alg, res.d(n + 1)));
        bool ok = ker == im;
        record(ExactnessEntry::Check::exactness, n, ok,
               ok ? "" : "dim ker d_n = " + std::to_string(ker) + ", dim im d_{n+1} = " + std::to_string(im));
    }
    const int pi = res.period();
    for (int n = 1; n + pi <= L; ++n) {
        bool ok = res.d(n) == res.d(n + pi);
        record(ExactnessEntry::Check::periodicity, n, ok, ok ? "" : "d_n != d_{n+period}");
    }
    return report;
}

} // namespace ainf
