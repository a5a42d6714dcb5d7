#pragma once

/**
 * @file ff_linalg.hpp
 * @brief Dense exact linear algebra over a prime field F_p.
 *
 * Everything downstream (homology, class identification, nullhomotopies)
 * reduces to solving k-linear systems, so this file fixes one canonical
 * convention: reduced row-echelon form, and solutions whose non-pivot
 * coordinates are zero. Determinism of the whole engine rests on that.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ainf/error.hpp"

namespace ainf::ff {

using Scalar = std::uint32_t;
using Vector = std::vector<Scalar>;

/// The prime field F_p. Elements are plain residues in [0, p).
class Field {
public:
    explicit Field(Scalar p) : p_(p)
    {
        if (!is_prime(p))
            throw Error(ErrorKind::invalid_parameter, "modulus " + std::to_string(p) + " is not prime");
        if (p >= (Scalar{1} << 30))
            throw Error(ErrorKind::invalid_parameter, "modulus too large");
        if (p <= 1024) {
            inverse_.assign(p, 0);
            for (Scalar a = 1; a < p; ++a)
                inverse_[a] = pow(a, p - 2);
        }
    }

    Scalar p() const noexcept { return p_; }

    Scalar reduce(std::int64_t v) const noexcept
    {
        auto r = v % static_cast<std::int64_t>(p_);
        return static_cast<Scalar>(r < 0 ? r + p_ : r);
    }
    Scalar add(Scalar a, Scalar b) const noexcept
    {
        Scalar s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Scalar sub(Scalar a, Scalar b) const noexcept { return a >= b ? a - b : a + p_ - b; }
    Scalar neg(Scalar a) const noexcept { return a == 0 ? 0 : p_ - a; }
    Scalar mul(Scalar a, Scalar b) const noexcept
    {
        return static_cast<Scalar>((static_cast<std::uint64_t>(a) * b) % p_);
    }
    Scalar inv(Scalar a) const
    {
        if (a == 0)
            throw Error(ErrorKind::invalid_parameter, "inverse of zero");
        return inverse_.empty() ? pow(a, p_ - 2) : inverse_[a];
    }
    Scalar pow(Scalar a, std::uint64_t e) const noexcept
    {
        Scalar r = 1 % p_;
        while (e) {
            if (e & 1)
                r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    /// (-1)^e as a field element.
    Scalar sign(long long e) const noexcept { return (e % 2 == 0) ? 1 % p_ : p_ - 1; }

    /// Symmetric representative in (-p/2, p/2], used only for display.
    long long symmetric(Scalar a) const noexcept
    {
        return a > p_ / 2 ? static_cast<long long>(a) - static_cast<long long>(p_) : a;
    }

    bool operator==(const Field& o) const noexcept { return p_ == o.p_; }

    static bool is_prime(Scalar n) noexcept
    {
        if (n < 2)
            return false;
        for (Scalar d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d)
            if (n % d == 0)
                return false;
        return true;
    }

private:
    Scalar p_;
    std::vector<Scalar> inverse_;
};

/// Row-major dense matrix of residues.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<Scalar> data)
        : rows_(rows), cols_(cols), data_(std::move(data))
    {
        if (data_.size() != rows_ * cols_)
            throw Error(ErrorKind::dimension_mismatch, "matrix data length does not match shape");
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Scalar operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<Scalar> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const Scalar> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    const std::vector<Scalar>& data() const noexcept { return data_; }

    bool is_zero() const noexcept
    {
        for (auto v : data_)
            if (v)
                return false;
        return true;
    }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

inline Matrix multiply(const Field& k, const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows())
        throw Error(ErrorKind::dimension_mismatch, "matrix product shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t l = 0; l < a.cols(); ++l) {
            Scalar x = a(i, l);
            if (!x)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) = k.add(c(i, j), k.mul(x, b(l, j)));
        }
    return c;
}

inline Vector apply(const Field& k, const Matrix& a, std::span<const Scalar> v)
{
    if (a.cols() != v.size())
        throw Error(ErrorKind::dimension_mismatch, "matrix-vector shape mismatch");
    Vector out(a.rows(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < a.cols(); ++j)
            acc += static_cast<std::uint64_t>(a(i, j)) * v[j] % k.p();
        out[i] = static_cast<Scalar>(acc % k.p());
    }
    return out;
}

struct Echelon {
    Matrix reduced;
    std::vector<std::size_t> pivots;
};

/// In-place Gauss-Jordan elimination. `track`, when given, receives the same
/// row operations (it must have as many rows as `m`).
inline std::vector<std::size_t> eliminate(const Field& k, Matrix& m, Matrix* track = nullptr)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t sel = r;
        while (sel < m.rows() && m(sel, c) == 0)
            ++sel;
        if (sel == m.rows())
            continue;
        if (sel != r) {
            for (std::size_t j = 0; j < m.cols(); ++j)
                std::swap(m(sel, j), m(r, j));
            if (track)
                for (std::size_t j = 0; j < track->cols(); ++j)
                    std::swap((*track)(sel, j), (*track)(r, j));
        }
        Scalar inv = k.inv(m(r, c));
        for (std::size_t j = 0; j < m.cols(); ++j)
            m(r, j) = k.mul(m(r, j), inv);
        if (track)
            for (std::size_t j = 0; j < track->cols(); ++j)
                (*track)(r, j) = k.mul((*track)(r, j), inv);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c) == 0)
                continue;
            Scalar f = m(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j)
                m(i, j) = k.sub(m(i, j), k.mul(f, m(r, j)));
            if (track)
                for (std::size_t j = 0; j < track->cols(); ++j)
                    (*track)(i, j) = k.sub((*track)(i, j), k.mul(f, (*track)(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline Echelon rref(const Field& k, Matrix m)
{
    auto pivots = eliminate(k, m);
    return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const Field& k, const Matrix& m) { return rref(k, m).pivots.size(); }

/// Echelonized basis of the right null space: one vector per free column,
/// with a 1 in that column and zeros in the other free columns.
inline std::vector<Vector> kernel_basis(const Field& k, const Matrix& a)
{
    auto [red, pivots] = rref(k, a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : pivots)
        is_pivot[c] = true;
    std::vector<Vector> basis;
    for (std::size_t free = 0; free < a.cols(); ++free) {
        if (is_pivot[free])
            continue;
        Vector v(a.cols(), 0);
        v[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = k.neg(red(r, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Factorized solver for repeated right-hand sides against one matrix.
/// Stores E with E*A = rref(A); a solve is then one matrix-vector product.
class Solver {
public:
    Solver(const Field& k, const Matrix& a) : k_(k), rows_(a.rows()), cols_(a.cols())
    {
        Matrix red = a;
        transform_ = Matrix::identity(a.rows());
        pivots_ = eliminate(k, red, &transform_);
    }

    std::size_t rank() const noexcept { return pivots_.size(); }
    const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

    std::optional<Vector> solve(std::span<const Scalar> b) const
    {
        if (b.size() != rows_)
            throw Error(ErrorKind::dimension_mismatch, "right-hand side length does not match rows");
        Vector y = apply(k_, transform_, b);
        for (std::size_t r = pivots_.size(); r < rows_; ++r)
            if (y[r] != 0)
                return std::nullopt;
        Vector x(cols_, 0);
        for (std::size_t r = 0; r < pivots_.size(); ++r)
            x[pivots_[r]] = y[r];
        return x;
    }

private:
    Field k_;
    std::size_t rows_, cols_;
    Matrix transform_;
    std::vector<std::size_t> pivots_;
};

/// Canonical solution of a*x = b (zeros in every non-pivot coordinate), or
/// nullopt when the system is inconsistent.
inline std::optional<Vector> solve(const Field& k, const Matrix& a, std::span<const Scalar> b)
{
    if (a.rows() != b.size())
        throw Error(ErrorKind::dimension_mismatch, "solve: a.rows() != b.size()");
    return Solver(k, a).solve(b);
}

} // namespace ainf::ff
