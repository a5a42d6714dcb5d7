#pragma once

/**
 * @file notation.hpp
 * @brief Printing and parsing in the monomial basis x^e y^j of Ext over
 *        F_p[a]/(a^q).
 *
 * Basis class (g, 0) is x^{g mod 2} y^{g div 2}. Elements are written like
 * "y", "-xy²", "2·x*y^3"; both ^n and superscript digits are accepted, as are
 * '*' and '·' (or nothing) between factors.
 */

#include <cctype>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ainf/endo_dga.hpp"
#include "ainf/error.hpp"
#include "ainf/ff_linalg.hpp"
#include "ainf/resolution.hpp"

namespace ainf {

inline std::string superscript(long long n)
{
    static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
    std::string s;
    for (char c : std::to_string(n))
        s += c == '-' ? std::string("⁻") : std::string(digits[c - '0']);
    return s;
}

inline std::string monomial_name(int degree)
{
    const int e = degree % 2, j = degree / 2;
    std::string s = e ? "x" : "";
    if (j >= 1)
        s += "y";
    if (j >= 2)
        s += superscript(j);
    return s.empty() ? "1" : s;
}

/// c * name with the symmetric representative of c.
inline std::string scaled_name(const ff::Field& k, Scalar c, const std::string& name)
{
    const long long v = k.symmetric(c);
    if (v == 0)
        return "0";
    if (v == 1)
        return name;
    if (v == -1)
        return "-" + name;
    return std::to_string(v) + (name == "1" ? "" : name);
}

/// A homology class of the cyclic family (every H^g is one-dimensional).
inline std::string class_to_string(const ff::Field& k, const HomologyClass& c)
{
    if (c.is_zero())
        return "0";
    std::string s;
    for (std::size_t i = 0; i < c.coords.size(); ++i) {
        if (!c.coords[i])
            continue;
        std::string name = monomial_name(c.degree);
        if (c.coords.size() > 1)
            name += "[" + std::to_string(i) + "]";
        std::string term = scaled_name(k, c.coords[i], name);
        if (!s.empty())
            s += term[0] == '-' ? " - " + term.substr(1) : " + " + term;
        else
            s = term;
    }
    return s;
}

/// Element of F_p[a]/(a^q) written in a = α.
inline std::string algebra_to_string(const ff::Field& k, std::span<const Scalar> coeffs)
{
    std::string s;
    for (std::size_t e = 0; e < coeffs.size(); ++e) {
        if (!coeffs[e])
            continue;
        std::string name = e == 0 ? "1" : e == 1 ? "α" : "α" + superscript(static_cast<long long>(e));
        std::string term = scaled_name(k, coeffs[e], name);
        if (!s.empty())
            s += term[0] == '-' ? " - " + term.substr(1) : " + " + term;
        else
            s = term;
    }
    return s.empty() ? "0" : s;
}

inline std::string map_component_to_string(const ff::Field& k, const AlgebraMap& m)
{
    if (m.target_rank() == 1 && m.source_rank() == 1)
        return algebra_to_string(k, m.entry(0, 0));
    std::string s = "[";
    for (std::size_t i = 0; i < m.target_rank(); ++i) {
        s += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.source_rank(); ++j)
            s += (j ? ", " : "") + algebra_to_string(k, m.entry(i, j));
        s += "]";
    }
    return s + "]";
}

// ---------------------------------------------------------------------------
// Parsing

/// A homogeneous element c * x^e y^j, or zero.
struct ParsedElement {
    bool zero = true;
    int degree = 0;
    Scalar coeff = 0;
};

namespace detail {

class ExprParser {
public:
    ExprParser(const ff::Field& k, std::string_view src) : k_(k), s_(src) {}

    ParsedElement element()
    {
        ParsedElement acc;
        bool first = true;
        for (;;) {
            skip_ws();
            int sign = 1;
            if (eat('-'))
                sign = -1;
            else if (!first && !eat('+'))
                break;
            else if (first)
                eat('+');
            skip_ws();
            auto t = term();
            if (sign < 0)
                t.coeff = k_.neg(t.coeff);
            acc = add(acc, t);
            first = false;
            skip_ws();
            if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-'))
                break;
        }
        return acc;
    }

    bool at_end()
    {
        skip_ws();
        return pos_ >= s_.size();
    }
    bool eat(char c)
    {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c)
    {
        if (!eat(c))
            fail(std::string("expected '") + c + "'");
    }
    std::string word()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }
    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(ErrorKind::parse_error, what + " at offset " + std::to_string(pos_) + " in \"" + std::string(s_) + "\"");
    }

private:
    ParsedElement add(ParsedElement a, const ParsedElement& b)
    {
        if (b.zero)
            return a;
        if (a.zero)
            return b;
        if (a.degree != b.degree)
            fail("element is not homogeneous");
        a.coeff = k_.add(a.coeff, b.coeff);
        a.zero = a.coeff == 0;
        return a;
    }

    void skip_ws()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool eat_separator()
    {
        skip_ws();
        if (s_.substr(pos_, 1) == "*") {
            ++pos_;
            return true;
        }
        if (s_.substr(pos_, 2) == "·") {
            pos_ += 2;
            return true;
        }
        return false;
    }

    std::optional<long long> number()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (start == pos_)
            return std::nullopt;
        return std::stoll(std::string(s_.substr(start, pos_ - start)));
    }

    long long exponent()
    {
        if (pos_ < s_.size() && s_[pos_] == '^') {
            ++pos_;
            auto n = number();
            if (!n)
                fail("expected exponent");
            return *n;
        }
        static const std::string_view digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
        long long v = 0;
        bool any = false;
        for (;;) {
            bool hit = false;
            for (int d = 0; d < 10; ++d)
                if (s_.substr(pos_, digits[d].size()) == digits[d]) {
                    v = v * 10 + d;
                    pos_ += digits[d].size();
                    hit = any = true;
                    break;
                }
            if (!hit)
                break;
        }
        return any ? v : 1;
    }

    ParsedElement term()
    {
        Scalar coeff = 1;
        bool have_factor = false;
        if (auto n = number()) {
            coeff = k_.reduce(*n);
            have_factor = true;
            eat_separator();
        }
        long long ex = 0, ey = 0;
        for (;;) {
            skip_ws();
            if (pos_ >= s_.size())
                break;
            char c = s_[pos_];
            if (c != 'x' && c != 'y' && c != '1')
                break;
            ++pos_;
            long long e = exponent();
            if (c == 'x')
                ex += e;
            else if (c == 'y')
                ey += e;
            have_factor = true;
            if (!eat_separator()) {
                skip_ws();
                if (pos_ >= s_.size() || (s_[pos_] != 'x' && s_[pos_] != 'y'))
                    break;
            }
        }
        if (!have_factor)
            fail("expected a term");
        ParsedElement out;
        // x^2 = 0 in the exterior factor
        if (coeff == 0 || ex > 1)
            return out;
        out.zero = false;
        out.degree = static_cast<int>(ex + 2 * ey);
        out.coeff = coeff;
        return out;
    }

    const ff::Field& k_;
    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline ParsedElement parse_element(const ff::Field& k, std::string_view src)
{
    detail::ExprParser p(k, src);
    auto e = p.element();
    if (!p.at_end())
        p.fail("trailing input");
    return e;
}

enum class QueryKind { product, map };

struct Query {
    QueryKind kind = QueryKind::product;
    std::vector<ParsedElement> args;
};

/// "product (x,x,x,x)", "m(y·x, x, x, x)", "map (x,x)", "f(x,x)".
inline Query parse_query(const ff::Field& k, std::string_view src)
{
    detail::ExprParser p(k, src);
    Query q;
    auto w = p.word();
    if (w == "product" || w == "m")
        q.kind = QueryKind::product;
    else if (w == "map" || w == "f")
        q.kind = QueryKind::map;
    else
        p.fail("expected 'product' or 'map'");
    p.expect('(');
    do {
        q.args.push_back(p.element());
    } while (p.eat(','));
    p.expect(')');
    if (!p.at_end())
        p.fail("trailing input");
    return q;
}

} // namespace ainf
