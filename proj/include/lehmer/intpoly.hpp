#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lehmer/bigint.hpp"
#include "lehmer/errors.hpp"

namespace lehmer {

// Dense integer polynomial, coefficients ascending (a_0 ... a_d).
// Normalized so the top entry is nonzero; the zero polynomial is empty.
class IntPoly {
public:
    IntPoly() = default;

    explicit IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }

    IntPoly(std::initializer_list<long> coeffs) {
        c_.reserve(coeffs.size());
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }

    static IntPoly zero() { return IntPoly(); }
    static IntPoly constant(BigInt v) {
        std::vector<BigInt> c;
        c.push_back(std::move(v));
        return IntPoly(std::move(c));
    }
    // x^k
    static IntPoly monomial(unsigned k, BigInt lead = BigInt(1)) {
        std::vector<BigInt> c(k + 1, BigInt(0));
        c[k] = std::move(lead);
        return IntPoly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    // degree of the zero polynomial is -1
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    const BigInt& operator[](std::size_t i) const {
        static const BigInt kZero(0);
        return i < c_.size() ? c_[i] : kZero;
    }
    const BigInt& leading() const { return c_.back(); }
    const BigInt& constant_term() const { return (*this)[0]; }
    const std::vector<BigInt>& coeffs() const { return c_; }

    bool operator==(const IntPoly& o) const { return c_ == o.c_; }
    bool operator!=(const IntPoly& o) const { return !(*this == o); }

    IntPoly operator-() const {
        std::vector<BigInt> r(c_);
        for (auto& v : r) v = -v;
        return IntPoly(std::move(r));
    }

    IntPoly operator+(const IntPoly& o) const {
        std::vector<BigInt> r(std::max(c_.size(), o.c_.size()), BigInt(0));
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
        return IntPoly(std::move(r));
    }
    IntPoly operator-(const IntPoly& o) const { return *this + (-o); }

    IntPoly operator*(const IntPoly& o) const {
        if (is_zero() || o.is_zero()) return IntPoly();
        std::vector<BigInt> r(c_.size() + o.c_.size() - 1, BigInt(0));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return IntPoly(std::move(r));
    }

    IntPoly operator*(const BigInt& k) const {
        if (sign(k) == 0) return IntPoly();
        std::vector<BigInt> r(c_);
        for (auto& v : r) v *= k;
        return IntPoly(std::move(r));
    }

    BigInt eval(const BigInt& x) const {
        BigInt acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + Rational(c_[i]);
        return acc;
    }

    IntPoly derivative() const {
        if (c_.size() <= 1) return IntPoly();
        std::vector<BigInt> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * BigInt(static_cast<unsigned long>(i));
        return IntPoly(std::move(r));
    }

    // gcd of coefficients (0 for the zero polynomial).
    BigInt content() const {
        BigInt g(0);
        for (const auto& v : c_) {
            g = gcd(g, v);
            if (g == 1) break;
        }
        return g;
    }

    // Content stripped, leading coefficient made positive.
    IntPoly primitive_part() const {
        if (is_zero()) return IntPoly();
        BigInt g = content();
        if (sign(leading()) < 0) g = -g;
        std::vector<BigInt> r(c_);
        for (auto& v : r) v = divexact(v, g);
        return IntPoly(std::move(r));
    }

    bool is_primitive() const { return !is_zero() && content() == 1; }
    bool is_monic() const { return !is_zero() && leading() == 1; }

    // x^d * f(1/x); requires a_0 != 0 so no roots collapse to zero.
    IntPoly reversed() const {
        if (is_zero() || sign(c_[0]) == 0)
            throw invalid_input("reverse requires a nonzero constant term");
        std::vector<BigInt> r(c_.rbegin(), c_.rend());
        return IntPoly(std::move(r));
    }

    // Quotient of exact division; throws internal_error when g does not divide.
    IntPoly divexact_by(const IntPoly& g) const {
        if (g.is_zero()) throw internal_error("polynomial division by zero");
        if (is_zero()) return IntPoly();
        std::vector<BigInt> rem(c_);
        int dr = degree(), dg = g.degree();
        if (dr < dg) throw internal_error("divexact_by: degree of divisor too large");
        std::vector<BigInt> q(dr - dg + 1, BigInt(0));
        for (int k = dr - dg; k >= 0; --k) {
            q[k] = lehmer::divexact(rem[k + dg], g.leading());
            if (sign(q[k]) != 0)
                for (int j = 0; j <= dg; ++j) rem[k + j] -= q[k] * g[j];
        }
        for (const auto& v : rem)
            if (sign(v) != 0) throw internal_error("divexact_by: inexact polynomial division");
        return IntPoly(std::move(q));
    }

    bool divides(const IntPoly& f) const {
        if (is_zero()) return f.is_zero();
        if (f.is_zero()) return true;
        if (f.degree() < degree()) return false;
        try {
            (void)f.divexact_by(*this);
            return true;
        } catch (const internal_error&) {
            return false;
        }
    }

    // Remainder of f modulo a monic divisor (exact over Z).
    IntPoly mod_monic(const IntPoly& m) const {
        if (!m.is_monic()) throw internal_error("mod_monic: divisor not monic");
        std::vector<BigInt> rem(c_);
        int dm = m.degree();
        for (int k = static_cast<int>(rem.size()) - 1; k >= dm; --k) {
            if (sign(rem[k]) == 0) continue;
            BigInt q = rem[k];
            for (int j = 0; j <= dm; ++j) rem[k - dm + j] -= q * m[j];
        }
        rem.resize(std::min<std::size_t>(rem.size(), dm));
        return IntPoly(std::move(rem));
    }

    // Max |a_i|.
    BigInt height() const {
        BigInt h(0);
        for (const auto& v : c_) {
            BigInt a = abs(v);
            if (a > h) h = a;
        }
        return h;
    }

    std::uint64_t hash() const {
        std::uint64_t h = 0x243f6a8885a308d3ULL;
        for (const auto& v : c_) {
            std::uint64_t x = static_cast<std::uint64_t>(mpz_get_ui(v.get_mpz_t()));
            x ^= static_cast<std::uint64_t>(sign(v) < 0) << 63;
            x ^= static_cast<std::uint64_t>(mpz_sizeinbase(v.get_mpz_t(), 2)) << 40;
            h = (h ^ x) * 0x100000001b3ULL;
        }
        return h;
    }

    // "x^3-2x+1" style, highest degree first.
    std::string to_string() const {
        if (is_zero()) return "0";
        std::ostringstream out;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            const BigInt& a = (*this)[static_cast<std::size_t>(i)];
            if (sign(a) == 0) continue;
            BigInt mag = abs(a);
            if (first) {
                if (sign(a) < 0) out << "-";
                first = false;
            } else {
                out << (sign(a) < 0 ? "-" : "+");
            }
            bool coef_shown = (mag != 1 || i == 0);
            if (coef_shown) out << mag.get_str();
            if (i > 0) {
                out << "x";
                if (i > 1) out << "^" << i;
            }
        }
        return out.str();
    }

    // "[a0,a1,...,ad]" ascending-coefficient form.
    std::string coeff_list_string() const {
        std::ostringstream out;
        out << "[";
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (i) out << ",";
            out << c_[i].get_str();
        }
        out << "]";
        return out.str();
    }

private:
    std::vector<BigInt> c_;
    void trim() {
        while (!c_.empty() && sign(c_.back()) == 0) c_.pop_back();
    }
};

// f(r + p*y) / p^s with s chosen minimal so some output coefficient is a
// p-unit. Implements one branch step of p-adic root counting over Z.
struct ShiftResult {
    IntPoly poly;
    unsigned long scale_removed; // s
};

inline ShiftResult shift_rescale(const IntPoly& f, const BigInt& r, const BigInt& p) {
    if (f.is_zero()) throw invalid_input("shift requires a nonzero polynomial");
    // Taylor coefficients at r by repeated synthetic division, then y^k gains p^k.
    std::vector<BigInt> c(f.coeffs());
    const std::size_t n = c.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = n - 1; j-- > i;) c[j] += r * c[j + 1];
    BigInt pk(1);
    for (std::size_t k = 0; k < n; ++k) {
        c[k] *= pk;
        pk *= p;
    }
    unsigned long s = 0;
    bool first = true;
    for (const auto& v : c) {
        if (sign(v) == 0) continue;
        unsigned long ord = padic_valuation(v, p);
        s = first ? ord : std::min(s, ord);
        first = false;
    }
    BigInt ps = 1;
    for (unsigned long i = 0; i < s; ++i) ps *= p;
    for (auto& v : c) v = divexact(v, ps);
    return {IntPoly(std::move(c)), s};
}

// Canonical scan/report order: degree, then ascending coefficient tuple
// compared lexicographically from a_0.
inline bool canonical_less(const IntPoly& a, const IntPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = 0; i <= a.degree(); ++i) {
        int c = cmp(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(i)]);
        if (c != 0) return c < 0;
    }
    return false;
}

namespace detail {

struct PolyParser {
    const std::string& s;
    std::size_t pos = 0;

    explicit PolyParser(const std::string& str) : s(str) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw invalid_input("parse error at position " + std::to_string(pos) + ": " + what);
    }
    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    BigInt parse_integer() {
        skip_ws();
        std::size_t start = pos;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
        std::size_t digits = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos, ++digits;
        if (digits == 0) fail("expected an integer");
        return BigInt(s.substr(start, pos - start), 10);
    }
    unsigned long parse_exponent() {
        BigInt e = parse_integer();
        if (sign(e) < 0 || e > 4096) fail("exponent out of range");
        return e.get_ui();
    }

    IntPoly parse_coeff_list() {
        if (!eat('[')) fail("expected '['");
        std::vector<BigInt> coeffs;
        skip_ws();
        if (!eat(']')) {
            for (;;) {
                coeffs.push_back(parse_integer());
                if (eat(']')) break;
                if (!eat(',')) fail("expected ',' or ']'");
            }
        }
        skip_ws();
        if (pos != s.size()) fail("trailing characters after ']'");
        return IntPoly(std::move(coeffs));
    }

    // term := [integer] [*] [x [^ exp]]
    IntPoly parse_term(bool negate) {
        skip_ws();
        BigInt coef(1);
        bool saw_coef = false;
        if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])))) {
            coef = parse_integer();
            saw_coef = true;
        }
        eat('*');
        skip_ws();
        unsigned long exp = 0;
        if (pos < s.size() && (s[pos] == 'x' || s[pos] == 'X')) {
            ++pos;
            exp = 1;
            if (eat('^')) exp = parse_exponent();
        } else if (!saw_coef) {
            fail("expected a coefficient or 'x'");
        }
        if (negate) coef = -coef;
        std::vector<BigInt> c(exp + 1, BigInt(0));
        c[exp] = coef;
        return IntPoly(std::move(c));
    }

    IntPoly parse_expression() {
        IntPoly acc;
        bool neg = eat('-');
        if (!neg) eat('+');
        acc = acc + parse_term(neg);
        for (;;) {
            skip_ws();
            if (pos == s.size()) break;
            if (eat('+'))
                acc = acc + parse_term(false);
            else if (eat('-'))
                acc = acc + parse_term(true);
            else
                fail("expected '+' or '-'");
        }
        return acc;
    }
};

} // namespace detail

// Accepts either a caret expression ("x^3-2x+1") or an ascending coefficient
// list ("[1,-2,0,1]").
inline IntPoly parse_poly(const std::string& text) {
    detail::PolyParser p(text);
    p.skip_ws();
    if (p.pos < text.size() && text[p.pos] == '[') return p.parse_coeff_list();
    return p.parse_expression();
}

} // namespace lehmer
