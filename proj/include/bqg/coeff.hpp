// Coefficient tower umbrella header plus the symbolic (r, s) builder.
#pragma once

#include "field.hpp"
#include "numeric.hpp"
#include "poly.hpp"
#include "ratz.hpp"

#include <cctype>

namespace bqg {

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

// Square root of a FieldElem when it is a perfect square of a Laurent
// monomial or equals r + s (= u^2 + v^2).
inline std::optional<FieldElem> exact_sqrt(const FieldElem& a) {
    if (!a.is_polynomial()) {
        auto n = exact_sqrt(FieldElem(a.num()));
        auto d = exact_sqrt(FieldElem(a.den()));
        if (n && d) return *n / *d;
        return std::nullopt;
    }
    const Poly& p = a.num();
    if (p == poly_u(2) + poly_v(2)) return FieldElem::w();
    if (p.is_monomial()) {
        const auto& [m, c] = p.terms()[0];
        if (m.e[kW] || m.e[kU] % 2 || m.e[kV] % 2 || sgn(c) <= 0) return std::nullopt;
        if (!mpz_perfect_square_p(c.get_num().get_mpz_t()) || !mpz_perfect_square_p(c.get_den().get_mpz_t()))
            return std::nullopt;
        mpq_class root(sqrt(c.get_num()), sqrt(c.get_den()));
        root.canonicalize();
        Mono h;
        h.e[kU] = static_cast<int16_t>(m.e[kU] / 2);
        h.e[kV] = static_cast<int16_t>(m.e[kV] / 2);
        return FieldElem(Poly(h, root));
    }
    return std::nullopt;
}

class RsParser {
public:
    explicit RsParser(std::string s) : s_(std::move(s)) {}

    FieldElem parse() {
        FieldElem v = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return v;
    }

private:
    std::string s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("substitute_rs: " + what + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    FieldElem expr() {
        FieldElem v = term();
        for (;;) {
            if (eat('+')) v = v + term();
            else if (eat('-')) v = v - term();
            else return v;
        }
    }
    FieldElem term() {
        FieldElem v = unary();
        for (;;) {
            if (eat('*')) v = v * unary();
            else if (eat('/')) v = v / unary();
            else {
                // implicit product: "r s", "2r", "(r+s)(r-s)"
                skip();
                if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '('))
                    v = v * unary();
                else
                    return v;
            }
        }
    }
    FieldElem unary() {
        if (eat('-')) return -unary();
        FieldElem base = atom();
        if (eat('^')) {
            auto [p, q] = exponent();
            return power(base, p, q);
        }
        return base;
    }
    std::pair<long, long> exponent() {
        bool braced = eat('{') || eat('(');
        bool neg = eat('-');
        long p = integer();
        long q = 1;
        if (eat('/')) q = integer();
        if (braced && !(eat('}') || eat(')'))) fail("unbalanced exponent");
        if (q != 1 && q != 2) fail("non-representable exponent denominator " + std::to_string(q));
        return {neg ? -p : p, q};
    }
    long integer() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) fail("integer expected");
        return std::stol(s_.substr(start, pos_ - start));
    }
    FieldElem atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            FieldElem v = expr();
            if (!eat(')')) fail("')' expected");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return FieldElem(integer());
        ++pos_;
        switch (c) {
            case 'r': return FieldElem::u(2);
            case 's': return FieldElem::v(2);
            case 'u': return FieldElem::u(1);
            case 'v': return FieldElem::v(1);
            case 'w': return FieldElem::w();
            default: --pos_; fail(std::string("unknown symbol '") + c + "'");
        }
    }
    FieldElem power(const FieldElem& base, long p, long q) {
        if (q == 1) return base.pow(static_cast<int>(p));
        if (p % 2 == 0) return base.pow(static_cast<int>(p / 2));
        auto root = exact_sqrt(base);
        if (!root) fail("half-integer power of a non-square base");
        return root->pow(static_cast<int>(p));
    }
};

}  // namespace detail

// Build a FieldElem from a symbolic expression in r, s (and u, v, w):
// r -> u^2, s -> v^2, r^{1/2} -> u, s^{1/2} -> v, (r+s)^{1/2} -> w.
inline FieldElem substitute_rs(const std::string& expr) { return detail::RsParser(expr).parse(); }

}  // namespace bqg
