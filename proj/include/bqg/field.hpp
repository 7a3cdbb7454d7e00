// FieldElem: elements of Frac(Z[u^{+-1}, v^{+-1}])[w], w^2 = u^2 + v^2.
//
// Canonical form (numerator, denominator):
//   * the denominator is w-free, has no monomial factor and is monic with
//     respect to its highest monomial in the (u, v) lexicographic order;
//   * numerator and denominator are coprime in Q[u, v] (a factor of the
//     denominator divides A + B*w only if it divides both A and B).
// With this normalization structural equality is mathematical equality.
#pragma once

#include "gcd.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace bqg {

struct DivisionByZero : std::domain_error {
    using std::domain_error::domain_error;
};

class FieldElem {
public:
    FieldElem() = default;
    FieldElem(long c) : num_(c), den_(1) {}
    FieldElem(const mpq_class& c) : num_(c), den_(1) {}
    FieldElem(const Poly& p) : num_(p), den_(1) { check_vars(p); }
    FieldElem(const Poly& n, const Poly& d) : num_(n), den_(d) {
        check_vars(n);
        check_vars(d);
        if (d.is_zero()) throw DivisionByZero("FieldElem: zero denominator");
        canonicalize();
    }

    static FieldElem u(int k = 1) { return FieldElem(Poly::monomial(k, 0)); }
    static FieldElem v(int k = 1) { return FieldElem(Poly::monomial(0, k)); }
    static FieldElem w() { return FieldElem(poly_w()); }
    // r^{a2/2} s^{b2/2}
    static FieldElem rs_half(int a2, int b2) { return FieldElem(Poly::monomial(a2, b2)); }
    static FieldElem rs(int a, int b) { return FieldElem(Poly::monomial(2 * a, 2 * b)); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_.is_one() && num_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }
    std::size_t weight() const { return num_.size() + den_.size(); }

    friend bool operator==(const FieldElem& a, const FieldElem& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    FieldElem operator-() const {
        FieldElem r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_.is_one() && b.den_.is_one()) return raw(a.num_ + b.num_, Poly(1));
        if (a.den_ == b.den_) return FieldElem(a.num_ + b.num_, a.den_);
        return FieldElem(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend FieldElem operator-(const FieldElem& a, const FieldElem& b) { return a + (-b); }
    friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.den_.is_one() && b.den_.is_one()) return raw(a.num_ * b.num_, Poly(1));
        if (b.is_one()) return a;
        if (a.is_one()) return b;
        return FieldElem(a.num_ * b.num_, a.den_ * b.den_);
    }
    FieldElem inv() const {
        if (is_zero()) throw DivisionByZero("FieldElem::inv: division by zero");
        return FieldElem(den_, num_);
    }
    friend FieldElem operator/(const FieldElem& a, const FieldElem& b) {
        if (b.is_zero()) throw DivisionByZero("FieldElem: division by zero");
        if (a.is_zero()) return {};
        return FieldElem(a.num_ * b.den_, a.den_ * b.num_);
    }
    FieldElem& operator+=(const FieldElem& b) { return *this = *this + b; }
    FieldElem& operator-=(const FieldElem& b) { return *this = *this - b; }
    FieldElem& operator*=(const FieldElem& b) { return *this = *this * b; }
    FieldElem& operator/=(const FieldElem& b) { return *this = *this / b; }

    FieldElem pow(int k) const {
        if (k < 0) return inv().pow(-k);
        FieldElem result(1), base = *this;
        while (k) {
            if (k & 1) result *= base;
            k >>= 1;
            if (k) base *= base;
        }
        return result;
    }

    // zeta: swap u and v (r <-> s).
    FieldElem swap_uv() const { return FieldElem(num_.swap_uv(), den_.swap_uv()); }
    // (r, s) -> (1/r, 1/s)
    FieldElem invert_uv() const { return FieldElem(num_.invert_uv(), den_.invert_uv()); }

    // Re-run canonicalization on an already canonical value (idempotence tests).
    FieldElem recanonicalized() const { return FieldElem(num_, den_); }

    // n / d where the caller already knows n and d to be coprime; only the
    // cheap normalizations run.
    static FieldElem from_coprime(const Poly& n, const Poly& d) {
        check_vars(n);
        check_vars(d);
        if (d.is_zero()) throw DivisionByZero("FieldElem: zero denominator");
        FieldElem r = raw(n, d);
        r.canonicalize(false);
        return r;
    }

    std::string str() const {
        if (den_.is_one()) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

private:
    Poly num_;
    Poly den_{1};

    static FieldElem raw(Poly n, Poly d) {
        FieldElem r;
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        return r;
    }
    static void check_vars(const Poly& p) {
        if (p.has_var(kZ) || p.has_var(kY)) throw std::invalid_argument("FieldElem: spectral variable in coefficient");
    }

    void canonicalize(bool reduce = true) {
        if (num_.is_zero()) {
            den_ = Poly(1);
            return;
        }
        // Rationalize: make the denominator w-free.
        if (den_.has_var(kW)) {
            Poly c = den_.conj_w();
            num_ = num_ * c;
            den_ = den_ * c;
        }
        // Move the monomial part of the denominator into the numerator.
        {
            Mono shift;
            shift.e[kU] = static_cast<int16_t>(-den_.min_exp(kU));
            shift.e[kV] = static_cast<int16_t>(-den_.min_exp(kV));
            if (!shift.is_one()) {
                den_ = den_.shifted(shift);
                num_ = num_.shifted(shift);
            }
        }
        if (den_.is_constant()) {
            num_ = num_.scaled(1 / den_.constant_term());
            den_ = Poly(1);
            return;
        }
        if (reduce) reduce_gcd();
        // Make the denominator monic.
        mpq_class lc = den_.leading().second;
        if (lc != 1) {
            mpq_class il = 1 / lc;
            num_ = num_.scaled(il);
            den_ = den_.scaled(il);
        }
    }

    void reduce_gcd() {
        // Integer forms for the gcd.
        auto [a, b] = num_.split_w();
        Mono nshift;
        {
            int mu = 0, mv = 0;
            bool first = true;
            for (const Poly* p : {&a, &b}) {
                if (p->is_zero()) continue;
                if (first) {
                    mu = p->min_exp(kU);
                    mv = p->min_exp(kV);
                    first = false;
                } else {
                    mu = std::min(mu, p->min_exp(kU));
                    mv = std::min(mv, p->min_exp(kV));
                }
            }
            nshift.e[kU] = static_cast<int16_t>(-mu);
            nshift.e[kV] = static_cast<int16_t>(-mv);
        }
        Poly ai = a.shifted(nshift), bi = b.shifted(nshift), di = den_;
        detail::clear_denominators(ai);
        detail::clear_denominators(bi);
        detail::clear_denominators(di);
        detail::BPoly g = detail::to_bpoly(di);
        if (!ai.is_zero()) g = detail::bgcd(g, detail::to_bpoly(ai));
        if (!bi.is_zero() && detail::deg(g) + (g.empty() ? 0 : detail::deg(g.back())) > 0)
            g = detail::bgcd(g, detail::to_bpoly(bi));
        bool nontrivial = !(g.size() == 1 && g[0].size() == 1);
        if (nontrivial) {
            Poly gp = detail::from_bpoly(g);
            num_ = exact_div(a, gp) + exact_div(b, gp) * poly_w();
            den_ = exact_div(den_, gp);
        }
    }

    // Exact division of a Laurent polynomial in (u, v) by a polynomial with
    // non-negative exponents, over Q.
    static Poly exact_div(const Poly& a, const Poly& g) {
        if (a.is_zero()) return a;
        Mono shift;
        shift.e[kU] = static_cast<int16_t>(-a.min_exp(kU));
        shift.e[kV] = static_cast<int16_t>(-a.min_exp(kV));
        Poly ai = a.shifted(shift), gi = g;
        mpz_class la = detail::clear_denominators(ai);
        mpz_class lg = detail::clear_denominators(gi);
        detail::BPoly q;
        // Over Z the quotient may need an extra integer factor; scale first.
        detail::BPoly ab = detail::to_bpoly(ai), gb = detail::to_bpoly(gi);
        mpz_class ic = 0;
        for (const auto& c : gb) mpz_gcd(ic.get_mpz_t(), ic.get_mpz_t(), detail::zcontent(c).get_mpz_t());
        // Leading coefficient of g may not divide a's over Z; multiply a by a
        // large enough power of lc(g) is unnecessary because g | a over Q and
        // g/ic is primitive: divide by the primitive part, then by ic.
        detail::BPoly gprim = gb;
        for (auto& c : gprim) c = detail::zdiv_scalar(c, ic);
        if (!detail::bdiv_exact(ab, gprim, q)) throw std::logic_error("FieldElem: gcd division not exact");
        Poly qp = detail::from_bpoly(q);
        Mono back;
        back.e[kU] = static_cast<int16_t>(-shift.e[kU]);
        back.e[kV] = static_cast<int16_t>(-shift.e[kV]);
        mpq_class factor(lg, la * ic);
        factor.canonicalize();
        return qp.shifted(back).scaled(factor);
    }
};

inline FieldElem operator*(long c, const FieldElem& a) { return FieldElem(c) * a; }

}  // namespace bqg
