// Sparse Laurent polynomials over Q in the fixed variable set {u, v, w, z, y}.
//
// u and v are square roots of the two quantum parameters (r = u^2, s = v^2),
// w is the algebraic generator with w^2 = u^2 + v^2, and z, y are spectral
// variables.  The w-exponent of every stored monomial is 0 or 1; products are
// reduced on the fly.
#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bqg {

enum Var : int { kU = 0, kV = 1, kW = 2, kZ = 3, kY = 4 };
inline constexpr int kNumVars = 5;
inline constexpr const char* kVarNames[kNumVars] = {"u", "v", "w", "z", "y"};

struct Mono {
    std::array<int16_t, kNumVars> e{};

    friend auto operator<=>(const Mono&, const Mono&) = default;
    friend bool operator==(const Mono&, const Mono&) = default;

    Mono operator*(const Mono& o) const {
        Mono m;
        for (int i = 0; i < kNumVars; ++i) m.e[i] = static_cast<int16_t>(e[i] + o.e[i]);
        return m;
    }
    bool is_one() const {
        for (auto x : e)
            if (x) return false;
        return true;
    }
    static Mono var(int v, int power = 1) {
        Mono m;
        m.e[v] = static_cast<int16_t>(power);
        return m;
    }
};

class Poly {
public:
    using Term = std::pair<Mono, mpq_class>;

    Poly() = default;
    Poly(long c) {
        if (c) terms_.push_back({Mono{}, mpq_class(c)});
    }
    Poly(const mpq_class& c) {
        if (sgn(c)) terms_.push_back({Mono{}, c});
    }
    Poly(const Mono& m, const mpq_class& c) {
        if (sgn(c)) terms_.push_back({m, c});
        reduce_w();
    }

    static Poly var(int v, int power = 1) { return Poly(Mono::var(v, power), 1); }
    static Poly monomial(int eu, int ev, long c = 1) {
        Mono m;
        m.e[kU] = static_cast<int16_t>(eu);
        m.e[kV] = static_cast<int16_t>(ev);
        return Poly(m, mpq_class(c));
    }
    // Build from arbitrary terms; merges duplicates and reduces w.
    static Poly from_terms(std::vector<Term> t) {
        Poly p;
        p.terms_ = std::move(t);
        p.normalize();
        return p;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_one()); }
    bool is_monomial() const { return terms_.size() == 1; }
    bool is_one() const { return terms_.size() == 1 && terms_[0].first.is_one() && terms_[0].second == 1; }
    std::size_t size() const { return terms_.size(); }
    mpq_class constant_term() const {
        for (const auto& [m, c] : terms_)
            if (m.is_one()) return c;
        return 0;
    }
    const Term& leading() const { return terms_.back(); }

    bool has_var(int v) const {
        for (const auto& t : terms_)
            if (t.first.e[v]) return true;
        return false;
    }
    int min_exp(int v) const {
        int r = 0;
        bool first = true;
        for (const auto& t : terms_) {
            if (first || t.first.e[v] < r) r = t.first.e[v];
            first = false;
        }
        return r;
    }
    int max_exp(int v) const {
        int r = 0;
        bool first = true;
        for (const auto& t : terms_) {
            if (first || t.first.e[v] > r) r = t.first.e[v];
            first = false;
        }
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.terms_ == b.terms_; }

    Poly operator-() const {
        Poly r = *this;
        for (auto& t : r.terms_) t.second = -t.second;
        return r;
    }
    friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
    friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }
    Poly& operator+=(const Poly& b) { return *this = *this + b; }
    Poly& operator-=(const Poly& b) { return *this = *this - b; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (b.is_constant()) return a.scaled(b.terms_[0].second);
        if (a.is_constant()) return b.scaled(a.terms_[0].second);
        std::vector<Term> out;
        out.reserve(a.terms_.size() * b.terms_.size() * 2);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Mono m = ma * mb;
                mpq_class c = ca * cb;
                if (m.e[kW] == 2) {
                    m.e[kW] = 0;
                    Mono m2 = m;
                    m.e[kU] = static_cast<int16_t>(m.e[kU] + 2);
                    m2.e[kV] = static_cast<int16_t>(m2.e[kV] + 2);
                    out.push_back({m, c});
                    out.push_back({m2, std::move(c)});
                } else {
                    out.push_back({m, std::move(c)});
                }
            }
        Poly p;
        p.terms_ = std::move(out);
        p.combine();
        return p;
    }
    Poly& operator*=(const Poly& b) { return *this = *this * b; }

    Poly scaled(const mpq_class& c) const {
        if (sgn(c) == 0) return {};
        Poly r = *this;
        for (auto& t : r.terms_) t.second *= c;
        return r;
    }
    Poly shifted(const Mono& m) const {
        Poly r = *this;
        for (auto& t : r.terms_) t.first = t.first * m;
        if (m.e[kW]) r.normalize();
        return r;
    }

    Poly pow(int k) const {
        if (k < 0) throw std::domain_error("Poly::pow: negative exponent");
        Poly result(1), base = *this;
        while (k) {
            if (k & 1) result *= base;
            k >>= 1;
            if (k) base *= base;
        }
        return result;
    }

    // Substitute a Laurent monomial for variable v (used for z -> z*y and
    // z -> 1/z style maps).  `image` must be a monomial.
    Poly substitute_monomial(int v, const Mono& image) const {
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& [m, c] : terms_) {
            Mono n = m;
            int k = n.e[v];
            n.e[v] = 0;
            for (int i = 0; i < kNumVars; ++i) n.e[i] = static_cast<int16_t>(n.e[i] + k * image.e[i]);
            out.push_back({n, c});
        }
        return from_terms(std::move(out));
    }

    // General substitution of a polynomial for a variable with non-negative
    // exponents in that variable.
    Poly substitute(int v, const Poly& image) const {
        std::map<int, Poly> by_power;
        for (const auto& [m, c] : terms_) {
            Mono n = m;
            int k = n.e[v];
            n.e[v] = 0;
            by_power[k] += Poly(n, c);
        }
        Poly out;
        for (const auto& [k, coeff] : by_power) {
            if (k < 0) throw std::domain_error("Poly::substitute: negative power");
            out += coeff * image.pow(k);
        }
        return out;
    }

    // Coefficients with respect to one variable: power -> coefficient poly.
    std::map<int, Poly> coefficients_in(int v) const {
        std::map<int, std::vector<Term>> raw;
        for (const auto& [m, c] : terms_) {
            Mono n = m;
            int k = n.e[v];
            n.e[v] = 0;
            raw[k].push_back({n, c});
        }
        std::map<int, Poly> out;
        for (auto& [k, t] : raw) out[k] = from_terms(std::move(t));
        return out;
    }

    // Swap u <-> v (the involution zeta on coefficients).
    Poly swap_uv() const {
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& [m, c] : terms_) {
            Mono n = m;
            std::swap(n.e[kU], n.e[kV]);
            out.push_back({n, c});
        }
        return from_terms(std::move(out));
    }

    // Replace u, v by their inverses (r -> 1/r, s -> 1/s).  w is mapped to
    // w/(uv) since (1/r + 1/s)^{1/2} = (r+s)^{1/2}/(rs)^{1/2}.
    Poly invert_uv() const {
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& [m, c] : terms_) {
            Mono n = m;
            n.e[kU] = static_cast<int16_t>(-n.e[kU] - n.e[kW]);
            n.e[kV] = static_cast<int16_t>(-n.e[kV] - n.e[kW]);
            out.push_back({n, c});
        }
        return from_terms(std::move(out));
    }

    // Split a + b*w.
    std::pair<Poly, Poly> split_w() const {
        std::vector<Term> a, b;
        for (const auto& [m, c] : terms_) {
            if (m.e[kW]) {
                Mono n = m;
                n.e[kW] = 0;
                b.push_back({n, c});
            } else {
                a.push_back({m, c});
            }
        }
        Poly pa, pb;
        pa.terms_ = std::move(a);
        pb.terms_ = std::move(b);
        return {pa, pb};
    }
    // Conjugate under w -> -w.
    Poly conj_w() const {
        Poly r = *this;
        for (auto& t : r.terms_)
            if (t.first.e[kW]) t.second = -t.second;
        return r;
    }

    // Rendering: monomials ascending in the fixed order, `p/q*u^a*v^b*w^e`.
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) out += " + ";
            first = false;
            out += c.get_num().get_str() + "/" + c.get_den().get_str();
            for (int i = 0; i < kNumVars; ++i)
                if (m.e[i]) out += std::string("*") + kVarNames[i] + "^" + std::to_string(m.e[i]);
        }
        return out;
    }

private:
    std::vector<Term> terms_;

    static Poly merge(const Poly& a, const Poly& b, bool subtract) {
        Poly r;
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto i = a.terms_.begin(), j = b.terms_.begin();
        while (i != a.terms_.end() || j != b.terms_.end()) {
            if (j == b.terms_.end() || (i != a.terms_.end() && i->first < j->first)) {
                r.terms_.push_back(*i++);
            } else if (i == a.terms_.end() || j->first < i->first) {
                r.terms_.push_back({j->first, subtract ? mpq_class(-j->second) : j->second});
                ++j;
            } else {
                mpq_class c = subtract ? mpq_class(i->second - j->second) : mpq_class(i->second + j->second);
                if (sgn(c)) r.terms_.push_back({i->first, std::move(c)});
                ++i;
                ++j;
            }
        }
        return r;
    }

    void combine() {
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& x, const Term& y) { return x.first < y.first; });
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!out.empty() && out.back().first == t.first)
                out.back().second += t.second;
            else
                out.push_back(std::move(t));
        }
        out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return sgn(t.second) == 0; }),
                  out.end());
        terms_ = std::move(out);
    }

    void reduce_w() {
        bool need = false;
        for (const auto& t : terms_)
            if (t.first.e[kW] < 0 || t.first.e[kW] > 1) need = true;
        if (!need) return;
        std::vector<Term> work = std::move(terms_);
        terms_.clear();
        // Repeatedly rewrite w^k (k >= 2) and w^-k via w^2 = u^2+v^2.
        while (!work.empty()) {
            Term t = std::move(work.back());
            work.pop_back();
            int k = t.first.e[kW];
            if (k >= 0 && k <= 1) {
                terms_.push_back(std::move(t));
                continue;
            }
            if (k < 0)
                throw std::domain_error("negative power of w must be rationalized before entering Poly");
            Mono a = t.first, b = t.first;
            a.e[kW] = b.e[kW] = static_cast<int16_t>(k - 2);
            a.e[kU] = static_cast<int16_t>(a.e[kU] + 2);
            b.e[kV] = static_cast<int16_t>(b.e[kV] + 2);
            work.push_back({a, t.second});
            work.push_back({b, t.second});
        }
    }

    void normalize() {
        reduce_w();
        combine();
    }
};

inline Poly operator*(const Poly& a, long c) { return a.scaled(mpq_class(c)); }
inline Poly operator*(long c, const Poly& a) { return a.scaled(mpq_class(c)); }

inline Poly poly_u(int k = 1) { return Poly::var(kU, k); }
inline Poly poly_v(int k = 1) { return Poly::var(kV, k); }
inline Poly poly_w() { return Poly::var(kW, 1); }
inline Poly poly_z(int k = 1) { return Poly::var(kZ, k); }
inline Poly poly_y(int k = 1) { return Poly::var(kY, k); }

// r^a s^b with a, b given as doubled exponents (so half-integer powers of r, s
// are representable): returns u^{2a2/2}... i.e. u^{a2} v^{b2} where
// r^{a2/2} = u^{a2}.
inline Poly rs_half(int a2, int b2) { return Poly::monomial(a2, b2); }
// r^a s^b for integer a, b.
inline Poly rs(int a, int b) { return Poly::monomial(2 * a, 2 * b); }

}  // namespace bqg
