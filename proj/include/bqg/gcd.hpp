// Integer polynomial gcd in one and two variables (primitive remainder
// sequences).  Only used to bring FieldElem numerators and denominators to
// lowest terms, so the inputs are small and dense storage is fine.
#pragma once

#include "poly.hpp"

#include <numeric>

namespace bqg::detail {

using ZPoly = std::vector<mpz_class>;  // dense, index = power
using BPoly = std::vector<ZPoly>;      // dense in u, coefficients in Z[v]

inline void trim(ZPoly& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}
inline void trim(BPoly& p) {
    while (!p.empty() && p.back().empty()) p.pop_back();
}
inline int deg(const ZPoly& p) { return static_cast<int>(p.size()) - 1; }
inline int deg(const BPoly& p) { return static_cast<int>(p.size()) - 1; }

inline ZPoly zsub(const ZPoly& a, const ZPoly& b) {
    ZPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}
inline ZPoly zmul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]))
            for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}
inline mpz_class zcontent(const ZPoly& p) {
    mpz_class g = 0;
    for (const auto& c : p) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}
inline ZPoly zdiv_scalar(ZPoly p, const mpz_class& c) {
    for (auto& x : p) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
    return p;
}
inline ZPoly zprimitive(const ZPoly& p) {
    if (p.empty()) return p;
    mpz_class c = zcontent(p);
    if (sgn(p.back()) < 0) c = -c;
    return zdiv_scalar(p, c);
}
// Exact division a / b in Z[v]; returns false if not exact.
inline bool zdiv_exact(ZPoly a, const ZPoly& b, ZPoly& q) {
    q.assign(a.empty() ? 0 : std::max(0, deg(a) - deg(b) + 1), mpz_class(0));
    while (!a.empty() && deg(a) >= deg(b)) {
        mpz_class qc;
        if (!mpz_divisible_p(a.back().get_mpz_t(), b.back().get_mpz_t())) return false;
        mpz_divexact(qc.get_mpz_t(), a.back().get_mpz_t(), b.back().get_mpz_t());
        int shift = deg(a) - deg(b);
        q[shift] = qc;
        for (std::size_t j = 0; j < b.size(); ++j) a[j + shift] -= qc * b[j];
        trim(a);
    }
    trim(q);
    return a.empty();
}
inline ZPoly zprem(ZPoly a, const ZPoly& b) {
    const mpz_class& lb = b.back();
    while (!a.empty() && deg(a) >= deg(b)) {
        mpz_class la = a.back();
        int shift = deg(a) - deg(b);
        for (auto& x : a) x *= lb;
        for (std::size_t j = 0; j < b.size(); ++j) a[j + shift] -= la * b[j];
        trim(a);
    }
    return a;
}
inline ZPoly zgcd(ZPoly a, ZPoly b) {
    if (a.empty()) return zprimitive(b);
    if (b.empty()) return zprimitive(a);
    mpz_class c;
    mpz_gcd(c.get_mpz_t(), zcontent(a).get_mpz_t(), zcontent(b).get_mpz_t());
    a = zprimitive(a);
    b = zprimitive(b);
    if (deg(a) < deg(b)) std::swap(a, b);
    while (!b.empty()) {
        ZPoly r = zprem(a, b);
        a = std::move(b);
        b = zprimitive(r);
    }
    a = zprimitive(a);
    for (auto& x : a) x *= c;
    return a;
}

inline ZPoly bcontent(const BPoly& p) {
    ZPoly g;
    for (const auto& c : p) {
        if (c.empty()) continue;
        g = g.empty() ? zprimitive(c) : zgcd(g, c);
        if (g.size() == 1) break;
    }
    // integer content of the whole polynomial
    mpz_class ic = 0;
    for (const auto& c : p) mpz_gcd(ic.get_mpz_t(), ic.get_mpz_t(), zcontent(c).get_mpz_t());
    if (g.empty()) return g;
    g = zprimitive(g);
    for (auto& x : g) x *= ic;
    return g;
}
inline BPoly bdiv_content(const BPoly& p, const ZPoly& c) {
    BPoly r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i].empty()) continue;
        bool ok = zdiv_exact(p[i], c, r[i]);
        if (!ok) throw std::logic_error("gcd: content division not exact");
    }
    return r;
}
inline BPoly bprimitive(const BPoly& p) {
    if (p.empty()) return p;
    ZPoly c = bcontent(p);
    if (sgn(p.back().back()) < 0)
        for (auto& x : c) x = -x;
    return bdiv_content(p, c);
}
inline BPoly bprem(BPoly a, const BPoly& b) {
    const ZPoly& lb = b.back();
    while (!a.empty() && deg(a) >= deg(b)) {
        ZPoly la = a.back();
        int shift = deg(a) - deg(b);
        for (auto& x : a) x = zmul(x, lb);
        for (std::size_t j = 0; j < b.size(); ++j) a[j + shift] = zsub(a[j + shift], zmul(la, b[j]));
        trim(a);
    }
    return a;
}
inline BPoly bgcd(BPoly a, BPoly b) {
    if (a.empty()) return bprimitive(b);
    if (b.empty()) return bprimitive(a);
    ZPoly ca = bcontent(a), cb = bcontent(b);
    ZPoly c = zgcd(ca, cb);
    a = bdiv_content(a, ca);
    b = bdiv_content(b, cb);
    if (deg(a) < deg(b)) std::swap(a, b);
    while (!b.empty()) {
        BPoly r = bprem(a, b);
        a = std::move(b);
        b = r.empty() ? r : bprimitive(r);
    }
    a = bprimitive(a);
    for (auto& x : a) x = zmul(x, c);
    return a;
}
inline bool bdiv_exact(BPoly a, const BPoly& b, BPoly& q) {
    q.assign(a.empty() ? 0 : std::max(0, deg(a) - deg(b) + 1), ZPoly{});
    while (!a.empty() && deg(a) >= deg(b)) {
        ZPoly qc;
        if (!zdiv_exact(a.back(), b.back(), qc)) return false;
        int shift = deg(a) - deg(b);
        q[shift] = qc;
        for (std::size_t j = 0; j < b.size(); ++j) a[j + shift] = zsub(a[j + shift], zmul(qc, b[j]));
        trim(a);
    }
    trim(q);
    return a.empty();
}

// Conversions.  The Poly must involve only u and v, have integer
// coefficients and non-negative exponents.
inline BPoly to_bpoly(const Poly& p) {
    BPoly r;
    for (const auto& [m, c] : p.terms()) {
        int a = m.e[kU], b = m.e[kV];
        if (a < 0 || b < 0) throw std::logic_error("to_bpoly: negative exponent");
        if (static_cast<int>(r.size()) <= a) r.resize(a + 1);
        if (static_cast<int>(r[a].size()) <= b) r[a].resize(b + 1);
        r[a][b] = c.get_num();
    }
    for (auto& z : r) trim(z);
    trim(r);
    return r;
}
inline Poly from_bpoly(const BPoly& p) {
    std::vector<Poly::Term> t;
    for (std::size_t a = 0; a < p.size(); ++a)
        for (std::size_t b = 0; b < p[a].size(); ++b)
            if (sgn(p[a][b])) {
                Mono m;
                m.e[kU] = static_cast<int16_t>(a);
                m.e[kV] = static_cast<int16_t>(b);
                t.push_back({m, mpq_class(p[a][b])});
            }
    return Poly::from_terms(std::move(t));
}

// Multiply by the lcm of coefficient denominators; returns the factor used.
inline mpz_class clear_denominators(Poly& p) {
    mpz_class l = 1;
    for (const auto& [m, c] : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    if (l != 1) p = p.scaled(mpq_class(l));
    return l;
}

}  // namespace bqg::detail
