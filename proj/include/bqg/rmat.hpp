// Closed-form R-matrix objects for the two-parameter type-B quantum group and
// their spectral affinizations.
//
// Notation used below: q = r^{-1}s = u^{-2}v^2, so (r^{-1}s)^{k/2} is the
// Laurent monomial u^{-k}v^{k}.  All 1-based indices follow IndexScheme.
#pragma once

#include "linalg.hpp"

#include <optional>

namespace bqg {

// (r^{-1}s)^{k/2}
inline FieldElem q_half(int k) { return FieldElem::rs_half(-k, k); }
inline Poly q_half_poly(int k) { return Poly::monomial(-k, k); }

namespace detail {

// E_ab (x) E_cd placed into an N^2 x N^2 matrix (1-based labels).
template <class T>
void add_tensor_unit(RingMatrix<T>& m, const IndexScheme& sc, int a, int b, int c, int d, const T& coef) {
    if (coef.is_zero()) return;
    m.add_to(sc.pair(a, c), sc.pair(b, d), coef);
}

// Which of E_ab(x)E_ba / E_ba(x)E_ab carries (rs)^{-1} for a < b, both
// different from n+1 and b != a'.  Returns true when it is E_ab (x) E_ba.
inline bool forward_gets_rs_inverse(const IndexScheme& sc, int a, int b) {
    const int n = sc.n;
    bool a_primed = a > n + 1, b_primed = b > n + 1;
    if (!a_primed && !b_primed) return true;
    if (a_primed && b_primed) return false;
    return sc.prime(b) < a;  // a unprimed, b primed
}

// The off-diagonal (rs)^{+-1} part shared by R and R^{-1}.
inline void add_transposition_part(FMatrix& m, const IndexScheme& sc) {
    const int N = sc.N(), n = sc.n;
    const FieldElem rs_inv = FieldElem::rs(-1, -1), rs1 = FieldElem::rs(1, 1);
    for (int a = 1; a <= N; ++a)
        for (int b = a + 1; b <= N; ++b) {
            if (a == n + 1 || b == n + 1 || b == sc.prime(a)) continue;
            bool fwd = forward_gets_rs_inverse(sc, a, b);
            add_tensor_unit(m, sc, a, b, b, a, fwd ? rs_inv : rs1);
            add_tensor_unit(m, sc, b, a, a, b, fwd ? rs1 : rs_inv);
        }
    for (int i = 1; i <= N; ++i) {
        if (i == n + 1) continue;
        add_tensor_unit(m, sc, i, n + 1, n + 1, i, FieldElem(1L));
        add_tensor_unit(m, sc, n + 1, i, i, n + 1, FieldElem(1L));
    }
}

// The bracketed (r^{-1}s - rs^{-1}) block; `upper` selects i < j (R^{-1})
// instead of i > j (R).
inline void add_sigma_part(FMatrix& m, const IndexScheme& sc, const FieldElem& factor, bool upper) {
    const int N = sc.N();
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j) {
            if (upper ? !(i < j) : !(i > j)) continue;
            add_tensor_unit(m, sc, i, i, j, j, factor);
            add_tensor_unit(m, sc, i, sc.prime(j), sc.prime(i), j, -factor * q_half(sc.rho2(i) - sc.rho2(j)));
        }
}

}  // namespace detail

// The basic braided R-matrix R = R_{V,V}.
inline FMatrix basic_R_matrix(const IndexScheme& sc) {
    const int N = sc.N(), n = sc.n;
    FMatrix m(N * N, N * N);
    const FieldElem q = q_half(2), qi = q_half(-2);
    for (int i = 1; i <= N; ++i) {
        if (i == n + 1) continue;
        detail::add_tensor_unit(m, sc, i, i, i, i, q);
        detail::add_tensor_unit(m, sc, sc.prime(i), i, i, sc.prime(i), qi);
    }
    detail::add_transposition_part(m, sc);
    detail::add_sigma_part(m, sc, q - qi, false);
    detail::add_tensor_unit(m, sc, n + 1, n + 1, n + 1, n + 1, FieldElem(1L));
    return m;
}

// Closed form of R^{-1}.
inline FMatrix basic_R_inverse_matrix(const IndexScheme& sc) {
    const int N = sc.N(), n = sc.n;
    FMatrix m(N * N, N * N);
    const FieldElem q = q_half(2), qi = q_half(-2);
    for (int i = 1; i <= N; ++i) {
        if (i == n + 1) continue;
        detail::add_tensor_unit(m, sc, i, i, i, i, qi);
        detail::add_tensor_unit(m, sc, sc.prime(i), i, i, sc.prime(i), q);
    }
    detail::add_transposition_part(m, sc);
    detail::add_sigma_part(m, sc, qi - q, true);
    detail::add_tensor_unit(m, sc, n + 1, n + 1, n + 1, n + 1, FieldElem(1L));
    return m;
}

// K = sum_{i,j} (r^{-1}s)^{rho_i - rho_j} E_{ij'} (x) E_{i'j}
inline FMatrix K_matrix(const IndexScheme& sc) {
    const int N = sc.N();
    FMatrix m(N * N, N * N);
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j)
            detail::add_tensor_unit(m, sc, i, sc.prime(j), sc.prime(i), j, q_half(sc.rho2(i) - sc.rho2(j)));
    return m;
}

// Metric matrix C^i_j = delta_{ij'} (r^{-1}s)^{rho_i}.
inline FMatrix metric_C(const IndexScheme& sc) {
    FMatrix c(sc.N(), sc.N());
    for (int i = 1; i <= sc.N(); ++i) c.set(i - 1, sc.prime(i) - 1, q_half(sc.rho2(i)));
    return c;
}

struct RBundle {
    IndexScheme scheme;
    FMatrix R, R_inv, R_hat, K, C, C_inv;
    FMatrix P_plus, P_minus, P_zero;
    // Eigenvalues of S = R^{-1}.
    FieldElem lambda1, lambda2, lambda3;
};

// (t - r^{-1}s)(t + rs^{-1})(t - (rs^{-1})^{2n}), coefficients low to high.
inline std::vector<FieldElem> minimal_polynomial_R(int n) {
    FieldElem a = q_half(2), b = -q_half(-2), c = q_half(-4 * n);
    return {-(a * b * c), a * b + a * c + b * c, -(a + b + c), FieldElem(1L)};
}

inline RBundle build_basic_R(int n) {
    if (n < 2) throw std::invalid_argument("build_basic_R: rank must be >= 2");
    IndexScheme sc(n);
    const int N = sc.N();
    RBundle b{sc, basic_R_matrix(sc), basic_R_inverse_matrix(sc), {}, K_matrix(sc), metric_C(sc), {}, {}, {}, {},
              q_half(-2), -q_half(2), q_half(4 * n)};
    b.R_hat = flip_P<FieldElem>(N) * b.R;
    b.C_inv = invert(b.C);

    const FieldElem q = q_half(2), qi = q_half(-2), p = q_half(-4 * n);  // p = (rs^{-1})^{2n}
    const auto I = FMatrix::identity(N * N);
    const FMatrix R2 = b.R * b.R;
    auto proj = [&](const FieldElem& c1, const FieldElem& c0, const FieldElem& den) {
        return (R2 + b.R.scaled(c1) + I.scaled(c0)).scaled(den.inv());
    };
    b.P_plus = proj(-(p - qi), -(p * qi), (q + qi) * (q - p));
    b.P_minus = proj(-(q + p), p * q, (qi + q) * (qi + p));
    b.P_zero = proj(-(q - qi), FieldElem(-1L), (p - q) * (qi + p));
    return b;
}

// ---------------------------------------------------------------------------
// Spectral R-matrices.

enum class Variant { standard, alternate };

inline const char* variant_name(Variant v) { return v == Variant::standard ? "standard" : "alternate"; }

struct SpectralR {
    IndexScheme scheme;
    Variant variant;
    ZMatrix matrix;  // \hat R(z), entries in K(z)
    FieldElem xi;    // (r^{-1}s)^{2n-1}
};

struct EigenvalueMismatch : std::domain_error {
    using std::domain_error::domain_error;
};

// Generic Yang-Baxterization of a braid matrix S with eigenvalues l1, l2, l3.
// Returns R(z) = z^2 R(x)|_{x = 1/z} divided by its (v_1 (x) v_1) diagonal
// entry, so the standard variant satisfies R(1) = I.
inline ZMatrix yang_baxterize(const FMatrix& S, const FieldElem& l1, const FieldElem& l2, const FieldElem& l3,
                              Variant variant) {
    const int dim = S.rows();
    const auto I = FMatrix::identity(dim);
    const FMatrix S2 = S * S;
    // Minimal polynomial check, and S^{-1} from it.
    FieldElem e1 = l1 + l2 + l3, e2 = l1 * l2 + l1 * l3 + l2 * l3, e3 = l1 * l2 * l3;
    FMatrix cubic = S2 * S - S2.scaled(e1) + S.scaled(e2) - I.scaled(e3);
    if (!cubic.is_zero()) throw EigenvalueMismatch("yang_baxterize: S is not annihilated by the eigenvalue cubic");
    const FMatrix Sinv = (S2 - S.scaled(e1) + I.scaled(e2)).scaled(e3.inv());

    FieldElem c, d;
    if (variant == Variant::standard) {
        c = FieldElem(1L) + l1 / l2 + l1 / l3 + l2 / l3;
        d = l3.inv();
    } else {
        c = FieldElem(1L) + l1 / l2 + l1 / l3 + l1 * l1 / (l2 * l3);
        d = l1 / (l2 * l3);
    }
    // z^2 R(1/z) = l1 (1 - z) S^{-1} + c z I - d z (1 - z) S
    using UP = UPoly<FieldElem>;
    const UP one_minus_z(std::vector<FieldElem>{FieldElem(1L), FieldElem(-1L)});
    const UP zpoly = UP::z(1);
    ZMatrix out(dim, dim);
    auto add = [&](const FMatrix& m, const UP& poly) {
        m.for_each([&](int i, int j, const FieldElem& x) { out.add_to(i, j, RatZ<FieldElem>(poly.scaled(x))); });
    };
    add(Sinv, one_minus_z.scaled(l1));
    add(I, zpoly.scaled(c));
    add(S, (zpoly * one_minus_z).scaled(-d));
    RatZ<FieldElem> norm = out.get(0, 0);
    if (norm.is_zero()) throw EigenvalueMismatch("yang_baxterize: vanishing normalization entry");
    RatZ<FieldElem> ninv = norm.inv();
    return out.map<RatZ<FieldElem>>([&](const RatZ<FieldElem>& x) { return x * ninv; });
}

namespace detail {

inline RatZ<FieldElem> ratz_from(const Poly& num, const Poly& den) { return RatZ<FieldElem>(to_upoly(num), to_upoly(den)); }

// The (z-1)/(r^2 z - s^2) diagonal block: returns the factor multiplying
// E_aa (x) E_bb for a != b, a != b'.  group 1 -> 1, group 2 -> r^2 s^2,
// the n+1 rows -> rs.
inline FieldElem diagonal_group_factor(const IndexScheme& sc, int a, int b) {
    const int n = sc.n;
    if (a == n + 1 || b == n + 1) return FieldElem::rs(1, 1);
    // E_aa (x) E_bb gets r^2s^2 exactly when E_ab (x) E_ba carries (rs)^{-1}
    // in the braid matrix, i.e. when the flipped term P(E_ba (x) E_ab) does.
    int lo = std::min(a, b), hi = std::max(a, b);
    bool fwd = forward_gets_rs_inverse(sc, lo, hi);  // E_lo,hi (x) E_hi,lo has (rs)^{-1}
    // P (E_ij (x) E_ji) = E_jj (x) E_ii, so E_hi,hi (x) E_lo,lo pairs with
    // the (rs)^{-1} term when fwd holds.
    bool a_is_hi = a == hi;
    return (fwd == a_is_hi) ? FieldElem(1L) : FieldElem::rs(2, 2);
}

}  // namespace detail

// Closed forms of \hat R_{r,s}(z) (standard) and \hat R_new(z) (alternate).
inline SpectralR build_spectral_R(int n, Variant variant) {
    IndexScheme sc(n);
    const int N = sc.N();
    const Poly z = poly_z(), one(1L);
    const Poly r2 = rs(2, 0), s2 = rs(0, 2), rsp = rs(1, 1);
    const Poly xi = q_half_poly(2 * (2 * n - 1));
    const Poly base_den = r2 * z - s2;
    // Second denominator factor and the bracket used by the dual-pair terms.
    const bool std_v = variant == Variant::standard;
    const Poly r2s2i = rs(2, -2);
    const Poly extra = std_v ? z - xi : r2s2i * z + xi;
    const Poly full_den = extra * base_den;

    ZMatrix m(N * N, N * N);
    auto put = [&](int a, int b, int c, int d, const Poly& num, const Poly& den) {
        if (num.is_zero()) return;
        m.add_to(sc.pair(a, c), sc.pair(b, d), detail::ratz_from(num, den));
    };
    for (int i = 1; i <= N; ++i)
        if (i != n + 1) put(i, i, i, i, one, one);
    // Diagonal (z-1)/(r^2z-s^2) block.
    for (int a = 1; a <= N; ++a)
        for (int b = 1; b <= N; ++b) {
            if (a == b || b == sc.prime(a)) continue;
            FieldElem f = detail::diagonal_group_factor(sc, a, b);
            put(a, a, b, b, f.num() * (z - one), base_den);
        }
    // (r^2 - s^2)/(r^2 z - s^2) transpositions.
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j) {
            if (i == j || j == sc.prime(i)) continue;
            Poly num = r2 - s2;
            if (i > j) num = num * z;
            put(i, j, j, i, num, base_den);
        }
    // d_{ij}(z,1) E_{i'j'} (x) E_{ij}
    auto qh = [](int k) { return q_half_poly(k); };
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j) {
            const int dr = sc.rho2(i) - sc.rho2(j);
            const bool dual = j == sc.prime(i);
            Poly d;
            if (std_v) {
                if (i < j) d = (s2 - r2) * z * ((z - one) * qh(dr) - (dual ? z - xi : Poly()));
                else if (i > j) d = (s2 - r2) * ((z - one) * qh(2 * (2 * n - 1) + dr) - (dual ? z - xi : Poly()));
                else if (!sc.is_fixed(i)) d = s2 * (z - one) * (z - qh(2 * (2 * n - 3)));
                else d = rsp * (z - one) * (z - xi) + (r2 - s2) * z * (one - xi);
            } else {
                const Poly br = r2s2i * z + xi;
                if (i < j) d = (s2 - r2) * z * ((z - one) * qh(dr - 4) - (dual ? br : Poly()));
                else if (i > j) d = (s2 - r2) * ((one - z) * qh(2 * (2 * n - 1) + dr) - (dual ? br : Poly()));
                else if (!sc.is_fixed(i)) d = r2 * (z - one) * (z + xi);
                else d = rsp * (z - one) * br + (r2 - s2) * z * (r2s2i + xi);
            }
            put(sc.prime(i), sc.prime(j), i, j, d, full_den);
        }
    return {sc, variant, std::move(m), q_half(2 * (2 * n - 1))};
}

// Entry-wise evaluation of a RatZ matrix at z = x.
inline FMatrix eval_z(const ZMatrix& m, const FieldElem& x) {
    return m.map<FieldElem>([&](const RatZ<FieldElem>& e) { return e(x); });
}

// Entry-wise z -> c z.
inline ZMatrix scale_z(const ZMatrix& m, const FieldElem& c) {
    return m.map<RatZ<FieldElem>>([&](const RatZ<FieldElem>& e) { return e.scale_argument(c); });
}

inline ZMatrix compose_inverse(const ZMatrix& m) {
    return m.map<RatZ<FieldElem>>([](const RatZ<FieldElem>& e) { return e.compose_inverse(); });
}

// Limits z -> 0 and z -> infinity; throws if some entry diverges.
inline FMatrix limit_zero(const ZMatrix& m) {
    return m.map<FieldElem>([](const RatZ<FieldElem>& e) {
        auto v = e.at_zero();
        if (!v) throw PoleError("limit z->0 diverges");
        return *v;
    });
}
inline FMatrix limit_infinity(const ZMatrix& m) {
    return m.map<FieldElem>([](const RatZ<FieldElem>& e) {
        auto v = e.at_infinity();
        if (!v) throw PoleError("limit z->infinity diverges");
        return *v;
    });
}

inline ZMatrix lift_z(const FMatrix& m) {
    return m.map<RatZ<FieldElem>>([](const FieldElem& x) { return RatZ<FieldElem>(x); });
}

// A RatZ matrix written as num(z) / den(z) with polynomial entries in
// (u, v, w, z); used for exact multivariate identities.
struct ClearedMatrix {
    Poly den;
    PMatrix num;
};

inline Poly upoly_to_poly(const UPoly<FieldElem>& p, int var = kZ) {
    Poly out;
    for (int k = 0; k <= p.degree(); ++k) {
        const FieldElem& c = p.coeff(k);
        if (c.is_zero()) continue;
        if (!c.is_polynomial()) throw std::invalid_argument("upoly_to_poly: non-polynomial coefficient");
        out = out + c.num().shifted(Mono::var(var, k));
    }
    return out;
}

inline ClearedMatrix clear_denominators(const ZMatrix& m) {
    using UP = UPoly<FieldElem>;
    UP lcm(FieldElem(1L));
    m.for_each([&](int, int, const RatZ<FieldElem>& e) {
        if (e.den().degree() == 0) return;
        UP g = upoly_gcd(lcm, e.den());
        lcm = (lcm * e.den()).divmod(g).first;
    });
    // Coefficient denominators (in u, v) of the numerators after scaling.
    std::vector<Poly> cden;
    PMatrix out(m.rows(), m.cols());
    std::vector<std::tuple<int, int, UP>> scaled;
    m.for_each([&](int i, int j, const RatZ<FieldElem>& e) {
        UP s = e.num() * lcm.divmod(e.den()).first;
        for (const auto& c : s.coeffs())
            if (!c.is_zero() && !c.is_polynomial() &&
                std::find(cden.begin(), cden.end(), c.den()) == cden.end())
                cden.push_back(c.den());
        scaled.emplace_back(i, j, std::move(s));
    });
    FieldElem common(1L);
    for (const auto& d : cden) common = common * FieldElem(d);
    for (const auto& c : lcm.coeffs())
        if (!c.is_zero() && !c.is_polynomial()) common = common * FieldElem(c.den());
    for (auto& [i, j, s] : scaled) out.set(i, j, upoly_to_poly(s.scaled(common)));
    return {upoly_to_poly(lcm.scaled(common)), std::move(out)};
}

// ---------------------------------------------------------------------------
// f(z): f(z) f(xi z) = 1 / ((1 - r^{-2}s^2 z)(1 - r^2 s^{-2} z)(1 - xi z)(1 - xi^{-1} z)).

struct TruncatedSeriesF {
    int order;
    std::vector<FieldElem> coeffs;  // f_0 .. f_order
};

// Power series of 1 / prod (1 - a_k z) through z^T.
inline std::vector<FieldElem> inverse_linear_product_series(const std::vector<FieldElem>& a, int T) {
    std::vector<FieldElem> s(T + 1, FieldElem(0L));
    s[0] = FieldElem(1L);
    for (const auto& ak : a) {
        // multiply by 1/(1 - ak z) = sum ak^m z^m: s_k += ak * s_{k-1} cumulatively
        for (int k = 1; k <= T; ++k) s[k] = s[k] + ak * s[k - 1];
    }
    return s;
}

inline std::vector<FieldElem> f_rhs_factors(int n) {
    FieldElem xi = q_half(2 * (2 * n - 1));
    return {q_half(4), q_half(-4), xi, xi.inv()};
}

namespace detail {

// c * x^shift * A(x) / B(x) in Q(x), x = u^{-1} v.  A and B are primitive
// integer polynomials with positive leading coefficient and nonzero
// constant term; zero is an empty A.
struct XFrac {
    mpq_class c = 0;
    int shift = 0;
    ZPoly A, B{mpz_class(1)};

    static XFrac monomial(int k) {
        XFrac r;
        r.c = 1;
        r.shift = k;
        r.A = {mpz_class(1)};
        return r;
    }
    bool is_zero() const { return A.empty(); }

    // Bring an arbitrary integer numerator into normal form, folding its
    // content into c and its x-adic valuation into shift.
    static XFrac make(mpq_class c, int shift, ZPoly A, ZPoly B) {
        XFrac r;
        trim(A);
        if (A.empty() || sgn(c) == 0) return r;
        std::size_t val = 0;
        while (sgn(A[val]) == 0) ++val;
        A.erase(A.begin(), A.begin() + static_cast<long>(val));
        shift += static_cast<int>(val);
        ZPoly g = zgcd(A, B);
        if (deg(g) > 0) {
            ZPoly q;
            zdiv_exact(A, g, q);
            A = q;
            zdiv_exact(B, g, q);
            B = q;
        }
        for (ZPoly* p : {&A, &B}) {
            mpz_class k = zcontent(*p);
            if (sgn(p->back()) < 0) k = -k;
            *p = zdiv_scalar(*p, k);
            if (p == &A) c *= k;
            else c /= k;
        }
        c.canonicalize();
        r.c = c;
        r.shift = shift;
        r.A = std::move(A);
        r.B = std::move(B);
        return r;
    }

    friend XFrac operator*(const XFrac& a, const XFrac& b) {
        if (a.is_zero() || b.is_zero()) return {};
        return make(a.c * b.c, a.shift + b.shift, zmul(a.A, b.A), zmul(a.B, b.B));
    }
    XFrac inv() const {
        if (is_zero()) throw DivisionByZero("XFrac::inv: division by zero");
        return make(1 / c, -shift, B, A);
    }
    friend XFrac operator/(const XFrac& a, const XFrac& b) { return a * b.inv(); }
    friend XFrac operator+(const XFrac& a, const XFrac& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const int m = std::min(a.shift, b.shift);
        const mpz_class den = a.c.get_den() * b.c.get_den();
        auto part = [&](const XFrac& p, const XFrac& q) {
            ZPoly t = zmul(p.A, q.B);
            mpz_class k = p.c.get_num() * (den / p.c.get_den());
            for (auto& x : t) x *= k;
            t.insert(t.begin(), static_cast<std::size_t>(p.shift - m), mpz_class(0));
            return t;
        };
        ZPoly sum = part(a, b), other = part(b, a);
        if (sum.size() < other.size()) sum.resize(other.size());
        for (std::size_t i = 0; i < other.size(); ++i) sum[i] += other[i];
        return make(mpq_class(1, den), m, std::move(sum), zmul(a.B, b.B));
    }
    XFrac operator-() const {
        XFrac r = *this;
        r.c = -r.c;
        return r;
    }
    friend XFrac operator-(const XFrac& a, const XFrac& b) { return a + (-b); }

    // Inverse of to_field: succeeds iff a is a rational function of
    // x = u^{-1} v alone (every monomial of the numerator, and separately of
    // the denominator, has the same total degree, and the two agree).
    static std::optional<XFrac> from_field(const FieldElem& a) {
        if (a.is_zero()) return XFrac();
        auto flatten = [](const Poly& p, int& total, int& low) -> std::optional<ZPoly> {
            if (p.has_var(kW)) return std::nullopt;
            total = p.terms().front().first.e[kU] + p.terms().front().first.e[kV];
            low = p.min_exp(kV);
            ZPoly out;
            mpz_class scale = 1;
            for (const auto& [m, c] : p.terms()) {
                if (m.e[kU] + m.e[kV] != total) return std::nullopt;
                scale = lcm(scale, c.get_den());
            }
            for (const auto& [m, c] : p.terms()) {
                std::size_t k = static_cast<std::size_t>(m.e[kV] - low);
                if (out.size() <= k) out.resize(k + 1);
                out[k] = c.get_num() * (scale / c.get_den());
            }
            return out;
        };
        int tn = 0, ln = 0, td = 0, ld = 0;
        auto N = flatten(a.num(), tn, ln);
        auto D = flatten(a.den(), td, ld);
        if (!N || !D || tn != td) return std::nullopt;
        // The integer scalings cancel against make(): recover them from the
        // leading rational coefficients.
        mpq_class cn = a.num().terms().front().second / mpq_class((*N)[static_cast<std::size_t>(a.num().terms().front().first.e[kV] - ln)]);
        mpq_class cd = a.den().terms().front().second / mpq_class((*D)[static_cast<std::size_t>(a.den().terms().front().first.e[kV] - ld)]);
        return make(cn / cd, ln - ld, std::move(*N), std::move(*D));
    }

    FieldElem to_field() const {
        if (is_zero()) return FieldElem();
        // x^k = u^{-k} v^k; multiplying through by u^{deg B} makes B a
        // polynomial without monomial factor.
        const int db = deg(B);
        auto homogenize = [&](const ZPoly& p, int extra, const mpq_class& scale) {
            std::vector<Poly::Term> terms;
            for (int k = 0; k <= deg(p); ++k) {
                if (sgn(p[k]) == 0) continue;
                Mono m;
                m.e[kU] = static_cast<int16_t>(db - k - extra);
                m.e[kV] = static_cast<int16_t>(k + extra);
                terms.emplace_back(m, mpq_class(p[k]) * scale);
            }
            return Poly::from_terms(std::move(terms));
        };
        return FieldElem::from_coprime(homogenize(A, shift, c), homogenize(B, 0, mpq_class(1)));
    }
};

}  // namespace detail

inline TruncatedSeriesF build_f_series(int n, int order) {
    if (order < 1) throw std::invalid_argument("build_f_series: order must be >= 1");
    // Every coefficient is a rational function of x = (r^{-1}s)^{1/2} alone,
    // so the recurrence runs in Q(x) and converts once at the end.
    using detail::XFrac;
    const int xe = 2 * (2 * n - 1);
    const XFrac one = XFrac::monomial(0), xi = XFrac::monomial(xe);
    std::vector<XFrac> g(order + 1);
    g[0] = one;
    for (int e : {4, -4, xe, -xe}) {
        const XFrac a = XFrac::monomial(e);
        for (int k = 1; k <= order; ++k) g[k] = g[k] + a * g[k - 1];
    }
    std::vector<XFrac> f(order + 1), xipow(order + 1, one);
    f[0] = one;
    for (int k = 1; k <= order; ++k) xipow[k] = xipow[k - 1] * xi;
    for (int k = 1; k <= order; ++k) {
        XFrac acc = g[k];
        for (int a = 1; a < k; ++a) acc = acc - f[a] * f[k - a] * xipow[k - a];
        f[k] = acc / (one + xipow[k]);
    }
    std::vector<FieldElem> out;
    out.reserve(f.size());
    for (const auto& c : f) out.push_back(c.to_field());
    return {order, std::move(out)};
}

// Coefficients of f(z) f(xi z) through the series order.
inline std::vector<FieldElem> f_functional_product(const TruncatedSeriesF& f, const FieldElem& xi) {
    std::vector<FieldElem> out(f.order + 1, FieldElem(0L));
    FieldElem xp(1L);
    std::vector<FieldElem> g(f.order + 1);
    for (int k = 0; k <= f.order; ++k) {
        g[k] = f.coeffs[k] * xp;
        xp = xp * xi;
    }
    for (int a = 0; a <= f.order; ++a)
        for (int b = 0; a + b <= f.order; ++b) out[a + b] = out[a + b] + f.coeffs[a] * g[b];
    return out;
}

// Numeric coefficients of the infinite product for f(z), truncated to
// `factors` values of t, through z^T.  Converges xi-adically, so it is
// compared at sample points with |xi| < 1.
inline std::vector<NumericElem> f_product_numeric(int n, int T, int factors, const Evaluator& ev) {
    const NumericElem xi = ev(q_half(2 * (2 * n - 1)));
    const NumericElem a = ev(q_half(4)), ai = ev(q_half(-4));  // r^{-2}s^2, r^2 s^{-2}
    const unsigned bits = ev.bits();
    std::vector<NumericElem> s(T + 1, NumericElem(0L, bits));
    s[0] = NumericElem(1L, bits);
    auto mul_linear = [&](const NumericElem& c) {  // s *= (1 - c z)
        for (int k = T; k >= 1; --k) s[k] = s[k] - c * s[k - 1];
    };
    auto div_linear = [&](const NumericElem& c) {  // s /= (1 - c z)
        for (int k = 1; k <= T; ++k) s[k] = s[k] + c * s[k - 1];
    };
    for (int t = 0; t < factors; ++t) {
        mul_linear(xi.pow(2 * t));
        mul_linear(a * xi.pow(2 * t + 1));
        mul_linear(ai * xi.pow(2 * t + 1));
        mul_linear(xi.pow(2 * t + 2));
        div_linear(xi.pow(2 * t - 1));
        div_linear(xi.pow(2 * t + 1));
        div_linear(ai * xi.pow(2 * t));
        div_linear(a * xi.pow(2 * t));
    }
    return s;
}

}  // namespace bqg

namespace bqg {

// z -> image (a Laurent monomial such as z*y, z^{-1} or xi*z) in both parts.
inline ClearedMatrix substitute_z(const ClearedMatrix& m, const Mono& image) {
    return {m.den.substitute_monomial(kZ, image),
            m.num.map<Poly>([&](const Poly& p) { return p.substitute_monomial(kZ, image); })};
}

inline Mono z_times(int eu, int ev, int ez = 1, int ey = 0) {
    Mono m;
    m.e[kU] = static_cast<int16_t>(eu);
    m.e[kV] = static_cast<int16_t>(ev);
    m.e[kZ] = static_cast<int16_t>(ez);
    m.e[kY] = static_cast<int16_t>(ey);
    return m;
}

inline PMatrix lift_poly(const FMatrix& m) {
    return m.map<Poly>([](const FieldElem& x) {
        if (!x.is_polynomial()) throw std::invalid_argument("lift_poly: non-polynomial entry");
        return x.num();
    });
}

}  // namespace bqg
