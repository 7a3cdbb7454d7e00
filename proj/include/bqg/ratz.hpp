// Univariate polynomials and rational functions in the spectral variable z
// over a coefficient field F (FieldElem or NumericElem).
#pragma once

#include "numeric.hpp"

#include <type_traits>

namespace bqg {

template <class F>
inline constexpr bool is_exact_v = std::is_same_v<F, FieldElem>;

template <class F>
class UPoly {
public:
    UPoly() = default;
    UPoly(const F& c) {
        if (!c.is_zero()) c_.push_back(c);
    }
    explicit UPoly(std::vector<F> c) : c_(std::move(c)) { trim(); }
    static UPoly z(int k = 1) {
        std::vector<F> c(k + 1, F(0L));
        c[k] = F(1L);
        return UPoly(std::move(c));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<F>& coeffs() const { return c_; }
    F coeff(int k) const { return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : F(0L); }
    const F& lead() const { return c_.back(); }

    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

    UPoly operator-() const {
        UPoly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        std::vector<F> r(std::max(a.c_.size(), b.c_.size()), F(0L));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = r[i] + b.c_[i];
        return UPoly(std::move(r));
    }
    friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<F> r(a.c_.size() + b.c_.size() - 1, F(0L));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!a.c_[i].is_zero())
                for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        return UPoly(std::move(r));
    }
    UPoly scaled(const F& s) const {
        if (s.is_zero()) return {};
        UPoly r = *this;
        for (auto& x : r.c_) x = x * s;
        return r;
    }

    // Euclidean division over the field F.
    std::pair<UPoly, UPoly> divmod(const UPoly& b) const {
        if (b.is_zero()) throw DivisionByZero("UPoly::divmod: division by zero polynomial");
        std::vector<F> rem = c_;
        std::vector<F> q(std::max(0, degree() - b.degree() + 1), F(0L));
        F il = b.lead().inv();
        for (int k = degree() - b.degree(); k >= 0; --k) {
            F coef = rem[k + b.degree()] * il;
            q[k] = coef;
            if (coef.is_zero()) continue;
            for (int j = 0; j <= b.degree(); ++j) rem[k + j] = rem[k + j] - coef * b.c_[j];
            rem[k + b.degree()] = F(0L);  // exact cancellation of the lead
        }
        return {UPoly(std::move(q)), UPoly(std::move(rem))};
    }
    UPoly monic() const {
        if (is_zero()) return *this;
        return scaled(lead().inv());
    }
    F operator()(const F& x) const {
        F acc(0L);
        for (int k = degree(); k >= 0; --k) acc = acc * x + c_[k];
        return acc;
    }
    // z^deg * p(1/z)
    UPoly reversed() const {
        std::vector<F> r(c_.rbegin(), c_.rend());
        return UPoly(std::move(r));
    }
    int low_order() const {
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (!c_[k].is_zero()) return static_cast<int>(k);
        return 0;
    }
    UPoly shifted_down(int k) const {
        if (k <= 0) return *this;
        return UPoly(std::vector<F>(c_.begin() + k, c_.end()));
    }

    std::string str() const {
        if (c_.empty()) return "0";
        std::string out;
        bool first = true;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k].is_zero()) continue;
            if (!first) out += " + ";
            first = false;
            out += "(" + c_[k].str() + ")";
            if (k) out += "*z^" + std::to_string(k);
        }
        return out;
    }

private:
    std::vector<F> c_;
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
};

template <class F>
UPoly<F> upoly_gcd(UPoly<F> a, UPoly<F> b) {
    while (!b.is_zero()) {
        auto r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

template <class F>
class RatZ {
public:
    RatZ() : num_(), den_(F(1L)) {}
    RatZ(long c) : num_(F(c)), den_(F(1L)) {}
    RatZ(const F& c) : num_(c), den_(F(1L)) {}
    RatZ(const UPoly<F>& p) : num_(p), den_(F(1L)) {}
    RatZ(const UPoly<F>& n, const UPoly<F>& d) : num_(n), den_(d) {
        if (d.is_zero()) throw DivisionByZero("RatZ: zero denominator");
        canonicalize();
    }
    static RatZ z() { return RatZ(UPoly<F>::z(1)); }

    const UPoly<F>& num() const { return num_; }
    const UPoly<F>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    int degree_bound() const { return std::max(num_.degree(), den_.degree()); }

    friend bool operator==(const RatZ& a, const RatZ& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    RatZ operator-() const {
        RatZ r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RatZ operator+(const RatZ& a, const RatZ& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) return RatZ(a.num_ + b.num_, a.den_);
        return RatZ(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatZ operator-(const RatZ& a, const RatZ& b) { return a + (-b); }
    friend RatZ operator*(const RatZ& a, const RatZ& b) {
        if (a.is_zero() || b.is_zero()) return {};
        return RatZ(a.num_ * b.num_, a.den_ * b.den_);
    }
    RatZ inv() const {
        if (is_zero()) throw DivisionByZero("RatZ::inv: division by zero");
        return RatZ(den_, num_);
    }
    friend RatZ operator/(const RatZ& a, const RatZ& b) { return a * b.inv(); }
    RatZ& operator+=(const RatZ& b) { return *this = *this + b; }
    RatZ& operator-=(const RatZ& b) { return *this = *this - b; }
    RatZ& operator*=(const RatZ& b) { return *this = *this * b; }

    // z -> 1/z
    RatZ compose_inverse() const {
        if (is_zero()) return *this;
        int dn = num_.degree(), dd = den_.degree();
        UPoly<F> n = num_.reversed(), d = den_.reversed();
        if (dd > dn) n = n * UPoly<F>::z(dd - dn);
        if (dn > dd) d = d * UPoly<F>::z(dn - dd);
        return RatZ(n, d);
    }
    // z -> c*z
    RatZ scale_argument(const F& c) const {
        auto sc = [&](const UPoly<F>& p) {
            std::vector<F> out;
            F pw(1L);
            for (const auto& x : p.coeffs()) {
                out.push_back(x * pw);
                pw = pw * c;
            }
            return UPoly<F>(std::move(out));
        };
        return RatZ(sc(num_), sc(den_));
    }

    F operator()(const F& x) const {
        F d = den_(x);
        if (d.is_zero()) throw PoleError("RatZ: pole at the requested point");
        return num_(x) / d;
    }
    // Value at z = 0 and the limit z -> infinity (nullopt when infinite).
    std::optional<F> at_zero() const {
        if (den_.coeff(0).is_zero()) return std::nullopt;
        return num_.coeff(0) / den_.coeff(0);
    }
    std::optional<F> at_infinity() const {
        if (num_.degree() > den_.degree()) return std::nullopt;
        if (num_.degree() < den_.degree()) return F(0L);
        return num_.lead() / den_.lead();
    }

    std::string str() const {
        if (den_.degree() == 0 && den_.lead() == F(1L)) return num_.str();
        return "[" + num_.str() + "]/[" + den_.str() + "]";
    }

private:
    UPoly<F> num_, den_;

    void canonicalize() {
        if (num_.is_zero()) {
            den_ = UPoly<F>(F(1L));
            return;
        }
        if constexpr (is_exact_v<F>) {
            if (den_.degree() > 0) {
                UPoly<F> g = upoly_gcd(num_, den_);
                if (g.degree() > 0) {
                    num_ = num_.divmod(g).first;
                    den_ = den_.divmod(g).first;
                }
            }
        }
        F il = den_.lead().inv();
        num_ = num_.scaled(il);
        den_ = den_.scaled(il);
    }
};

// Convert a Poly in (u, v, w, z) with non-negative z-exponents to UPoly<FieldElem>.
inline UPoly<FieldElem> to_upoly(const Poly& p) {
    auto parts = p.coefficients_in(kZ);
    if (parts.empty()) return {};
    int lo = parts.begin()->first;
    if (lo < 0) throw std::invalid_argument("to_upoly: negative power of z");
    int hi = parts.rbegin()->first;
    std::vector<FieldElem> c(hi + 1, FieldElem(0L));
    for (auto& [k, q] : parts) c[k] = FieldElem(q);
    return UPoly<FieldElem>(std::move(c));
}

// Numeric image of an exact RatZ at a sample point.
inline RatZ<NumericElem> to_numeric(const RatZ<FieldElem>& a, const Evaluator& ev) {
    auto conv = [&](const UPoly<FieldElem>& p) {
        std::vector<NumericElem> c;
        for (const auto& x : p.coeffs()) c.push_back(ev(x));
        return UPoly<NumericElem>(std::move(c));
    };
    return RatZ<NumericElem>(conv(a.num()), conv(a.den()));
}

struct InsufficientSamples : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Deterministic sample points for identity testing in z: primes 2, 3, 5, ...
inline std::vector<long> prime_points(std::size_t count, std::size_t skip = 0) {
    std::vector<long> out;
    for (long p = 2; out.size() < count + skip; ++p) {
        bool prime = true;
        for (long d = 2; d * d <= p; ++d)
            if (p % d == 0) {
                prime = false;
                break;
            }
        if (prime) out.push_back(p);
    }
    out.erase(out.begin(), out.begin() + static_cast<long>(skip));
    return out;
}

enum class IdentityMode { exact, sampled };

// Decide a == b.  In sampled mode k distinct prime points are used (pole
// points are skipped and replaced); k must exceed the degree of the
// cross-multiplied difference.
template <class F>
bool ratz_identity_test(const RatZ<F>& a, const RatZ<F>& b, IdentityMode mode, std::size_t k = 0) {
    if (mode == IdentityMode::exact) {
        if constexpr (is_exact_v<F>) return a == b;
        else throw std::invalid_argument("exact identity test needs exact coefficients");
    }
    int required = std::max(a.num().degree() + b.den().degree(), b.num().degree() + a.den().degree()) + 1;
    if (static_cast<int>(k) < required)
        throw InsufficientSamples("ratz_identity_test: need at least " + std::to_string(required) +
                                  " sample points, got " + std::to_string(k));
    std::size_t used = 0;
    for (long p = 2; used < k; ++p) {
        bool prime = true;
        for (long d = 2; d * d <= p; ++d)
            if (p % d == 0) prime = false;
        if (!prime) continue;
        F x(p);
        F da = a.den()(x), db = b.den()(x);
        if (da.is_zero() || db.is_zero()) continue;
        F lhs = a.num()(x) * db, rhs = b.num()(x) * da;
        if constexpr (is_exact_v<F>) {
            if (!(lhs == rhs)) return false;
        } else {
            NumericElem scale = lhs.abs() + rhs.abs() + NumericElem(1L);
            if (!near(lhs, rhs, default_tolerance(lhs.precision_bits()), scale)) return false;
        }
        ++used;
    }
    return true;
}

}  // namespace bqg
