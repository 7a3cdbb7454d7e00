// High-precision numeric backend: NumericElem wraps a GMP float with a fixed
// working precision, plus evaluation of exact coefficients at a sample point.
#pragma once

#include <algorithm>

#include "field.hpp"

#include <cmath>
#include <random>

namespace bqg {

inline constexpr unsigned kDefaultPrecisionBits = 128;
// Integer constants are exact at any precision, so they are created at the
// lowest supported one and never raise the precision of a result.
inline constexpr unsigned kMinPrecisionBits = 64;

class NumericElem {
public:
    NumericElem() : value_(0, kMinPrecisionBits) {}
    NumericElem(long c, unsigned bits = kMinPrecisionBits) : value_(c, bits) {}
    NumericElem(const mpf_class& x) : value_(x) {}
    NumericElem(const mpq_class& q, unsigned bits = kDefaultPrecisionBits) : value_(q, bits) {}
    NumericElem(const NumericElem&) = default;
    NumericElem(NumericElem&&) = default;
    // mpf_class assignment keeps the target's precision; a value carries its own.
    NumericElem& operator=(const NumericElem& o) {
        if (this != &o) {
            value_.set_prec(o.value_.get_prec());
            value_ = o.value_;
        }
        return *this;
    }
    NumericElem& operator=(NumericElem&& o) noexcept {
        value_.swap(o.value_);
        return *this;
    }

    const mpf_class& value() const { return value_; }
    unsigned precision_bits() const { return static_cast<unsigned>(value_.get_prec()); }
    bool is_zero() const { return sgn(value_) == 0; }
    double to_double() const { return value_.get_d(); }

    NumericElem operator-() const { return NumericElem(mpf_class(-value_, value_.get_prec())); }
    friend NumericElem operator+(const NumericElem& a, const NumericElem& b) { return wrap(a, b, a.value_ + b.value_); }
    friend NumericElem operator-(const NumericElem& a, const NumericElem& b) { return wrap(a, b, a.value_ - b.value_); }
    friend NumericElem operator*(const NumericElem& a, const NumericElem& b) { return wrap(a, b, a.value_ * b.value_); }
    friend NumericElem operator/(const NumericElem& a, const NumericElem& b) {
        if (b.is_zero()) throw DivisionByZero("NumericElem: division by zero");
        return wrap(a, b, a.value_ / b.value_);
    }
    NumericElem inv() const { return NumericElem(1L, precision_bits()) / *this; }
    NumericElem& operator+=(const NumericElem& b) { return *this = *this + b; }
    NumericElem& operator-=(const NumericElem& b) { return *this = *this - b; }
    NumericElem& operator*=(const NumericElem& b) { return *this = *this * b; }
    NumericElem& operator/=(const NumericElem& b) { return *this = *this / b; }
    // Structural equality is exact; use near() for tolerance comparisons.
    friend bool operator==(const NumericElem& a, const NumericElem& b) { return cmp(a.value_, b.value_) == 0; }

    NumericElem abs() const { return NumericElem(mpf_class(::abs(value_), value_.get_prec())); }
    NumericElem pow(int k) const {
        if (k < 0) return inv().pow(-k);
        NumericElem r(1L, precision_bits()), b = *this;
        while (k) {
            if (k & 1) r *= b;
            k >>= 1;
            if (k) b *= b;
        }
        return r;
    }
    NumericElem sqrt() const { return NumericElem(mpf_class(::sqrt(value_), value_.get_prec())); }

    std::string str(int digits = 25) const {
        mp_exp_t exp;
        std::string m = value_.get_str(exp, 10, digits);
        if (m.empty()) return "0";
        bool neg = m[0] == '-';
        if (neg) m.erase(0, 1);
        std::string out = neg ? "-0." : "0.";
        out += m + "e" + std::to_string(exp);
        return out;
    }

private:
    mpf_class value_;
    static NumericElem wrap(const NumericElem& a, const NumericElem& b, const mpf_class& expr_value) {
        mpf_class r(0, std::max(a.value_.get_prec(), b.value_.get_prec()));
        r = expr_value;
        return NumericElem(r);
    }
};

// |a - b| <= tol * scale
inline bool near(const NumericElem& a, const NumericElem& b, const NumericElem& tol, const NumericElem& scale) {
    NumericElem d = (a - b).abs();
    return cmp(d.value(), (tol * scale).value()) <= 0;
}

// Relative pass threshold: 1e-20 at 128 bits and above, 10^{-bits/6} below.
inline NumericElem default_tolerance(unsigned bits = kDefaultPrecisionBits) {
    const int digits = std::min(20, static_cast<int>(bits / 6));
    mpf_class t(1, bits);
    for (int i = 0; i < digits; ++i) t /= 10;
    return NumericElem(t);
}

struct SamplePoint {
    mpq_class u, v;
};

struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

// Numeric evaluator of exact coefficients at a fixed (u, v).
class Evaluator {
public:
    Evaluator(const SamplePoint& p, unsigned bits = kDefaultPrecisionBits)
        : point_(p), bits_(bits), u_(p.u, bits), v_(p.v, bits) {
        if (sgn(p.u) == 0 || sgn(p.v) == 0) throw PoleError("evaluate: u and v must be nonzero");
        if (p.u * p.u == p.v * p.v) throw PoleError("evaluate: r = s is excluded (u^2 = v^2)");
        w_ = (u_ * u_ + v_ * v_).sqrt();
    }

    const SamplePoint& point() const { return point_; }
    unsigned bits() const { return bits_; }
    NumericElem u() const { return u_; }
    NumericElem v() const { return v_; }
    NumericElem w() const { return w_; }

    NumericElem operator()(const Poly& p, const NumericElem* z = nullptr, const NumericElem* y = nullptr) const {
        NumericElem acc(0L, bits_);
        for (const auto& [m, c] : p.terms()) {
            NumericElem t(c, bits_);
            t *= u_.pow(m.e[kU]);
            t *= v_.pow(m.e[kV]);
            if (m.e[kW]) t *= w_.pow(m.e[kW]);
            if (m.e[kZ]) {
                if (!z) throw std::invalid_argument("evaluate: z value required");
                t *= z->pow(m.e[kZ]);
            }
            if (m.e[kY]) {
                if (!y) throw std::invalid_argument("evaluate: y value required");
                t *= y->pow(m.e[kY]);
            }
            acc += t;
        }
        return acc;
    }

    // Magnitude scale of a polynomial at the point: sum of |term| values.
    NumericElem scale(const Poly& p) const {
        NumericElem acc(0L, bits_);
        for (const auto& [m, c] : p.terms()) {
            NumericElem t(c, bits_);
            t *= u_.pow(m.e[kU]);
            t *= v_.pow(m.e[kV]);
            if (m.e[kW]) t *= w_;
            acc += t.abs();
        }
        return acc;
    }

    NumericElem operator()(const FieldElem& a) const {
        NumericElem d = (*this)(a.den());
        NumericElem sc = scale(a.den());
        // A denominator that cancels to (relative) machine zero is a pole.
        NumericElem eps = default_tolerance(bits_) * default_tolerance(bits_);
        if (d.is_zero() || cmp(d.abs().value(), (eps * sc).value()) <= 0)
            throw PoleError("evaluate: pole at (u,v)=(" + point_.u.get_str() + "," + point_.v.get_str() +
                            "), vanishing denominator " + a.den().str());
        return (*this)(a.num()) / d;
    }

private:
    SamplePoint point_;
    unsigned bits_;
    NumericElem u_, v_, w_;
};

inline NumericElem evaluate(const FieldElem& a, const SamplePoint& p, unsigned bits = kDefaultPrecisionBits) {
    return Evaluator(p, bits)(a);
}

// Random sample point with 1/4 <= |u|,|v| <= 4, 1/2 <= |v/u| <= 2 and
// |1 - v^2/u^2| >= 1/8.  Coefficients grow like powers of v/u, so keeping the
// ratio moderate keeps cancellation within the working precision.
inline SamplePoint random_sample_point(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(4, 64);  // u = num/16 in [1/4, 4]
    std::bernoulli_distribution sign(0.5);
    for (;;) {
        mpq_class u(num(rng), 16), v(num(rng), 16);
        u.canonicalize();
        v.canonicalize();
        if (sign(rng)) u = -u;
        if (sign(rng)) v = -v;
        const mpq_class ratio = abs(v / u);
        if (ratio < mpq_class(1, 2) || ratio > 2) continue;
        if (abs(1 - ratio * ratio) >= mpq_class(1, 8)) return {u, v};
    }
}

}  // namespace bqg
