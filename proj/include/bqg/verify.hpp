// Check registry, shared input bundles and the suite runner.
//
// Every registered check is a pure function of a Context, which builds the
// R-matrices, representations and L-operators once per run and hands out
// const references.  Reports are ordered by registry position, never by
// completion time, so a run is reproducible byte for byte.
#pragma once

#include "lyndon.hpp"
#include "report.hpp"
#include "reps.hpp"
#include "rll.hpp"
#include "rmat.hpp"

#include <json.hpp>

#include <fnmatch.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

namespace bqg {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kMinZSamples = 7;

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Backend {
    bool numeric = false;
    unsigned bits = kDefaultPrecisionBits;

    // "exact", "numeric" or "numeric:BITS".
    static Backend parse(const std::string& s) {
        Backend b;
        if (s == "exact") return b;
        if (s == "numeric") {
            b.numeric = true;
            return b;
        }
        if (s.rfind("numeric:", 0) == 0) {
            b.numeric = true;
            const std::string digits = s.substr(8);
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 6)
                throw ConfigError("backend: precision must be a positive integer, got '" + digits + "'");
            b.bits = static_cast<unsigned>(std::stoul(digits));
            return b;
        }
        throw ConfigError("backend: expected exact or numeric:BITS, got '" + s + "'");
    }
    std::string str() const { return numeric ? "numeric:" + std::to_string(bits) : "exact"; }
};

struct Config {
    int rank = 2;
    Backend backend;
    std::string checks = "*";  // comma-separated globs over ids and paper tags
    int z_samples = 0;         // 0 = automatic
    int series_order = 8;
    std::uint64_t seed = 0;
    int jobs = 1;
    int mode_bound = 3;
    bool timing = false;  // wall-clock runtimes make reports non-reproducible

    void validate() const {
        if (rank < 2) throw ConfigError("rank must be >= 2");
        if (backend.numeric && backend.bits < 64) throw ConfigError("numeric precision must be >= 64 bits");
        if (z_samples != 0 && z_samples < kMinZSamples)
            throw ConfigError("z-samples must be 0 (automatic) or >= " + std::to_string(kMinZSamples));
        if (series_order < 1) throw ConfigError("series order must be >= 1");
        if (jobs < 1) throw ConfigError("jobs must be >= 1");
        if (mode_bound < 1) throw ConfigError("mode bound must be >= 1");
    }
    int effective_z_samples() const { return z_samples ? z_samples : kMinZSamples; }
};

// ---------------------------------------------------------------------------
// Shared inputs.

namespace detail {

// Built on first use; safe to request from several workers at once.  A
// failed build is retried by the next caller and rethrows there.
template <class T>
class Lazy {
public:
    template <class Fn>
    const T& get(Fn&& build) {
        std::call_once(flag_, [&] { value_.emplace(build()); });
        return *value_;
    }

private:
    std::once_flag flag_;
    std::optional<T> value_;
};

}  // namespace detail

class Context {
public:
    explicit Context(Config c) : cfg_(std::move(c)) { cfg_.validate(); }

    const Config& config() const { return cfg_; }
    int n() const { return cfg_.rank; }
    IndexScheme scheme() const { return IndexScheme(cfg_.rank); }

    const RBundle& basic() {
        return basic_.get([&] { return build_basic_R(n()); });
    }
    const SpectralR& spectral(Variant v) {
        auto& slot = v == Variant::standard ? spectral_std_ : spectral_alt_;
        return slot.get([&] { return build_spectral_R(n(), v); });
    }
    const ClearedMatrix& cleared(Variant v) {
        auto& slot = v == Variant::standard ? cleared_std_ : cleared_alt_;
        return slot.get([&] { return clear_denominators(spectral(v).matrix); });
    }
    const FieldRep& T1() {
        return t1_.get([&] { return build_T1(n()); });
    }
    const FieldRep& T1_squared() {
        return t1sq_.get([&] { return amplified_T1(n(), 2); });
    }
    const PolyRep& evaluation() {
        return eval_.get([&] { return build_evaluation(n()); });
    }
    const FieldRep& affine() {
        return affine_.get([&] { return build_affine_vector(n(), cfg_.mode_bound); });
    }
    const RepL& L(LRole role) {
        auto& slot = role == LRole::minus ? L_minus_ : L_plus_;
        return slot.get([&] { return build_rep_L(n(), role); });
    }

    // The numeric sample point for (u, v), drawn from the seed.
    SamplePoint sample_point() const {
        std::mt19937_64 rng(cfg_.seed);
        return random_sample_point(rng);
    }
    Evaluator evaluator() const { return Evaluator(sample_point(), cfg_.backend.bits); }
    std::vector<FieldElem> z_samples() const { return z_sample_points(static_cast<std::size_t>(cfg_.effective_z_samples())); }
    int mode_window() const { return std::min(3, cfg_.series_order); }

    // Relation families computed together and reported one id at a time.
    const CheckOutcome& gauss() {
        return gauss_.get([&] {
            return dispatch<CheckOutcome>([&]<class T>(const Converter<T>& conv) {
                return check_gauss<T>(L(LRole::plus), z_samples(), conv);
            });
        });
    }
    const std::vector<RelationReport>& k_relations() {
        return k_.get([&] {
            return dispatch<std::vector<RelationReport>>([&]<class T>(const Converter<T>& conv) {
                return check_k_relations<T>(L(LRole::plus), z_samples(), conv);
            });
        });
    }
    const std::vector<RelationReport>& thm_relations() {
        return thm_.get([&] {
            return dispatch<std::vector<RelationReport>>([&]<class T>(const Converter<T>& conv) {
                auto g = extract_gaussian_generators<T>(L(LRole::plus), L(LRole::minus), cfg_.series_order, conv);
                return check_thm_relations<T>(g, conv, mode_window());
            });
        });
    }
    const std::vector<RelationReport>& drinfeld() {
        return drinfeld_.get([&] { return check_drinfeld(affine(), cfg_.mode_bound); });
    }
    const std::map<std::string, CheckOutcome>& D_relations() {
        return D_.get([&] { return check_D_relations(affine(), cfg_.mode_bound); });
    }

private:
    Config cfg_;
    detail::Lazy<RBundle> basic_;
    detail::Lazy<SpectralR> spectral_std_, spectral_alt_;
    detail::Lazy<ClearedMatrix> cleared_std_, cleared_alt_;
    detail::Lazy<FieldRep> t1_, t1sq_, affine_;
    detail::Lazy<PolyRep> eval_;
    detail::Lazy<RepL> L_plus_, L_minus_;
    detail::Lazy<CheckOutcome> gauss_;
    detail::Lazy<std::vector<RelationReport>> k_, thm_, drinfeld_;
    detail::Lazy<std::map<std::string, CheckOutcome>> D_;

    template <class R, class Fn>
    R dispatch(Fn&& fn) {
        if (cfg_.backend.numeric) return fn(numeric_converter(evaluator()));
        return fn(exact_converter());
    }
};

// ---------------------------------------------------------------------------
// Identity checks on the constant R-matrix.

namespace checks {

inline CheckOutcome R_inverse(const RBundle& b) {
    const int N = b.scheme.N();
    const auto I = FMatrix::identity(N * N);
    const auto P = flip_P<FieldElem>(N);
    Tally<FieldElem> t;
    t.equal("R R^-1 = I", b.R * b.R_inv, I);
    t.equal("R^-1 R = I", b.R_inv * b.R, I);
    t.equal("R^-1 = P R(1/r, 1/s) P", P * b.R.map<FieldElem>([](const FieldElem& x) { return x.invert_uv(); }) * P,
            b.R_inv);
    return t.outcome();
}

inline CheckOutcome metric_C(const RBundle& b) {
    const IndexScheme& sc = b.scheme;
    Tally<FieldElem> t;
    t.equal("C^2 = I", b.C * b.C, FMatrix::identity(sc.N()));
    for (int i = 1; i <= sc.N(); ++i)
        t.expect("C_{" + std::to_string(i) + "," + std::to_string(sc.prime(i)) + "}",
                 b.C.at(i, sc.prime(i)) == q_half(sc.rho2(i)), "expected (r^-1 s)^rho_i");
    return t.outcome();
}

inline CheckOutcome braid(const FMatrix& R, int N) {
    auto R12 = embed3(R, N, 1, 2), R23 = embed3(R, N, 2, 3);
    Tally<FieldElem> t;
    t.equal("R12 R23 R12 = R23 R12 R23", R12 * R23 * R12, R23 * R12 * R23);
    return t.outcome();
}

inline CheckOutcome minimal_polynomial(const FMatrix& R, int n) {
    Tally<FieldElem> t;
    t.zero("(R - r^-1 s)(R + r s^-1)(R - (r s^-1)^2n)", apply_poly(minimal_polynomial_R(n), R));
    // No proper factor annihilates R.
    const int M = R.rows();
    const FieldElem roots[3] = {q_half(2), -q_half(-2), q_half(-4 * n)};
    const auto I = FMatrix::identity(M);
    for (int skip = 0; skip < 3; ++skip) {
        FMatrix prod = I;
        for (int k = 0; k < 3; ++k)
            if (k != skip) prod = prod * (R - I.scaled(roots[k]));
        t.expect("quadratic factor without root " + roots[skip].str(), !prod.is_zero(), "annihilates R");
    }
    return t.outcome();
}

inline CheckOutcome projectors(const RBundle& b) {
    const int N = b.scheme.N(), n = b.scheme.n;
    const auto I = FMatrix::identity(N * N);
    Tally<FieldElem> t;
    const FMatrix* P[3] = {&b.P_zero, &b.P_plus, &b.P_minus};
    const char* name[3] = {"P0", "P+", "P-"};
    const int expected_rank[3] = {1, N * (N + 1) / 2 - 1, N * (N - 1) / 2};
    const FieldElem eigen[3] = {q_half(-4 * n), q_half(2), -q_half(-2)};
    t.equal("P0 + P+ + P- = I", b.P_zero + b.P_plus + b.P_minus, I);
    for (int a = 0; a < 3; ++a) {
        t.equal(std::string(name[a]) + "^2", *P[a] * *P[a], *P[a]);
        t.equal(std::string("R ") + name[a], b.R * *P[a], P[a]->scaled(eigen[a]));
        const int rk = rank(*P[a]);
        t.expect(std::string("rank ") + name[a], rk == expected_rank[a],
                 "rank " + std::to_string(rk) + ", expected " + std::to_string(expected_rank[a]));
        for (int c = a + 1; c < 3; ++c) t.zero(std::string(name[a]) + " " + name[c], *P[a] * *P[c]);
    }
    return t.outcome();
}

inline CheckOutcome skein(const FMatrix& R, const FMatrix& R_inv, const FMatrix& K) {
    const auto I = FMatrix::identity(R.rows());
    Tally<FieldElem> t;
    t.equal("R - R^-1 = (r^-1 s - r s^-1)(I - K)", R - R_inv, (I - K).scaled(q_half(2) - q_half(-2)));
    return t.outcome();
}

inline FieldElem K_quasi_coefficient(int n) {
    return (q_half(-2) - q_half(2) - q_half(4 * n) + q_half(-4 * n)) / (q_half(-2) - q_half(2));
}

inline CheckOutcome K_quasi(const RBundle& b) {
    Tally<FieldElem> t;
    t.equal("K^2 = c K", b.K * b.K, b.K.scaled(K_quasi_coefficient(b.scheme.n)));
    return t.outcome();
}

inline CheckOutcome KR(const RBundle& b) {
    const int n = b.scheme.n;
    Tally<FieldElem> t;
    t.equal("K R = (r s^-1)^2n K", b.K * b.R, b.K.scaled(q_half(-4 * n)));
    t.equal("K R^-1 = (r^-1 s)^2n K", b.K * b.R_inv, b.K.scaled(q_half(4 * n)));
    t.equal("R K = (r s^-1)^2n K", b.R * b.K, b.K.scaled(q_half(-4 * n)));
    return t.outcome();
}

// K^{ij}_{kl} is the coefficient of E_{ki} (x) E_{lj}.
inline CheckOutcome K_entries_and_sums(const RBundle& b) {
    const IndexScheme& sc = b.scheme;
    const int N = sc.N();
    auto pair = [N](int a, int c) { return (a - 1) * N + (c - 1); };
    Tally<FieldElem> t;
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j)
            for (int k = 1; k <= N; ++k)
                for (int l = 1; l <= N; ++l) {
                    FieldElem expect = (j == sc.prime(i) && l == sc.prime(k)) ? q_half(sc.rho2(i) + sc.rho2(k)) : FieldElem(0L);
                    FieldElem got = b.K.get(pair(k, l), pair(i, j));
                    if (!(got == expect))
                        t.expect("K^{" + std::to_string(i) + std::to_string(j) + "}_{" + std::to_string(k) +
                                     std::to_string(l) + "}",
                                 false, "is " + got.str() + ", expected " + expect.str());
                }
    t.expect("K entries", true);
    for (int i = 1; i <= N; ++i) {
        FieldElem sum(0L);
        for (int j = 1; j <= N; ++j) sum += b.R.get(pair(i, j), pair(i, j)) * q_half(2 * sc.rho2(j));
        t.expect("sum_j R_ij^ij (r^-1 s)^2rho_j, i = " + std::to_string(i), sum == q_half(4 * sc.n),
                 "is " + sum.str());
    }
    return t.outcome();
}

inline CheckOutcome KR_cross(const RBundle& b) {
    const int N = b.scheme.N(), n = b.scheme.n;
    auto K12 = embed3(b.K, N, 1, 2), K23 = embed3(b.K, N, 2, 3);
    auto R12 = embed3(b.R, N, 1, 2), R23 = embed3(b.R, N, 2, 3);
    auto Ri12 = embed3(b.R_inv, N, 1, 2), Ri23 = embed3(b.R_inv, N, 2, 3);
    const FieldElem p = q_half(4 * n), pi = q_half(-4 * n);  // (r^-1 s)^{+-2n}
    Tally<FieldElem> t;
    t.equal("K12 R23 K12", K12 * R23 * K12, K12.scaled(p));
    t.equal("K12 R23^-1 K12", K12 * Ri23 * K12, K12.scaled(pi));
    t.equal("K23 R12 K23", K23 * R12 * K23, K23.scaled(p));
    t.equal("K23 R12^-1 K23", K23 * Ri12 * K23, K23.scaled(pi));
    return t.outcome();
}

// BWM_t(p, q) with p = (r^-1 s)^2n, q = r^-1 s, g_i = R_{i,i+1}, e_i = K_{i,i+1}.
inline CheckOutcome bwm(const RBundle& b) {
    const int N = b.scheme.N(), n = b.scheme.n;
    const FieldElem p = q_half(4 * n), q = q_half(2);
    auto g1 = embed3(b.R, N, 1, 2), g2 = embed3(b.R, N, 2, 3);
    auto gi1 = embed3(b.R_inv, N, 1, 2), gi2 = embed3(b.R_inv, N, 2, 3);
    auto e1 = embed3(b.K, N, 1, 2), e2 = embed3(b.K, N, 2, 3);
    const auto I = FMatrix::identity(N * N * N);
    Tally<FieldElem> t;
    t.equal("g1 g2 g1 = g2 g1 g2", g1 * g2 * g1, g2 * g1 * g2);
    {  // far commutation needs four strands
        const auto IN = FMatrix::identity(N), INN = FMatrix::identity(N * N);
        auto G1 = kron(b.R, INN), G3 = kron(INN, b.R);
        t.equal("g1 g3 = g3 g1", G1 * G3, G3 * G1);
        (void)IN;
    }
    t.equal("e1 g1 = p^-1 e1", e1 * g1, e1.scaled(p.inv()));
    t.equal("e2 g2 = p^-1 e2", e2 * g2, e2.scaled(p.inv()));
    t.equal("e2 g1 e2 = p e2", e2 * g1 * e2, e2.scaled(p));
    t.equal("e2 g1^-1 e2 = p^-1 e2", e2 * gi1 * e2, e2.scaled(p.inv()));
    t.equal("(q - q^-1)(1 - e1) = g1 - g1^-1", (I - e1).scaled(q - q.inv()), g1 - gi1);
    t.equal("(q - q^-1)(1 - e2) = g2 - g2^-1", (I - e2).scaled(q - q.inv()), g2 - gi2);
    t.zero("(g1 - q)(g1 + q^-1)(g1 - p^-1)", (g1 - I.scaled(q)) * (g1 + I.scaled(q.inv())) * (g1 - I.scaled(p.inv())));
    return t.outcome();
}

// e_i^2 = (1 + (p - p^-1)/(q - q^-1)) e_i.  The printed coefficient has a
// product where the quotient belongs; both are evaluated, the quotient is
// the one asserted.
inline CheckOutcome bwm_e_square(const RBundle& b) {
    const int n = b.scheme.n;
    const FieldElem p = q_half(4 * n), q = q_half(2), one(1L);
    const FMatrix K2 = b.K * b.K;
    Tally<FieldElem> t;
    t.equal("e^2 = (1 + (p - p^-1)/(q - q^-1)) e", K2, b.K.scaled(one + (p - p.inv()) / (q - q.inv())));
    CheckOutcome o = t.outcome();
    const bool printed = K2 == b.K.scaled(one + (p - p.inv()) * (q - q.inv()));
    o.note = std::string("printed form with (p - p^-1)(q - q^-1): ") + (printed ? "holds" : "fails");
    return o;
}

inline CheckOutcome crossing_finite(const RBundle& b) {
    const int N = b.scheme.N();
    const auto IN = FMatrix::identity(N);
    auto C1 = kron(b.C, IN), C1i = kron(b.C_inv, IN), C2 = kron(IN, b.C), C2i = kron(IN, b.C_inv);
    Tally<FieldElem> t;
    t.equal("R_hat = C1 (R_hat^t1)^-1 C1^-1", C1 * invert(partial_transpose(b.R_hat, N, 1)) * C1i, b.R_hat);
    t.equal("R_hat = C2 (R_hat^-1)^t2 C2^-1", C2 * partial_transpose(invert(b.R_hat), N, 2) * C2i, b.R_hat);
    return t.outcome();
}

// Twenty single-entry corruptions of R; each must be caught by braid,
// minimal polynomial or skein, and the catching check must name an entry.
inline CheckOutcome mutation_sensitivity(const RBundle& b, std::uint64_t seed, int count = 20) {
    const int N = b.scheme.N(), n = b.scheme.n;
    std::vector<std::pair<int, int>> support;
    b.R.for_each([&](int i, int j, const FieldElem&) { support.emplace_back(i, j); });
    const FieldElem factors[] = {FieldElem(-1L), FieldElem(2L), FieldElem::rs(1, 0), FieldElem::rs(0, -1),
                                 FieldElem::rs(1, 1), FieldElem(mpq_class(1, 3))};
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    Tally<FieldElem> t;
    for (int m = 0; m < count; ++m) {
        const auto [i, j] = support[rng() % support.size()];
        const FieldElem& f = factors[rng() % std::size(factors)];
        FMatrix R = b.R;
        R.set(i, j, R.get(i, j) * f);
        const std::string tag = "mutation " + std::to_string(m + 1) + " at (" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ") x " + f.str();
        bool caught = false;
        for (const CheckOutcome& o : {braid(R, N), minimal_polynomial(R, n), skein(R, b.R_inv, b.K)})
            if (o.status == Status::fail && !o.witness.empty()) caught = true;
        t.expect(tag, caught, "not detected by braid, minimal polynomial or skein");
    }
    return t.outcome();
}

// ---------------------------------------------------------------------------
// Spectral R-matrices, in cleared form.

inline CheckOutcome qybe(const ClearedMatrix& cm, int N) {
    const auto P = lift_poly(flip_P<FieldElem>(N));
    auto A12 = embed3(cm.num, N, 1, 2);
    auto A13 = embed3(substitute_z(cm, z_times(0, 0, 1, 1)).num, N, 1, 3);
    auto A23 = embed3(substitute_z(cm, z_times(0, 0, 0, 1)).num, N, 2, 3);
    Tally<Poly> t;
    t.equal("R_hat12(z) R_hat13(zw) R_hat23(w) = R_hat23(w) R_hat13(zw) R_hat12(z)", A12 * A13 * A23, A23 * A13 * A12);
    // Braided form for R = P R_hat.
    ClearedMatrix Rz{cm.den, P * cm.num};
    auto B12 = embed3(Rz.num, N, 1, 2), B23z = embed3(Rz.num, N, 2, 3);
    auto B23y = embed3(substitute_z(Rz, z_times(0, 0, 0, 1)).num, N, 2, 3);
    auto B12y = embed3(substitute_z(Rz, z_times(0, 0, 0, 1)).num, N, 1, 2);
    auto B23zy = embed3(substitute_z(Rz, z_times(0, 0, 1, 1)).num, N, 2, 3);
    auto B12zy = embed3(substitute_z(Rz, z_times(0, 0, 1, 1)).num, N, 1, 2);
    t.equal("R12(z) R23(zw) R12(w) = R23(w) R12(zw) R23(z)", B12 * B23zy * B12y, B23y * B12zy * B23z);
    return t.outcome();
}

inline CheckOutcome R_at_one(const SpectralR& sr) {
    const int N = sr.scheme.N();
    Tally<FieldElem> t;
    t.equal("P R_hat(1) = I", flip_P<FieldElem>(N) * eval_z(sr.matrix, FieldElem(1L)), FMatrix::identity(N * N));
    return t.outcome();
}

// R(z) R(z^-1) = I for R = P R_hat, cross-multiplied.
inline CheckOutcome unitarity(const ClearedMatrix& cm, int N) {
    const auto P = lift_poly(flip_P<FieldElem>(N));
    ClearedMatrix Rz{cm.den, P * cm.num};
    ClearedMatrix Ri = substitute_z(Rz, z_times(0, 0, -1));
    const auto I = PMatrix::identity(N * N).scaled(Rz.den * Ri.den);
    Tally<Poly> t;
    t.equal("R(z) R(z^-1)", Rz.num * Ri.num, I);
    t.equal("R(z^-1) R(z)", Ri.num * Rz.num, I);
    return t.outcome();
}

// R_{r,s}(z) = P R_{1/r,1/s}(z^-1) P.
inline CheckOutcome symmetry(const ClearedMatrix& cm, int N) {
    const auto P = lift_poly(flip_P<FieldElem>(N));
    ClearedMatrix Rz{cm.den, P * cm.num};
    ClearedMatrix T = substitute_z(Rz, z_times(0, 0, -1));
    T.den = T.den.invert_uv();
    T.num = T.num.map<Poly>([](const Poly& p) { return p.invert_uv(); });
    Tally<Poly> t;
    t.equal("R(z) = P R(z^-1; 1/r, 1/s) P", Rz.num.scaled(T.den), (P * T.num * P).scaled(Rz.den));
    return t.outcome();
}

// Computed: R_hat(0) = r s^-1 R_hat and R_hat(inf) = r^-1 s P R^-1, for the
// closed form and for the Yang-Baxterized matrix alike.
inline CheckOutcome limits(const RBundle& b, const SpectralR& closed) {
    const int N = b.scheme.N();
    const auto P = flip_P<FieldElem>(N);
    const FMatrix at_zero = b.R_hat.scaled(q_half(-2)), at_inf = (P * b.R_inv).scaled(q_half(2));
    const ZMatrix yb = lift_z(P) * yang_baxterize(b.R_inv, b.lambda1, b.lambda2, b.lambda3, closed.variant);
    Tally<FieldElem> t;
    const FMatrix z0 = limit_zero(closed.matrix), zi = limit_infinity(closed.matrix);
    t.equal("closed form, z -> 0", z0, at_zero);
    t.equal("closed form, z -> inf", zi, at_inf);
    t.equal("Yang-Baxterized, z -> 0", limit_zero(yb), at_zero);
    t.equal("Yang-Baxterized, z -> inf", limit_infinity(yb), at_inf);
    CheckOutcome o = t.outcome();
    const bool literal0 = z0 == b.R_hat.scaled(q_half(2));
    const bool literal_inf = zi == invert(b.R_hat).scaled(q_half(-2));
    o.note = std::string("printed r^-1 s R_hat at 0: ") + (literal0 ? "holds" : "fails") +
             "; printed r s^-1 R_hat^-1 at inf: " + (literal_inf ? "holds" : "fails");
    return o;
}

// R_hat(z) C1 R_hat(xi z)^{t1} C1^-1 = (z - r^2 s^-2)(xi z - 1) / ((1 - z)(1 - r^2 s^-2 xi z)).
inline CheckOutcome crossing_affine(const RBundle& b, const ClearedMatrix& cm) {
    const int N = b.scheme.N(), n = b.scheme.n;
    const auto IN = FMatrix::identity(N);
    auto C1 = lift_poly(kron(b.C, IN)), C1i = lift_poly(kron(b.C_inv, IN));
    const int xe = 2 * (2 * n - 1);
    ClearedMatrix sx = substitute_z(cm, z_times(-xe, xe, 1));
    PMatrix X = cm.num * C1 * partial_transpose(sx.num, N, 1) * C1i;
    Poly z = poly_z(), one(1L), a = q_half_poly(-4), xi = q_half_poly(xe);
    Tally<Poly> t;
    t.equal("crossing scalar", X.scaled((one - z) * (one - a * xi * z)),
            PMatrix::identity(N * N).scaled((z - a) * (xi * z - one) * cm.den * sx.den));
    return t.outcome();
}

inline CheckOutcome yang_baxterize_matches(const RBundle& b, const SpectralR& closed) {
    const int N = b.scheme.N();
    ZMatrix yb = lift_z(flip_P<FieldElem>(N)) * yang_baxterize(b.R_inv, b.lambda1, b.lambda2, b.lambda3, closed.variant);
    Tally<RatZ<FieldElem>> t;
    t.equal(std::string("P yang_baxterize(R^-1) vs closed form (") + variant_name(closed.variant) + ")", yb, closed.matrix);
    return t.outcome();
}

// f(0) = 1 and f(z) f(xi z) prod (1 - a z) = 1 through order T, decided in
// Q(x), x = u^-1 v, from the stored coefficients; the infinite product is
// compared numerically at u = 2, v = 1 where |xi| < 1.
inline CheckOutcome f_series(int n, int T) {
    using detail::XFrac;
    TruncatedSeriesF f = build_f_series(n, T);
    Tally<FieldElem> t;
    t.expect("f_0 = 1", f.coeffs.at(0) == FieldElem(1L), "is " + f.coeffs.at(0).str());
    std::vector<XFrac> x;
    for (int k = 0; k <= T; ++k) {
        auto c = XFrac::from_field(f.coeffs[k]);
        if (!t.expect("f_" + std::to_string(k) + " is a function of r^-1 s", c.has_value(), f.coeffs[k].str())) return t.outcome();
        x.push_back(*c);
    }
    const int xe = 2 * (2 * n - 1);
    std::vector<XFrac> shifted(T + 1), h(T + 1);
    XFrac power = XFrac::monomial(0);
    for (int k = 0; k <= T; ++k) {
        shifted[k] = x[k] * power;
        power = power * XFrac::monomial(xe);
    }
    for (int a = 0; a <= T; ++a)
        for (int c = 0; a + c <= T; ++c) h[a + c] = h[a + c] + x[a] * shifted[c];
    for (int e : {4, -4, xe, -xe}) {
        const XFrac m = XFrac::monomial(e);
        for (int k = T; k >= 1; --k) h[k] = h[k] - m * h[k - 1];
    }
    h[0] = h[0] - XFrac::monomial(0);
    for (int k = 0; k <= T; ++k)
        t.expect("f(z) f(xi z) / RHS at z^" + std::to_string(k), h[k].is_zero(), "nonzero: " + h[k].to_field().str());

    Evaluator ev(SamplePoint{mpq_class(2), mpq_class(1)});
    auto product = f_product_numeric(n, T, 40, ev);
    Tally<NumericElem> nt;
    NMatrix lhs(1, T + 1), rhs(1, T + 1);
    for (int k = 0; k <= T; ++k) {
        lhs.set(0, k, ev(f.coeffs[k]));
        rhs.set(0, k, product[k]);
    }
    nt.equal("infinite product, 40 factors, at u = 2, v = 1", lhs, rhs);
    return merge({t.outcome(), nt.outcome()});
}

}  // namespace checks

// ---------------------------------------------------------------------------
// Intertwining of evaluation modules.

namespace checks {

struct IntertwiningData {
    PMatrix R;  // numerator of P R_hat(z/w); the common denominator cancels
    Poly den;
    PolyRep Tz, Tw;
};

inline IntertwiningData intertwining_data(const PolyRep& Tz, const ClearedMatrix& cm) {
    const int N = Tz.scheme.N();
    ClearedMatrix Rzw = substitute_z(cm, z_times(0, 0, 1, -1));
    return {lift_poly(flip_P<FieldElem>(N)) * Rzw.num, Rzw.den, Tz, respecialize(Tz, z_times(0, 0, 0, 1))};
}

inline std::vector<std::string> chevalley_generators(int n) {
    std::vector<std::string> out;
    for (int i = 0; i <= n; ++i)
        for (const auto& g : {gen::e(i), gen::f(i), gen::w(i), gen::wp(i)}) out.push_back(g);
    return out;
}

inline CheckOutcome intertwining(const PolyRep& Tz, const ClearedMatrix& cm) {
    IntertwiningData d = intertwining_data(Tz, cm);
    Tally<Poly> t;
    for (const auto& g : chevalley_generators(Tz.scheme.n))
        t.equal("R(z/w) (T_z (x) T_w)Delta(" + g + ") = (T_w (x) T_z)Delta(" + g + ") R(z/w)",
                d.R * coproduct_image(d.Tz, d.Tw, g), coproduct_image(d.Tw, d.Tz, g) * d.R);
    return t.outcome();
}

// The alternate variant must fail on v_{2'} (x) v_2 with e_0 while the
// standard one holds there; the witness column of both sides is recorded,
// and compared against the closed-form coefficients of the two sides.
inline CheckOutcome nonintertwining(const PolyRep& Tz, const ClearedMatrix& standard, const ClearedMatrix& alternate) {
    const IndexScheme sc = Tz.scheme;
    const int N = sc.N(), n = sc.n;
    const int col = (sc.prime(2) - 1) * N + (2 - 1);
    auto column = [&](const PMatrix& m) {
        std::vector<Poly> c(N * N);
        for (int r = 0; r < N * N; ++r) c[r] = m.get(r, col);
        return c;
    };
    auto sides = [&](const ClearedMatrix& cm) {
        IntertwiningData d = intertwining_data(Tz, cm);
        const std::string e0 = gen::e(0);
        return std::make_tuple(column(d.R * coproduct_image(d.Tz, d.Tw, e0)), column(coproduct_image(d.Tw, d.Tz, e0) * d.R), d.den);
    };
    Tally<Poly> t;
    {
        auto [lhs, rhs, den] = sides(standard);
        (void)den;
        bool equal = lhs == rhs;
        t.expect("standard variant equal on v_2' (x) v_2 with e_0", equal, "sides differ");
    }
    auto [lhs, rhs, den] = sides(alternate);
    t.expect("alternate variant differs on v_2' (x) v_2 with e_0", lhs != rhs, "sides agree");

    // r^2 a w [(z - w) v_1'(x)v_2' + (r^2 - s^2) z v_2'(x)v_1'] / (r^2 z - s^2 w) on the left; the
    // right carries [r^-2 s^2 z + xi w] / [r^2 s^-2 z + xi w] on v_1'(x)v_2'.
    Mono my;
    my.e[kY] = 1;
    const Poly z = poly_z(), w = Poly::from_terms({{my, mpq_class(1)}});
    const Poly r2 = Poly::monomial(4, 0), s2 = Poly::monomial(0, 4), a = -Poly::monomial(-1, -3);
    const Poly xi = Poly::monomial(-2 * (2 * n - 1), 2 * (2 * n - 1));
    const Poly d1 = r2 * z - s2 * w, up = Poly::monomial(-4, 4) * z + xi * w, down = Poly::monomial(4, -4) * z + xi * w;
    const int r12 = (sc.prime(1) - 1) * N + sc.prime(2) - 1, r21 = (sc.prime(2) - 1) * N + sc.prime(1) - 1;
    const Poly star = r2 * a * z * w * (r2 - s2) * (z - w + Poly::monomial(-4, 4) * (z - w) + Poly::monomial(4, -4) * z + w * xi);
    t.expect("left side on v_1' (x) v_2'", lhs[r12] * d1 == r2 * a * w * (z - w) * den, lhs[r12].str());
    t.expect("left side on v_2' (x) v_1'", lhs[r21] * d1 == r2 * a * w * (r2 - s2) * z * den, lhs[r21].str());
    t.expect("right side on v_1' (x) v_2'", rhs[r12] * d1 * down == r2 * a * w * (z - w) * up * den, rhs[r12].str());
    t.expect("right side on v_2' (x) v_1'", rhs[r21] * d1 * down == star * den, rhs[r21].str());

    CheckOutcome o = t.outcome();
    std::string rec = "coefficients times " + den.str() + ":";
    for (int r = 0; r < N * N; ++r)
        if (!lhs[r].is_zero() || !rhs[r].is_zero())
            rec += " v" + std::to_string(r / N + 1) + "(x)v" + std::to_string(r % N + 1) + " LHS [" + lhs[r].str() + "] RHS [" +
                   rhs[r].str() + "];";
    o.note = rec;
    return o;
}

// ---------------------------------------------------------------------------
// Small fixed examples for the quasi-determinant and the Gauss factors.

inline CheckOutcome quasideterminant_examples() {
    Tally<FieldElem> t;
    const FieldElem a = FieldElem::rs(1, 0), b = FieldElem::rs(0, 1), c = FieldElem::w(), d = FieldElem::rs(1, 0) + FieldElem::rs(0, 1);
    FMatrix X(2, 2);
    X.set(0, 0, a);
    X.set(0, 1, b);
    X.set(1, 0, c);
    X.set(1, 1, d);
    OperatorMatrix<FieldElem> op(X, 2, LRole::generic);
    FMatrix q22 = quasi_determinant(op, 2, 2);
    FMatrix expect(1, 1);
    expect.set(0, 0, d - c * a.inv() * b);
    t.equal("|X|_22 = d - c a^-1 b", q22, expect);

    // Block diagonal operator matrix: |X|_11 is the (1,1) block; F = E = I, K = L.
    const int N = 2;
    FMatrix D(N * 2, N * 2);
    D.set(0, 0, a);
    D.set(1, 1, b);
    D.set(2, 2, c);
    D.set(3, 3, d);
    D.set(0, 1, FieldElem(1L));
    OperatorMatrix<FieldElem> diag(D, 2, LRole::generic);
    t.equal("|diag|_11", quasi_determinant(diag, 1, 1), diag.block(1, 1));
    auto g = gauss_decompose(diag);
    t.equal("diagonal: F = I", g.F.flat(), FMatrix::identity(4));
    t.equal("diagonal: E = I", g.E.flat(), FMatrix::identity(4));
    t.equal("diagonal: K = L", g.K.flat(), D);

    FMatrix U = FMatrix::identity(4);
    U.set(0, 2, a);
    U.set(1, 3, b);
    U.set(0, 3, c);
    OperatorMatrix<FieldElem> up(U, 2, LRole::generic);
    auto h = gauss_decompose(up);
    t.equal("unit upper: F = I", h.F.flat(), FMatrix::identity(4));
    t.equal("unit upper: K = I", h.K.flat(), FMatrix::identity(4));
    t.equal("unit upper: E = L", h.E.flat(), U);
    return t.outcome();
}

}  // namespace checks

// ---------------------------------------------------------------------------
// Registry.

struct CheckSpec {
    std::string id;
    std::string paper_tag;
    std::function<CheckOutcome(Context&)> run;
};

namespace detail {

inline CheckOutcome pick(const std::vector<RelationReport>& reports, const std::string& id) {
    for (const auto& r : reports)
        if (r.id == id) return r.outcome;
    throw std::logic_error("relation report '" + id + "' was not produced");
}

inline CheckOutcome over_T1_reps(Context& cx, const std::function<CheckOutcome(const FieldRep&)>& f) {
    CheckOutcome a = f(cx.T1()), b = f(cx.T1_squared());
    return merge({a, b});
}

}  // namespace detail

inline const std::vector<CheckSpec>& registry() {
    static const std::vector<CheckSpec> specs = [] {
        std::vector<CheckSpec> s;
        auto add = [&](std::string id, std::string tag, std::function<CheckOutcome(Context&)> f) {
            s.push_back({std::move(id), std::move(tag), std::move(f)});
        };
        auto N = [](Context& cx) { return cx.scheme().N(); };

        // Constant R-matrix.
        add("rmat/R-inverse", "lemm Rinverse", [](Context& cx) { return checks::R_inverse(cx.basic()); });
        add("rmat/metric-C", "metric matrix", [](Context& cx) { return checks::metric_C(cx.basic()); });
        add("rmat/braid", "main theorem", [N](Context& cx) { return checks::braid(cx.basic().R, N(cx)); });
        add("rmat/minimal-polynomial", "lemma minimal polynomial",
            [](Context& cx) { return checks::minimal_polynomial(cx.basic().R, cx.n()); });
        add("rmat/projectors", "lemm decomp1/2/3", [](Context& cx) { return checks::projectors(cx.basic()); });
        add("rmat/skein", "cor R R-1", [](Context& cx) {
            const RBundle& b = cx.basic();
            return checks::skein(b.R, b.R_inv, b.K);
        });
        add("rmat/K-quasi-idempotent", "cor Kquasi", [](Context& cx) { return checks::K_quasi(cx.basic()); });
        add("rmat/KR", "equ KP", [](Context& cx) { return checks::KR(cx.basic()); });
        add("rmat/Kij", "cor Kij", [](Context& cx) { return checks::K_entries_and_sums(cx.basic()); });
        add("rmat/KR-cross", "cor KRcross", [](Context& cx) { return checks::KR_cross(cx.basic()); });
        add("rmat/bwm", "prop BWrep", [](Context& cx) { return checks::bwm(cx.basic()); });
        add("rmat/bwm-e-square", "equ ei ide", [](Context& cx) { return checks::bwm_e_square(cx.basic()); });
        add("rmat/crossing-finite", "equ crossing relation finite",
            [](Context& cx) { return checks::crossing_finite(cx.basic()); });
        add("rmat/mutation-sensitivity", "main theorem",
            [](Context& cx) { return checks::mutation_sensitivity(cx.basic(), cx.config().seed); });

        // Spectral R-matrices.
        for (Variant v : {Variant::standard, Variant::alternate}) {
            const std::string vn = variant_name(v);
            const std::string tag = v == Variant::standard ? "thm spectral Rz1" : "prop spectR2";
            add("rmat/qybe-" + vn, "spectral qybe", [v, N](Context& cx) { return checks::qybe(cx.cleared(v), N(cx)); });
            add("rmat/unitarity-" + vn, "unitary condition",
                [v, N](Context& cx) { return checks::unitarity(cx.cleared(v), N(cx)); });
            add("rmat/symmetry-" + vn, "Rz iden", [v, N](Context& cx) { return checks::symmetry(cx.cleared(v), N(cx)); });
            add("rmat/yang-baxterize-" + vn, tag,
                [v](Context& cx) { return checks::yang_baxterize_matches(cx.basic(), cx.spectral(v)); });
        }
        add("rmat/R-at-one", "R1", [](Context& cx) { return checks::R_at_one(cx.spectral(Variant::standard)); });
        add("rmat/limits", "rmk relation",
            [](Context& cx) { return checks::limits(cx.basic(), cx.spectral(Variant::standard)); });
        add("rmat/crossing-affine", "crossing symmetry lemma (sec. 5.3)",
            [](Context& cx) { return checks::crossing_affine(cx.basic(), cx.cleared(Variant::standard)); });
        add("rmat/f-series", "fz", [](Context& cx) { return checks::f_series(cx.n(), cx.config().series_order); });

        // Representations.
        for (int b = 1; b <= 5; ++b) {
            const std::string tag = "type B def (B" + std::to_string(b) + ")";
            add("reps/B" + std::to_string(b), tag, [b](Context& cx) {
                const auto J = finite_indices(cx.n());
                return merge({check_B_relation(cx.T1(), b, J), check_B_relation(cx.T1_squared(), b, J)});
            });
        }
        add("reps/evaluation-B", "lemm evamod", [](Context& cx) {
            std::vector<CheckOutcome> parts;
            for (int b = 1; b <= 5; ++b) parts.push_back(check_B_relation(cx.evaluation(), b, affine_indices(cx.n())));
            return merge(parts);
        });
        add("reps/evaluation-module", "lemm evamod", [](Context& cx) {
            CheckOutcome o = check_evaluation_relations(cx.evaluation());
            auto lit = literal_delta_failures(cx.evaluation());
            o.note = "relations T_z(w_i e_0) = (r^2 s^-2)^{delta_0i} T_z(e_0 w_i) read literally: " +
                     std::to_string(lit.size()) + " failing for i != 0";
            return o;
        });
        add("reps/structure-constants", "lemm vectrep aff", [](Context& cx) {
            const int n = cx.n();
            auto a = structure_constants(n), b = character_structure_constants(n);
            Tally<FieldElem> t;
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j)
                    t.expect("<w'_" + std::to_string(i) + ", w_" + std::to_string(j) + ">", a(i, j) == b(i, j),
                             "table " + a(i, j).str() + ", characters " + b(i, j).str());
            return t.outcome();
        });
        for (const char* d : {"D1", "D2", "D3", "D5", "D6", "D7", "D8", "D9"}) {
            const std::string key = d;
            add("reps/" + key, "def affine (" + key + ")", [key](Context& cx) { return cx.D_relations().at(key); });
        }
        add("reps/typeD-witness", "thm type D isoclass", [](Context&) {
            Tally<Cyclotomic> t;
            std::string displayed;
            for (int l = 2; l <= 5; ++l) {
                auto w = build_typeD_witness(l);
                CMatrix X = w.X, Y = w.Y, Xl = CMatrix::identity(l), Yl = Xl;
                for (int i = 0; i < l; ++i) {
                    Xl = Xl * X;
                    Yl = Yl * Y;
                }
                const std::string tag = "ell = " + std::to_string(l);
                t.equal(tag + ": XY = pYX", X * Y, (Y * X).scaled(w.p));
                t.equal(tag + ": X^ell = I", Xl, CMatrix::identity(l));
                t.equal(tag + ": Y^ell = I", Yl, CMatrix::identity(l));
                auto d = displayed_typeD_matrices(l);
                if (!((X * d.Y) == (d.Y * X).scaled(w.p))) displayed += (displayed.empty() ? "" : ", ") + std::to_string(l);
            }
            CheckOutcome o = t.outcome();
            o.note = "displayed corner entry fails XY = pYX for ell in {" + displayed + "}";
            return o;
        });

        // Lyndon basis and L-matrices, under T_1 and T_1 (x) T_1.
        add("lyndon/zeta", "def auto", [](Context& cx) { return check_zeta(cx.n()); });
        add("lyndon/B-table", "equ Bi i+1", [](Context& cx) { return check_B_examples(cx.n()); });
        add("lyndon/recurrence", "prop recurrence", [](Context& cx) {
            return detail::over_T1_reps(cx, [&](const FieldRep& r) { return check_recurrence(cx.n(), r); });
        });
        add("lyndon/relaL", "lemm relaL", [](Context& cx) {
            return detail::over_T1_reps(cx, [&](const FieldRep& r) { return check_relaL(cx.n(), r); });
        });
        add("lyndon/rll-finite", "$RLL$", [](Context& cx) {
            return detail::over_T1_reps(cx, [&](const FieldRep& r) { return check_rll_finite(cx.n(), r); });
        });
        add("lyndon/frt-consequences", "thm FRTISO", [](Context& cx) {
            return detail::over_T1_reps(cx, [&](const FieldRep& r) { return check_frt_consequences(cx.n(), r); });
        });
        add("appendix/expansions", "lemm sub eij e'ij", [](Context& cx) {
            return detail::over_T1_reps(cx, [&](const FieldRep& r) { return check_appendix(cx.n(), r); });
        });
        add("appendix/metric-condition", "thm metric", [](Context& cx) {
            return detail::over_T1_reps(cx, [&](const FieldRep& r) {
                return merge({check_metric(cx.n(), r, +1), check_metric(cx.n(), r, -1)});
            });
        });

        // RLL realization and Gaussian generators.
        add("rll/quasi-determinant", "Prop Gauss decomp", [](Context&) { return checks::quasideterminant_examples(); });
        add("rll/L-triangularity", "equ 5.4", [](Context& cx) { return check_L_triangularity(cx.n()); });
        add("rll/rll-plus", "equ 5.2", [](Context& cx) { return check_rll_spectral(cx.n(), LRole::plus); });
        add("rll/rll-mixed", "equ 5.3", [](Context& cx) {
            CheckOutcome o = check_rll_spectral(cx.n(), LRole::minus);
            o.note += "; level-0 degenerate";
            return o;
        });
        add("rll/metric-unnormalized", "equ metric", [](Context& cx) { return check_metric_unnormalized(cx.n()); });
        add("rll/metric-normalized", "equ metric",
            [](Context& cx) { return check_metric_normalized(cx.n(), cx.config().series_order); });
        add("rll/gauss", "Prop Gauss decomp", [](Context& cx) { return cx.gauss(); });
        for (const char* id : {"k-k", "k-k-mixed", "kn1-kn1-mixed"}) {
            const std::string full = std::string("thm-relations/") + id;
            add(full, "thm relations", [full](Context& cx) { return detail::pick(cx.k_relations(), full); });
        }
        for (const char* id : {"k-X-commute", "k-Xn-rs", "ki-Xi", "ki1-Xi", "kn-Xn", "kn1-Xn", "X-X-far", "Xi-Xi1", "Xi-Xi",
                               "Xn-Xn", "X-commutator", "serre-lower", "serre-upper", "serre-quartic"}) {
            const std::string full = std::string("thm-relations/") + id;
            add(full, "thm relations", [full](Context& cx) { return detail::pick(cx.thm_relations(), full); });
        }
        for (const char* id : {"d1", "d2", "omega-prime-x", "omega-x", "d3", "d4", "serre-lower", "serre-upper",
                               "serre-quartic"}) {
            const std::string full = std::string("drinfeld/") + id;
            add(full, "prop DrinfeldRel", [full](Context& cx) { return detail::pick(cx.drinfeld(), full); });
        }

        // Intertwiners between evaluation modules.
        add("intert", "prop intert",
            [](Context& cx) { return checks::intertwining(cx.evaluation(), cx.cleared(Variant::standard)); });
        add("nonintert", "prop nonintert", [](Context& cx) {
            return checks::nonintertwining(cx.evaluation(), cx.cleared(Variant::standard), cx.cleared(Variant::alternate));
        });
        return s;
    }();
    return specs;
}

// ---------------------------------------------------------------------------
// Selection, execution and reporting.

inline std::vector<std::string> split_globs(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    if (out.empty()) out.push_back("*");
    return out;
}

// A check is selected if any glob matches its id or its paper tag.
inline bool selected(const CheckSpec& c, const std::vector<std::string>& globs) {
    for (const auto& g : globs)
        if (fnmatch(g.c_str(), c.id.c_str(), 0) == 0 || fnmatch(g.c_str(), c.paper_tag.c_str(), 0) == 0) return true;
    return false;
}

struct CheckReport {
    std::string id;
    std::string paper_tag;
    CheckOutcome outcome;
    std::optional<double> runtime_ms;
};

inline CheckReport run_check(const CheckSpec& spec, Context& cx) {
    CheckReport r{spec.id, spec.paper_tag, {}, std::nullopt};
    const auto t0 = std::chrono::steady_clock::now();
    try {
        r.outcome = spec.run(cx);
    } catch (const std::exception& e) {
        r.outcome = CheckOutcome{};
        r.outcome.status = Status::fail;
        r.outcome.residual = "error";
        r.outcome.witness = std::string("exception: ") + e.what();
    }
    if (r.outcome.status == Status::fail && r.outcome.witness.empty()) r.outcome.witness = "failure without witness";
    if (cx.config().timing)
        r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline std::vector<CheckReport> run_suite(Context& cx) {
    const auto globs = split_globs(cx.config().checks);
    std::vector<const CheckSpec*> chosen;
    for (const auto& c : registry())
        if (selected(c, globs)) chosen.push_back(&c);
    std::vector<CheckReport> out(chosen.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < chosen.size();) out[i] = run_check(*chosen[i], cx);
    };
    const int jobs = std::min<int>(cx.config().jobs, static_cast<int>(std::max<std::size_t>(chosen.size(), 1)));
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

inline std::vector<CheckReport> run_suite(const Config& cfg) {
    Context cx(cfg);
    return run_suite(cx);
}

inline bool any_failed(const std::vector<CheckReport>& reports) {
    return std::any_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.outcome.status == Status::fail; });
}

inline nlohmann::ordered_json report_json(const Config& cfg, const std::vector<CheckReport>& reports) {
    nlohmann::ordered_json j;
    j["meta"] = {{"rank", cfg.rank}, {"backend", cfg.backend.str()}, {"seed", cfg.seed}, {"version", kVersion}};
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json c;
        c["id"] = r.id;
        c["paper_tag"] = r.paper_tag;
        c["status"] = status_name(r.outcome.status);
        c["residual"] = r.outcome.residual;
        c["witness"] = r.outcome.witness.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.outcome.witness);
        c["runtime_ms"] = r.runtime_ms ? nlohmann::ordered_json(*r.runtime_ms) : nlohmann::ordered_json(nullptr);
        c["comparisons"] = r.outcome.comparisons;
        if (!r.outcome.note.empty()) c["note"] = r.outcome.note;
        j["checks"].push_back(std::move(c));
    }
    return j;
}

// ---------------------------------------------------------------------------
// Artifact dumps: one file per object in the sparse ringmatrix format.

inline std::string dump_L_symbolic(const LMatrixSymbolic& L) {
    std::string out = "lmatrix " + std::to_string(L.scheme.N()) + "\n";
    for (const auto& [pos, e] : L.entries) {
        out += "entry " + std::to_string(pos.first) + " " + std::to_string(pos.second) + "\n";
        out += e.expr().str();
    }
    return out;
}

inline std::vector<std::string> dump_artifacts(Context& cx, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> written;
    auto put = [&](const std::string& name, const std::string& body) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
        f << body;
        written.push_back(name);
    };
    const RBundle& b = cx.basic();
    put("R.txt", b.R.dump());
    put("R_inv.txt", b.R_inv.dump());
    put("R_hat.txt", b.R_hat.dump());
    put("K.txt", b.K.dump());
    put("C.txt", b.C.dump());
    put("P_plus.txt", b.P_plus.dump());
    put("P_minus.txt", b.P_minus.dump());
    put("P_zero.txt", b.P_zero.dump());
    put("spectral_R_standard.txt", cx.spectral(Variant::standard).matrix.dump());
    put("spectral_R_alternate.txt", cx.spectral(Variant::alternate).matrix.dump());
    put("rep_T1.txt", cx.T1().dump());
    put("rep_evaluation.txt", cx.evaluation().dump());
    put("L_plus.txt", dump_L_symbolic(assemble_L_plus(cx.n())));
    put("L_minus.txt", dump_L_symbolic(assemble_L_minus(cx.n())));
    put("L_plus_T1.txt", evaluate_L(assemble_L_plus(cx.n()), cx.T1()).dump());
    put("L_minus_T1.txt", evaluate_L(assemble_L_minus(cx.n()), cx.T1()).dump());
    return written;
}

}  // namespace bqg
