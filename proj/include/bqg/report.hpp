// Uniform outcome of a verification: status, residual, witness.
#pragma once

#include "linalg.hpp"

#include <chrono>
#include <functional>
#include <optional>

namespace bqg {

enum class Status { pass, fail, skipped };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::skipped: return "skipped";
    }
    return "?";
}

struct CheckOutcome {
    Status status = Status::pass;
    std::string residual = "exact-zero";
    std::string witness;  // first offending item; always set on failure
    std::string note;     // e.g. "level-0 degenerate"
    long comparisons = 0;

    static CheckOutcome skipped(std::string why) {
        CheckOutcome o;
        o.status = Status::skipped;
        o.residual = "n/a";
        o.note = std::move(why);
        return o;
    }
};

// Accumulates matrix comparisons.  Exact rings record the first offending
// entry; NumericElem records the largest residual relative to the largest
// entry magnitude seen.
template <class T>
class Tally {
public:
    Tally() = default;
    explicit Tally(NumericElem tol) : tol_(tol) {}

    bool equal(const std::string& label, const RingMatrix<T>& a, const RingMatrix<T>& b) {
        ++count_;
        if (a.rows() != b.rows() || a.cols() != b.cols()) {
            fail(label + ": shape " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                 std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
            return false;
        }
        if constexpr (std::is_same_v<T, NumericElem>) {
            // Without an explicit tolerance, follow the lowest working
            // precision among the entries seen so far.
            auto probe = [&](int, int, const NumericElem& x) {
                const unsigned b = x.precision_bits();
                if (min_bits_ == 0 || b < min_bits_) min_bits_ = b;
            };
            a.for_each(probe);
            b.for_each(probe);
            const NumericElem tol = tol_ ? *tol_ : min_bits_ ? default_tolerance(min_bits_) : default_tolerance();
            NumericElem worst(0L, tol.precision_bits());
            int wi = -1, wj = -1;
            auto track_mag = [&](const NumericElem& x) {
                if (cmp(x.abs().value(), magnitude_.value()) > 0) magnitude_ = x.abs();
            };
            a.for_each([&](int, int, const NumericElem& x) { track_mag(x); });
            b.for_each([&](int, int, const NumericElem& x) { track_mag(x); });
            RingMatrix<T> d = a - b;
            d.for_each([&](int i, int j, const NumericElem& x) {
                if (cmp(x.abs().value(), worst.value()) > 0) {
                    worst = x.abs();
                    wi = i;
                    wj = j;
                }
            });
            if (cmp(worst.value(), max_residual_.value()) > 0) max_residual_ = worst;
            NumericElem scale = cmp(magnitude_.value(), NumericElem(1L).value()) > 0 ? magnitude_ : NumericElem(1L);
            if (wi >= 0 && !near(worst, NumericElem(0L), tol, scale)) {
                fail(label + ": entry (" + std::to_string(wi + 1) + "," + std::to_string(wj + 1) + ") residual " +
                     worst.str(6));
                return false;
            }
            return true;
        } else {
            if (a == b) return true;
            RingMatrix<T> d = a - b;
            std::string w;
            d.for_each([&](int i, int j, const T& x) {
                if (w.empty())
                    w = label + ": entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                        ") differs by " + x.str();
            });
            fail(w);
            return false;
        }
    }
    // Numeric only: widen the magnitude scale by the entries of m, e.g. the
    // individual terms of a sum that is then compared against zero.
    void observe(const RingMatrix<T>& m) {
        if constexpr (std::is_same_v<T, NumericElem>)
            m.for_each([&](int, int, const NumericElem& x) {
                if (cmp(x.abs().value(), magnitude_.value()) > 0) magnitude_ = x.abs();
            });
    }
    bool zero(const std::string& label, const RingMatrix<T>& a) { return equal(label, a, RingMatrix<T>(a.rows(), a.cols())); }
    bool expect(const std::string& label, bool ok, const std::string& detail = "") {
        ++count_;
        if (!ok) fail(label + (detail.empty() ? "" : ": " + detail));
        return ok;
    }

    bool ok() const { return witness_.empty(); }
    long count() const { return count_; }

    CheckOutcome outcome() const {
        CheckOutcome o;
        o.comparisons = count_;
        if constexpr (std::is_same_v<T, NumericElem>) {
            o.residual = max_residual_.str(6) + " (max entry " + magnitude_.str(6) + ")";
        }
        if (!witness_.empty()) {
            o.status = Status::fail;
            if constexpr (!std::is_same_v<T, NumericElem>) o.residual = "nonzero";
            o.witness = witness_;
        }
        return o;
    }

private:
    std::optional<NumericElem> tol_;
    unsigned min_bits_ = 0;  // 0 until a numeric entry is seen
    NumericElem max_residual_{0L};
    NumericElem magnitude_{0L};
    long count_ = 0;
    std::string witness_;

    void fail(const std::string& w) {
        if (witness_.empty()) witness_ = w;
    }
};

// Merge outcomes: fail dominates, counts add, first witness wins.
inline CheckOutcome merge(const std::vector<CheckOutcome>& parts) {
    CheckOutcome o;
    bool all_skipped = !parts.empty();
    for (const auto& p : parts) {
        o.comparisons += p.comparisons;
        if (p.status != Status::skipped) all_skipped = false;
        if (p.status == Status::fail && o.status != Status::fail) {
            o.status = Status::fail;
            o.residual = p.residual;
            o.witness = p.witness;
        } else if (o.status == Status::pass && p.residual != "exact-zero" && p.status == Status::pass) {
            o.residual = p.residual;
        }
        if (!p.note.empty() && o.note.find(p.note) == std::string::npos) o.note += (o.note.empty() ? "" : "; ") + p.note;
    }
    if (all_skipped) o.status = Status::skipped;
    return o;
}

}  // namespace bqg
