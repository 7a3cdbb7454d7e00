// Sparse matrices over an abstract coefficient ring and the tensor-index
// bookkeeping used throughout (IndexScheme, Kronecker products, flips and
// partial transposes).
#pragma once

#include "coeff.hpp"

#include <functional>
#include <ostream>
#include <sstream>

namespace bqg {

// Index conventions for V = K^{2n+1}: i' = 2n+2-i, 2*rho_i = 2n+1-2i for
// i <= n, rho_{n+1} = 0, rho_{i'} = -rho_i.  All indices are 1-based.
struct IndexScheme {
    int n;
    explicit IndexScheme(int rank) : n(rank) {
        if (rank < 2) throw std::invalid_argument("IndexScheme: rank must be >= 2");
    }
    int N() const { return 2 * n + 1; }
    int prime(int i) const { return 2 * n + 2 - i; }
    int rho2(int i) const {
        if (i <= n) return 2 * n + 1 - 2 * i;
        if (i == n + 1) return 0;
        return -rho2(prime(i));
    }
    bool is_fixed(int i) const { return i == n + 1; }
    // Basis index of v_i (x) v_j in V (x) V, 0-based.
    int pair(int i, int j) const { return (i - 1) * N() + (j - 1); }
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SingularMatrix : std::domain_error {
    int row, col;
    SingularMatrix(const std::string& what, int r, int c) : std::domain_error(what), row(r), col(c) {}
};

template <class T>
struct RingTraits {
    static const char* name() { return "ring"; }
    static std::size_t weight(const T&) { return 1; }
};
template <>
struct RingTraits<FieldElem> {
    static const char* name() { return "field"; }
    static std::size_t weight(const FieldElem& x) { return x.weight(); }
};
template <>
struct RingTraits<Poly> {
    static const char* name() { return "laurent"; }
    static std::size_t weight(const Poly& x) { return x.size(); }
};
template <>
struct RingTraits<NumericElem> {
    static const char* name() { return "numeric"; }
    static std::size_t weight(const NumericElem&) { return 1; }
};
template <>
struct RingTraits<RatZ<FieldElem>> {
    static const char* name() { return "ratz"; }
    static std::size_t weight(const RatZ<FieldElem>& x) {
        std::size_t w = 0;
        for (const auto& c : x.num().coeffs()) w += c.weight();
        for (const auto& c : x.den().coeffs()) w += c.weight();
        return w;
    }
};

template <class T>
class RingMatrix {
public:
    using Entry = std::pair<int, T>;  // column, value
    using Row = std::vector<Entry>;   // sorted by column, no zeros

    RingMatrix() = default;
    RingMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {
        if (rows < 0 || cols < 0) throw DimensionMismatch("RingMatrix: negative dimension");
    }

    static RingMatrix identity(int n) {
        RingMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.data_[i].push_back({i, T(1L)});
        return m;
    }
    // Matrix unit E_{ij} (1-based) of size n.
    static RingMatrix unit(int i, int j, int n) {
        RingMatrix m(n, n);
        m.set(i - 1, j - 1, T(1L));
        return m;
    }
    static RingMatrix diagonal(const std::vector<T>& d) {
        RingMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (std::size_t i = 0; i < d.size(); ++i)
            if (!d[i].is_zero()) m.data_[i].push_back({static_cast<int>(i), d[i]});
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const Row& row(int i) const { return data_[i]; }
    std::size_t nnz() const {
        std::size_t k = 0;
        for (const auto& r : data_) k += r.size();
        return k;
    }
    bool is_zero() const {
        for (const auto& r : data_)
            if (!r.empty()) return false;
        return true;
    }

    // 0-based access.
    T get(int i, int j) const {
        const Row& r = data_[i];
        auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, int c) { return e.first < c; });
        if (it != r.end() && it->first == j) return it->second;
        return T(0L);
    }
    void set(int i, int j, const T& v) {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DimensionMismatch("RingMatrix::set: index out of range");
        Row& r = data_[i];
        auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, int c) { return e.first < c; });
        if (it != r.end() && it->first == j) {
            if (v.is_zero()) r.erase(it);
            else it->second = v;
        } else if (!v.is_zero()) {
            r.insert(it, {j, v});
        }
    }
    void add_to(int i, int j, const T& v) {
        if (v.is_zero()) return;
        set(i, j, get(i, j) + v);
    }
    // 1-based convenience.
    T at(int i, int j) const { return get(i - 1, j - 1); }

    friend bool operator==(const RingMatrix& a, const RingMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    template <class F>
    void for_each(F&& f) const {
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) f(i, j, v);
    }

    template <class U, class F>
    RingMatrix<U> map(F&& f) const {
        RingMatrix<U> out(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) out.set(i, j, f(v));
        return out;
    }

    RingMatrix operator-() const {
        RingMatrix r = *this;
        for (auto& row : r.data_)
            for (auto& e : row) e.second = -e.second;
        return r;
    }
    friend RingMatrix operator+(const RingMatrix& a, const RingMatrix& b) { return combine(a, b, false); }
    friend RingMatrix operator-(const RingMatrix& a, const RingMatrix& b) { return combine(a, b, true); }
    RingMatrix& operator+=(const RingMatrix& b) { return *this = *this + b; }
    RingMatrix& operator-=(const RingMatrix& b) { return *this = *this - b; }

    friend RingMatrix operator*(const RingMatrix& a, const RingMatrix& b) {
        if (a.cols_ != b.rows_)
            throw DimensionMismatch("matmul: " + std::to_string(a.rows_) + "x" + std::to_string(a.cols_) + " times " +
                                    std::to_string(b.rows_) + "x" + std::to_string(b.cols_));
        RingMatrix c(a.rows_, b.cols_);
        std::vector<T> acc(b.cols_, T(0L));
        std::vector<char> touched(b.cols_, 0);
        std::vector<int> list;
        for (int i = 0; i < a.rows_; ++i) {
            list.clear();
            for (const auto& [k, av] : a.data_[i])
                for (const auto& [j, bv] : b.data_[k]) {
                    if (!touched[j]) {
                        touched[j] = 1;
                        list.push_back(j);
                        acc[j] = av * bv;
                    } else {
                        acc[j] += av * bv;
                    }
                }
            std::sort(list.begin(), list.end());
            Row& out = c.data_[i];
            for (int j : list) {
                if (!acc[j].is_zero()) out.push_back({j, std::move(acc[j])});
                acc[j] = T(0L);
                touched[j] = 0;
            }
        }
        return c;
    }
    RingMatrix& operator*=(const RingMatrix& b) { return *this = *this * b; }

    RingMatrix scaled(const T& s) const {
        if (s.is_zero()) return RingMatrix(rows_, cols_);
        RingMatrix r(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) {
                T x = v * s;
                if (!x.is_zero()) r.data_[i].push_back({j, std::move(x)});
            }
        return r;
    }
    friend RingMatrix operator*(const T& s, const RingMatrix& a) { return a.scaled(s); }

    RingMatrix transpose() const {
        RingMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) t.data_[j].push_back({i, v});
        return t;
    }

    // Human-readable dump in the fixed sparse format (1-based indices).
    std::string dump(const std::string& ring = RingTraits<T>::name()) const {
        std::ostringstream os;
        os << "ringmatrix " << rows_ << " " << cols_ << " " << ring << "\n";
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) os << (i + 1) << " " << (j + 1) << " " << v.str() << "\n";
        return os.str();
    }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Row> data_;

    static RingMatrix combine(const RingMatrix& a, const RingMatrix& b, bool subtract) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("add: shape mismatch");
        RingMatrix c(a.rows_, a.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            const Row &x = a.data_[i], &y = b.data_[i];
            Row& out = c.data_[i];
            auto p = x.begin(), q = y.begin();
            while (p != x.end() || q != y.end()) {
                if (q == y.end() || (p != x.end() && p->first < q->first)) {
                    out.push_back(*p++);
                } else if (p == x.end() || q->first < p->first) {
                    out.push_back({q->first, subtract ? T(-q->second) : q->second});
                    ++q;
                } else {
                    T v = subtract ? T(p->second - q->second) : T(p->second + q->second);
                    if (!v.is_zero()) out.push_back({p->first, std::move(v)});
                    ++p;
                    ++q;
                }
            }
        }
        return c;
    }
};

template <class T>
RingMatrix<T> kron(const RingMatrix<T>& a, const RingMatrix<T>& b) {
    RingMatrix<T> c(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (const auto& [j, av] : a.row(i))
            for (int k = 0; k < b.rows(); ++k)
                for (const auto& [l, bv] : b.row(k)) c.set(i * b.rows() + k, j * b.cols() + l, av * bv);
    return c;
}

// Flip P on V (x) V with dim V = N: P(x (x) y) = y (x) x.
template <class T>
RingMatrix<T> flip_P(int N) {
    RingMatrix<T> p(N * N, N * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) p.set(j * N + i, i * N + j, T(1L));
    return p;
}

// Transpose on a single tensor leg of an (N*N)x(N*N) matrix.
template <class T>
RingMatrix<T> partial_transpose(const RingMatrix<T>& a, int N, int leg) {
    if (a.rows() != N * N || a.cols() != N * N) throw DimensionMismatch("partial_transpose: size must be N^2 x N^2");
    if (leg != 1 && leg != 2) throw std::invalid_argument("partial_transpose: leg must be 1 or 2");
    RingMatrix<T> out(N * N, N * N);
    a.for_each([&](int row, int col, const T& v) {
        int i = row / N, k = row % N, j = col / N, l = col % N;
        if (leg == 1) std::swap(i, j);
        else std::swap(k, l);
        out.set(i * N + k, j * N + l, v);
    });
    return out;
}

// Embed an operator on V (x) V into V^{(x)3} on legs (1,2), (2,3) or (1,3).
template <class T>
RingMatrix<T> embed3(const RingMatrix<T>& a, int N, int legA, int legB) {
    RingMatrix<T> out(N * N * N, N * N * N);
    auto idx = [N](int x, int y, int z) { return (x * N + y) * N + z; };
    a.for_each([&](int row, int col, const T& v) {
        int i = row / N, k = row % N, j = col / N, l = col % N;
        for (int o = 0; o < N; ++o) {
            std::array<int, 3> r{}, c{};
            int other = 6 - legA - legB;  // the remaining leg of {1, 2, 3}
            r[legA - 1] = i;
            r[legB - 1] = k;
            r[other - 1] = o;
            c[legA - 1] = j;
            c[legB - 1] = l;
            c[other - 1] = o;
            out.set(idx(r[0], r[1], r[2]), idx(c[0], c[1], c[2]), v);
        }
    });
    return out;
}

template <class T>
RingMatrix<T> apply_poly(const std::vector<T>& coeffs_low_to_high, const RingMatrix<T>& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("apply_poly: square matrix required");
    RingMatrix<T> acc(a.rows(), a.cols());
    auto id = RingMatrix<T>::identity(a.rows());
    for (auto it = coeffs_low_to_high.rbegin(); it != coeffs_low_to_high.rend(); ++it)
        acc = acc * a + id.scaled(*it);
    return acc;
}

namespace detail {

template <class T>
std::size_t pivot_cost(const T& x) {
    return RingTraits<T>::weight(x);
}

// Dense working copy for elimination.
template <class T>
std::vector<std::vector<T>> dense(const RingMatrix<T>& a) {
    std::vector<std::vector<T>> d(a.rows(), std::vector<T>(a.cols(), T(0L)));
    a.for_each([&](int i, int j, const T& v) { d[i][j] = v; });
    return d;
}

template <class T>
bool better_pivot(const T& cand, const T& best) {
    if constexpr (std::is_same_v<T, NumericElem>) {
        return cmp(cand.abs().value(), best.abs().value()) > 0;
    } else {
        return pivot_cost(cand) < pivot_cost(best);
    }
}

template <class T>
bool negligible(const T& x) {
    return x.is_zero();
}

}  // namespace detail

// Exact inverse over a field by Gauss-Jordan elimination with full pivoting
// on the structurally smallest entry (largest magnitude for numeric input).
template <class T>
RingMatrix<T> invert(const RingMatrix<T>& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("invert: square matrix required");
    const int n = a.rows();
    auto m = detail::dense(a);
    std::vector<std::vector<T>> inv(n, std::vector<T>(n, T(0L)));
    for (int i = 0; i < n; ++i) inv[i][i] = T(1L);
    std::vector<int> colperm(n);
    for (int i = 0; i < n; ++i) colperm[i] = i;
    for (int k = 0; k < n; ++k) {
        int pr = -1, pc = -1;
        for (int i = k; i < n; ++i)
            for (int j = k; j < n; ++j)
                if (!m[i][j].is_zero() && (pr < 0 || detail::better_pivot(m[i][j], m[pr][pc]))) {
                    pr = i;
                    pc = j;
                }
        if (pr < 0)
            throw SingularMatrix("invert: singular matrix, elimination failed at pivot step " + std::to_string(k + 1) +
                                     " (row " + std::to_string(k + 1) + ", col " + std::to_string(colperm[k] + 1) + ")",
                                 k + 1, colperm[k] + 1);
        std::swap(m[k], m[pr]);
        std::swap(inv[k], inv[pr]);
        if (pc != k) {
            for (int i = 0; i < n; ++i) std::swap(m[i][k], m[i][pc]);
            std::swap(colperm[k], colperm[pc]);
        }
        T ip = T(1L) / m[k][k];
        for (int j = 0; j < n; ++j) {
            if (!m[k][j].is_zero()) m[k][j] = m[k][j] * ip;
            if (!inv[k][j].is_zero()) inv[k][j] = inv[k][j] * ip;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k || m[i][k].is_zero()) continue;
            T f = m[i][k];
            for (int j = 0; j < n; ++j) {
                if (!m[k][j].is_zero()) m[i][j] = m[i][j] - f * m[k][j];
                if (!inv[k][j].is_zero()) inv[i][j] = inv[i][j] - f * inv[k][j];
            }
        }
    }
    // Row k of `inv` now holds row colperm[k] of the true inverse.
    RingMatrix<T> out(n, n);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            if (!inv[k][j].is_zero()) out.set(colperm[k], j, inv[k][j]);
    return out;
}

// Rank by elimination over a field.  For numeric input entries below
// `tol * scale` are treated as zero.
template <class T>
int rank(const RingMatrix<T>& a) {
    auto m = detail::dense(a);
    int rows = a.rows(), cols = a.cols(), r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int p = -1;
        for (int i = r; i < rows; ++i)
            if (!m[i][c].is_zero() && (p < 0 || detail::better_pivot(m[i][c], m[p][c]))) p = i;
        if (p < 0) continue;
        std::swap(m[r], m[p]);
        T ip = T(1L) / m[r][c];
        for (int i = r + 1; i < rows; ++i) {
            if (m[i][c].is_zero()) continue;
            T f = m[i][c] * ip;
            for (int j = c; j < cols; ++j)
                if (!m[r][j].is_zero()) m[i][j] = m[i][j] - f * m[r][j];
        }
        ++r;
    }
    return r;
}

// Convenience: matrices over FieldElem built from (r, s)-monomials.
using FMatrix = RingMatrix<FieldElem>;
using PMatrix = RingMatrix<Poly>;
using NMatrix = RingMatrix<NumericElem>;
using ZMatrix = RingMatrix<RatZ<FieldElem>>;

inline FMatrix to_field(const PMatrix& m) {
    return m.map<FieldElem>([](const Poly& p) { return FieldElem(p); });
}

}  // namespace bqg
