#pragma once

// Dense exact linear algebra over Q, sized for the small systems this
// library solves (dimensions stay in the single digits, ray counts in the
// hundreds). Plain Gaussian elimination on mpq entries is exact and fast
// enough at that scale.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tcover/rational.hpp"

namespace tcover {

using Vec = std::vector<Rat>;
using VecZ = std::vector<Int>;

struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<Rat> a;  // row-major

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Rat(0)) {}

    Rat& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Rat& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

inline Mat mat_mul(const Mat& A, const Mat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("mat_mul: shape mismatch");
    Mat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const Rat& aik = A(i, k);
            if (sgn(aik) == 0) continue;
            for (int j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
        }
    return C;
}

inline Mat mat_transpose(const Mat& A) {
    Mat T(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
    return T;
}

inline Vec mat_apply(const Mat& A, const Vec& x) {
    if (A.cols != static_cast<int>(x.size())) throw std::invalid_argument("mat_apply: shape mismatch");
    Vec y(A.rows, Rat(0));
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j)
            if (sgn(A(i, j)) != 0) y[i] += A(i, j) * x[j];
    return y;
}

// In-place fraction-preserving Gauss-Jordan; returns pivot columns.
// After the call m is in reduced row echelon form.
inline std::vector<int> rref(Mat& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int p = -1;
        for (int i = row; i < m.rows; ++i)
            if (sgn(m(i, col)) != 0) { p = i; break; }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(row, j));
        Rat inv = Rat(1) / m(row, col);
        for (int j = col; j < m.cols; ++j) m(row, j) *= inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == row || sgn(m(i, col)) == 0) continue;
            Rat f = m(i, col);
            for (int j = col; j < m.cols; ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline int mat_rank(Mat m) { return static_cast<int>(rref(m).size()); }

// Basis of {x : Ax = 0}, one column vector per basis element.
inline std::vector<Vec> nullspace(Mat m) {
    std::vector<int> pivots = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (int free = 0; free < m.cols; ++free) {
        if (is_pivot[free]) continue;
        Vec v(m.cols, Rat(0));
        v[free] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(static_cast<int>(r), free);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solves Ax = b; empty optional when inconsistent. For underdetermined
// systems returns the solution with all free variables zero.
inline std::optional<Vec> solve(const Mat& A, const Vec& b) {
    if (A.rows != static_cast<int>(b.size())) throw std::invalid_argument("solve: shape mismatch");
    Mat aug(A.rows, A.cols + 1);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) aug(i, j) = A(i, j);
        aug(i, A.cols) = b[i];
    }
    std::vector<int> pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == A.cols) return std::nullopt;
    Vec x(A.cols, Rat(0));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(static_cast<int>(r), A.cols);
    return x;
}

inline Rat mat_det(Mat m) {
    if (m.rows != m.cols) throw std::invalid_argument("mat_det: not square");
    Rat det(1);
    for (int col = 0; col < m.cols; ++col) {
        int p = -1;
        for (int i = col; i < m.rows; ++i)
            if (sgn(m(i, col)) != 0) { p = i; break; }
        if (p < 0) return Rat(0);
        if (p != col) {
            for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        Rat inv = Rat(1) / m(col, col);
        for (int i = col + 1; i < m.rows; ++i) {
            if (sgn(m(i, col)) == 0) continue;
            Rat f = m(i, col) * inv;
            for (int j = col; j < m.cols; ++j) m(i, j) -= f * m(col, j);
        }
    }
    return det;
}

inline std::optional<Mat> mat_inverse(const Mat& A) {
    if (A.rows != A.cols) throw std::invalid_argument("mat_inverse: not square");
    int n = A.rows;
    Mat aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug(i, j) = A(i, j);
        aug(i, n + i) = 1;
    }
    std::vector<int> pivots = rref(aug);
    if (static_cast<int>(pivots.size()) != n || pivots.back() != n - 1) return std::nullopt;
    Mat inv(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

// ---- integer vector helpers (lattice points) ----

inline Vec to_rat(const VecZ& v) {
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
    return r;
}

inline VecZ vecz_sub(const VecZ& a, const VecZ& b) {
    VecZ r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline VecZ vecz_add(const VecZ& a, const VecZ& b) {
    VecZ r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline bool vecz_is_zero(const VecZ& a) {
    for (const Int& x : a)
        if (sgn(x) != 0) return false;
    return true;
}

// Divides a rational vector by the gcd of its entries (times the lcm of
// denominators), yielding the primitive integer vector in the same
// direction. Zero vectors are returned unchanged.
inline Vec vec_rational_normalize(const Vec& v) {
    Int lcm_den(1), gcd_num(0);
    for (const Rat& x : v) {
        if (sgn(x) == 0) continue;
        Int l;
        mpz_lcm(l.get_mpz_t(), lcm_den.get_mpz_t(), x.get_den_mpz_t());
        lcm_den = l;
        Int g;
        mpz_gcd(g.get_mpz_t(), gcd_num.get_mpz_t(), x.get_num_mpz_t());
        gcd_num = g;
    }
    if (sgn(gcd_num) == 0) return v;
    Rat scale = Rat(lcm_den) / Rat(gcd_num);
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = v[i] * scale;
    return r;
}

}  // namespace tcover
