#pragma once

// Symmetric rational matrices stored as the lower triangle, the ambient
// vector space S^d of the whole library. The inner product is
// <A,B> = trace(A*B), so diagonal entries pair once and off-diagonal
// entries twice.

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcover/linalg.hpp"
#include "tcover/rational.hpp"

namespace tcover {

struct SymMat {
    int dim = 0;
    std::vector<Rat> tri;  // lower triangle, row-major: (i,j), j <= i

    SymMat() = default;
    explicit SymMat(int d) : dim(d), tri(static_cast<size_t>(d) * (d + 1) / 2, Rat(0)) {
        if (d < 1) throw std::invalid_argument("SymMat: dim must be >= 1");
    }

    static size_t tri_index(int i, int j) {
        if (j > i) std::swap(i, j);
        return static_cast<size_t>(i) * (i + 1) / 2 + j;
    }

    Rat& operator()(int i, int j) { return tri[tri_index(i, j)]; }
    const Rat& operator()(int i, int j) const { return tri[tri_index(i, j)]; }

    bool operator==(const SymMat& o) const { return dim == o.dim && tri == o.tri; }
    bool operator!=(const SymMat& o) const { return !(*this == o); }
    bool operator<(const SymMat& o) const {
        if (dim != o.dim) return dim < o.dim;
        for (size_t k = 0; k < tri.size(); ++k)
            if (tri[k] != o.tri[k]) return tri[k] < o.tri[k];
        return false;
    }

    bool is_zero() const {
        for (const Rat& x : tri)
            if (sgn(x) != 0) return false;
        return true;
    }

    Mat to_mat() const {
        Mat m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = (*this)(i, j);
        return m;
    }

    // Evaluates the quadratic form x^t A x for rational x.
    Rat eval(const Vec& x) const {
        if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("SymMat::eval: size mismatch");
        Rat s(0);
        for (int i = 0; i < dim; ++i) {
            if (sgn(x[i]) == 0) continue;
            s += (*this)(i, i) * x[i] * x[i];
            for (int j = 0; j < i; ++j)
                if (sgn(x[j]) != 0) s += 2 * (*this)(i, j) * x[i] * x[j];
        }
        return s;
    }

    Rat eval(const VecZ& x) const { return eval(to_rat(x)); }

    // x^t A y for rational x, y.
    Rat bilinear(const Vec& x, const Vec& y) const {
        if (static_cast<int>(x.size()) != dim || static_cast<int>(y.size()) != dim)
            throw std::invalid_argument("SymMat::bilinear: size mismatch");
        Rat s(0);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                if (sgn(x[i]) != 0 && sgn(y[j]) != 0) s += x[i] * (*this)(i, j) * y[j];
        return s;
    }

    Rat bilinear(const VecZ& x, const VecZ& y) const { return bilinear(to_rat(x), to_rat(y)); }

    // A*x as a vector.
    Vec apply(const Vec& x) const {
        if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("SymMat::apply: size mismatch");
        Vec y(dim, Rat(0));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                if (sgn(x[j]) != 0) y[i] += (*this)(i, j) * x[j];
        return y;
    }
};

inline SymMat operator+(const SymMat& a, const SymMat& b) {
    if (a.dim != b.dim) throw std::invalid_argument("SymMat +: dim mismatch");
    SymMat c(a.dim);
    for (size_t k = 0; k < a.tri.size(); ++k) c.tri[k] = a.tri[k] + b.tri[k];
    return c;
}

inline SymMat operator-(const SymMat& a, const SymMat& b) {
    if (a.dim != b.dim) throw std::invalid_argument("SymMat -: dim mismatch");
    SymMat c(a.dim);
    for (size_t k = 0; k < a.tri.size(); ++k) c.tri[k] = a.tri[k] - b.tri[k];
    return c;
}

inline SymMat operator*(const Rat& s, const SymMat& a) {
    SymMat c(a.dim);
    for (size_t k = 0; k < a.tri.size(); ++k) c.tri[k] = s * a.tri[k];
    return c;
}

// trace(A*B); the S^d inner product.
inline Rat inner(const SymMat& a, const SymMat& b) {
    if (a.dim != b.dim) throw std::invalid_argument("inner: dim mismatch");
    Rat s(0);
    size_t k = 0;
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j <= i; ++j, ++k) {
            if (sgn(a.tri[k]) == 0 || sgn(b.tri[k]) == 0) continue;
            s += (i == j ? 1 : 2) * a.tri[k] * b.tri[k];
        }
    return s;
}

// Primitive integer representative of the ray through m (positive scaling).
inline SymMat rational_normalize(const SymMat& m) {
    SymMat r = m;
    r.tri = vec_rational_normalize(m.tri);
    return r;
}

// Rank-one form v*v^t.
inline SymMat rank_one(const VecZ& v) {
    SymMat m(static_cast<int>(v.size()));
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j <= i; ++j) m(i, j) = Rat(v[i] * v[j]);
    return m;
}

inline Rat sym_det(const SymMat& m) { return mat_det(m.to_mat()); }

// ---- text format: first line "dim d", then d lines of the lower triangle ----

inline std::string format_symmat(const SymMat& m) {
    std::ostringstream os;
    os << "dim " << m.dim << "\n";
    for (int i = 0; i < m.dim; ++i) {
        for (int j = 0; j <= i; ++j) {
            if (j) os << ' ';
            os << rat_to_string(m(i, j));
        }
        os << "\n";
    }
    return os.str();
}

inline SymMat parse_symmat(std::istream& is) {
    std::string kw;
    int d = 0;
    if (!(is >> kw >> d) || kw != "dim" || d < 1)
        throw std::invalid_argument("parse_symmat: expected 'dim d' header");
    SymMat m(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) {
            std::string tok;
            if (!(is >> tok)) throw std::invalid_argument("parse_symmat: truncated matrix");
            m(i, j) = parse_rat(tok);
        }
    return m;
}

inline SymMat parse_symmat(const std::string& text) {
    std::istringstream is(text);
    return parse_symmat(is);
}

}  // namespace tcover
