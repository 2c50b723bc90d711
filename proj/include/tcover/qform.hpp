#pragma once

// Quadratic forms: definiteness classification by exact pivoted LDL,
// unimodular transforms, and the QForm wrapper that caches the
// classification of an immutable SymMat.

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tcover/linalg.hpp"
#include "tcover/symmat.hpp"

namespace tcover {

enum class Definiteness {
    PositiveDefinite,
    PositiveSemidefinite,  // singular, nontrivial kernel
    Indefinite,
};

struct DefinitenessResult {
    Definiteness kind = Definiteness::Indefinite;
    std::vector<Vec> kernel;  // rational kernel basis, only for the PSD case
};

// Exact LDL with symmetric pivoting. A symmetric matrix is PSD iff every
// zero diagonal entry comes with a zero row in the remaining block, and
// every Schur complement pivot is positive.
inline DefinitenessResult definiteness(const SymMat& q) {
    int n = q.dim;
    Mat A = q.to_mat();
    std::vector<bool> done(n, false);
    int pivots = 0;
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int i = 0; i < n; ++i) {
            if (done[i]) continue;
            int s = sgn(A(i, i));
            if (s < 0) return {Definiteness::Indefinite, {}};
            if (s > 0 && (best < 0 || A(i, i) > A(best, best))) best = i;
        }
        if (best < 0) break;  // no positive diagonal left
        done[best] = true;
        ++pivots;
        Rat inv = Rat(1) / A(best, best);
        for (int i = 0; i < n; ++i) {
            if (done[i] || sgn(A(i, best)) == 0) continue;
            Rat f = A(i, best) * inv;
            for (int j = 0; j < n; ++j)
                if (!done[j]) A(i, j) -= f * A(best, j);
        }
    }
    // Remaining block has an all-zero diagonal; PSD requires it to vanish.
    for (int i = 0; i < n; ++i) {
        if (done[i]) continue;
        for (int j = 0; j < n; ++j)
            if (!done[j] && sgn(A(i, j)) != 0) return {Definiteness::Indefinite, {}};
    }
    if (pivots == n) return {Definiteness::PositiveDefinite, {}};
    DefinitenessResult r;
    r.kind = Definiteness::PositiveSemidefinite;
    for (Vec& v : nullspace(q.to_mat())) r.kernel.push_back(vec_rational_normalize(v));
    return r;
}

inline bool is_positive_definite(const SymMat& q) {
    return definiteness(q).kind == Definiteness::PositiveDefinite;
}

// ---- unimodular transforms ----

struct Unimodular {
    int dim = 0;
    std::vector<Int> a;  // row-major integer matrix, |det| = 1

    Unimodular() = default;
    explicit Unimodular(int d) : dim(d), a(static_cast<size_t>(d) * d, Int(0)) {
        for (int i = 0; i < d; ++i) (*this)(i, i) = 1;
    }

    Int& operator()(int i, int j) { return a[static_cast<size_t>(i) * dim + j]; }
    const Int& operator()(int i, int j) const { return a[static_cast<size_t>(i) * dim + j]; }

    bool operator==(const Unimodular& o) const { return dim == o.dim && a == o.a; }
    bool operator<(const Unimodular& o) const {
        if (dim != o.dim) return dim < o.dim;
        return a < o.a;
    }

    Mat to_mat() const {
        Mat m(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) m(i, j) = Rat((*this)(i, j));
        return m;
    }

    VecZ apply(const VecZ& x) const {
        if (static_cast<int>(x.size()) != dim) throw std::invalid_argument("Unimodular::apply: size mismatch");
        VecZ y(dim, Int(0));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) y[i] += (*this)(i, j) * x[j];
        return y;
    }

    Unimodular inverse() const {
        std::optional<Mat> inv = mat_inverse(to_mat());
        if (!inv) throw std::logic_error("Unimodular::inverse: singular matrix");
        Unimodular u(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                const Rat& x = (*inv)(i, j);
                if (x.get_den() != 1) throw std::logic_error("Unimodular::inverse: non-integer inverse");
                u(i, j) = x.get_num();
            }
        return u;
    }
};

inline Unimodular make_unimodular(const std::vector<VecZ>& columns) {
    int d = static_cast<int>(columns.size());
    Unimodular u(d);
    for (int j = 0; j < d; ++j) {
        if (static_cast<int>(columns[j].size()) != d)
            throw std::invalid_argument("make_unimodular: column size mismatch");
        for (int i = 0; i < d; ++i) u(i, j) = columns[j][i];
    }
    Rat det = mat_det(u.to_mat());
    if (det != 1 && det != -1) throw std::invalid_argument("make_unimodular: determinant is not +-1");
    return u;
}

inline Unimodular uni_mul(const Unimodular& a, const Unimodular& b) {
    if (a.dim != b.dim) throw std::invalid_argument("uni_mul: dim mismatch");
    Unimodular c(a.dim);
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) {
            Int s(0);
            for (int k = 0; k < a.dim; ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

// U^t Q U: the GL_d(Z) action on forms.
inline SymMat transform(const SymMat& q, const Unimodular& u) {
    if (q.dim != u.dim) throw std::invalid_argument("transform: dim mismatch");
    Mat m = mat_mul(mat_transpose(u.to_mat()), mat_mul(q.to_mat(), u.to_mat()));
    SymMat r(q.dim);
    for (int i = 0; i < q.dim; ++i)
        for (int j = 0; j <= i; ++j) r(i, j) = m(i, j);
    return r;
}

// Immutable form with cached definiteness classification.
class QForm {
public:
    explicit QForm(SymMat m) : mat_(std::move(m)), def_(definiteness(mat_)) {}

    const SymMat& mat() const { return mat_; }
    int dim() const { return mat_.dim; }
    Definiteness kind() const { return def_.kind; }
    const std::vector<Vec>& kernel() const { return def_.kernel; }
    bool positive_definite() const { return def_.kind == Definiteness::PositiveDefinite; }

private:
    SymMat mat_;
    DefinitenessResult def_;
};

}  // namespace tcover
