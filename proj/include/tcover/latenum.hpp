#pragma once

// Exact lattice point enumeration (Fincke-Pohst) over rational PD forms.
// All interval bounds are derived through integer square roots, so the
// result is the exact set {v in Z^d : Q[v - c] <= r^2} with exact values.

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tcover/linalg.hpp"
#include "tcover/qform.hpp"
#include "tcover/symmat.hpp"

namespace tcover {

struct EllipsoidQuery {
    SymMat q;
    Vec center;
    Rat radius_sq;
    bool strict = false;  // true: Q[v - c] < r^2, false: <=
};

struct LatticePoint {
    VecZ v;
    Rat value;  // Q[v - center]
};

namespace detail {

// Q[x] = sum_i d[i] * (x_i + sum_{j>i} l(i,j) x_j)^2 with d[i] > 0.
struct Ldl {
    int n = 0;
    std::vector<Rat> d;
    Mat l;  // strictly upper entries used
};

inline Ldl ldl_decompose(const SymMat& q) {
    Ldl out;
    out.n = q.dim;
    out.d.assign(q.dim, Rat(0));
    out.l = Mat(q.dim, q.dim);
    Mat a = q.to_mat();
    for (int i = 0; i < q.dim; ++i) {
        if (sgn(a(i, i)) <= 0) throw std::invalid_argument("ldl_decompose: form is not positive definite");
        out.d[i] = a(i, i);
        for (int j = i + 1; j < q.dim; ++j) out.l(i, j) = a(i, j) / a(i, i);
        for (int r = i + 1; r < q.dim; ++r)
            for (int c = r; c < q.dim; ++c) {
                a(r, c) -= a(r, i) * out.l(i, c);
                if (c != r) a(c, r) = a(r, c);
            }
    }
    return out;
}

// Integer range [lo, hi] of x with (x - m)^2 <= bound; empty when bound < 0.
inline bool integer_interval(const Rat& m, const Rat& bound, Int& lo, Int& hi) {
    if (sgn(bound) < 0) return false;
    const Int& p = m.get_num();
    const Int& q = m.get_den();
    // (q x - p)^2 <= bound * q^2; the left side is an integer.
    Rat rhs = bound * Rat(q) * Rat(q);
    Int s = isqrt_floor(rat_floor(rhs));
    lo = rat_ceil(Rat(p - s) / Rat(q));
    hi = rat_floor(Rat(p + s) / Rat(q));
    return lo <= hi;
}

}  // namespace detail

// Reusable enumerator: the LDL of the form is computed once and shared by
// every query against it (the Delone traversal issues thousands).
class EllipsoidEnumerator {
public:
    explicit EllipsoidEnumerator(SymMat q) : q_(std::move(q)), ldl_(detail::ldl_decompose(q_)) {}

    const SymMat& form() const { return q_; }

    std::vector<LatticePoint> enumerate(const Vec& center, const Rat& radius_sq,
                                        bool strict = false) const {
        int n = q_.dim;
        if (static_cast<int>(center.size()) != n)
            throw std::invalid_argument("EllipsoidEnumerator: center size mismatch");
        std::vector<LatticePoint> out;
        if (sgn(radius_sq) < 0) return out;

        VecZ x(n, Int(0));
        Vec diff(n, Rat(0));  // x_j - c_j for fixed levels

        // Depth-first from the last coordinate; budget[i] is what remains
        // of r^2 after levels above i took their squared terms.
        std::vector<Rat> budget(n + 1, Rat(0));
        budget[n] = radius_sq;

        auto descend = [&](auto&& self, int level) -> void {
            if (level < 0) {
                Rat value = radius_sq - budget[0];
                if (strict && value == radius_sq) return;
                out.push_back({x, value});
                return;
            }
            Rat shift(0);  // sum_{j>level} l(level,j) (x_j - c_j)
            for (int j = level + 1; j < n; ++j)
                if (sgn(ldl_.l(level, j)) != 0) shift += ldl_.l(level, j) * diff[j];
            Rat m = center[level] - shift;
            Rat bound = budget[level + 1] / ldl_.d[level];
            Int lo, hi;
            if (!detail::integer_interval(m, bound, lo, hi)) return;
            for (Int xi = lo; xi <= hi; ++xi) {
                Rat t = Rat(xi) - m;
                budget[level] = budget[level + 1] - ldl_.d[level] * t * t;
                x[level] = xi;
                diff[level] = Rat(xi) - center[level];
                self(self, level - 1);
            }
        };
        descend(descend, n - 1);

        std::sort(out.begin(), out.end(),
                  [](const LatticePoint& a, const LatticePoint& b) { return a.v < b.v; });
        return out;
    }

private:
    SymMat q_;
    detail::Ldl ldl_;
};

inline std::vector<LatticePoint> enumerate_ellipsoid(const EllipsoidQuery& query) {
    return EllipsoidEnumerator(query.q).enumerate(query.center, query.radius_sq, query.strict);
}

struct ShortestVectors {
    Rat lambda_sq;              // min_{v != 0} Q[v]
    std::vector<VecZ> vectors;  // all v attaining it, both signs, lex order
};

inline ShortestVectors shortest_vectors(const SymMat& q) {
    Rat bound = q(0, 0);
    for (int i = 1; i < q.dim; ++i) bound = std::min(bound, q(i, i));
    EllipsoidQuery query{q, Vec(q.dim, Rat(0)), bound, false};
    std::vector<LatticePoint> pts = enumerate_ellipsoid(query);
    ShortestVectors out;
    out.lambda_sq = bound;
    for (const LatticePoint& p : pts) {
        if (vecz_is_zero(p.v)) continue;
        if (p.value < out.lambda_sq) out.lambda_sq = p.value;
    }
    for (const LatticePoint& p : pts)
        if (!vecz_is_zero(p.v) && p.value == out.lambda_sq) out.vectors.push_back(p.v);
    return out;
}

}  // namespace tcover
