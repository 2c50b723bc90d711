#pragma once

// Automorphism groups and isometries of positive definite forms by
// short-vector backtracking, invariant-form spaces of matrix groups,
// characteristic forms of cones, and the T-equivalence test for
// secondary cones.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "tcover/latenum.hpp"
#include "tcover/qform.hpp"
#include "tcover/secondary.hpp"
#include "tcover/subspace.hpp"

namespace tcover {

struct MatrixGroup {
    int dim = 0;
    std::vector<Unimodular> generators;
    std::vector<Unimodular> elements;  // the full group when enumerated

    size_t order() const { return elements.size(); }
};

namespace detail {

// All lattice vectors of the given exact Q-norm, including negatives.
inline std::vector<VecZ> norm_shell(const EllipsoidEnumerator& en, const Rat& norm) {
    std::vector<VecZ> shell;
    Vec origin(en.form().dim, Rat(0));
    for (const LatticePoint& p : en.enumerate(origin, norm, false))
        if (p.value == norm && !vecz_is_zero(p.v)) shell.push_back(p.v);
    return shell;
}

// Backtracking over column images: find integer U with U^t q1 U = q2,
// drawing column j from vectors of q1-norm (q2)_jj and pruning by the
// pairwise products. Calls sink on every solution; sink returns true to
// stop the search.
template <typename Sink>
inline void gram_search(const SymMat& q1, const SymMat& q2, Sink&& sink) {
    int d = q1.dim;
    EllipsoidEnumerator en(q1);
    std::vector<std::vector<VecZ>> cand(d);
    for (int j = 0; j < d; ++j) {
        cand[j] = norm_shell(en, q2(j, j));
        if (cand[j].empty()) return;
    }
    std::vector<VecZ> cols(d);
    bool stop = false;
    auto descend = [&](auto&& self, int j) -> void {
        if (stop) return;
        if (j == d) {
            if (sink(make_unimodular(cols))) stop = true;
            return;
        }
        for (const VecZ& v : cand[j]) {
            bool ok = true;
            for (int i = 0; i < j && ok; ++i)
                if (q1.bilinear(cols[i], v) != q2(i, j)) ok = false;
            if (!ok) continue;
            cols[j] = v;
            self(self, j + 1);
            if (stop) return;
        }
    };
    descend(descend, 0);
}

}  // namespace detail

// The full group {U : U^t Q U = Q}. Pairwise Gram matching makes every
// solution an exact automorphism, and det U = +-1 follows from
// det(U)^2 det(Q) = det(Q).
inline MatrixGroup automorphism_group(const SymMat& q) {
    if (definiteness(q).kind != Definiteness::PositiveDefinite)
        throw std::invalid_argument("automorphism_group: form is not positive definite");
    MatrixGroup g;
    g.dim = q.dim;
    detail::gram_search(q, q, [&](const Unimodular& u) {
        g.elements.push_back(u);
        return false;
    });
    std::sort(g.elements.begin(), g.elements.end());
    g.generators = g.elements;
    return g;
}

// Some A with A^t q1 A = q2, or absence: cheap invariants first, then the
// exhaustive column search over complete norm shells.
inline std::optional<Unimodular> isometry(const SymMat& q1, const SymMat& q2) {
    if (q1.dim != q2.dim) return std::nullopt;
    if (definiteness(q1).kind != Definiteness::PositiveDefinite ||
        definiteness(q2).kind != Definiteness::PositiveDefinite)
        throw std::invalid_argument("isometry: form is not positive definite");
    if (sym_det(q1) != sym_det(q2)) return std::nullopt;
    ShortestVectors s1 = shortest_vectors(q1);
    ShortestVectors s2 = shortest_vectors(q2);
    if (s1.lambda_sq != s2.lambda_sq || s1.vectors.size() != s2.vectors.size())
        return std::nullopt;
    std::optional<Unimodular> found;
    detail::gram_search(q1, q2, [&](const Unimodular& u) {
        found = u;
        return true;
    });
    return found;
}

// The space {Q : g^t Q g = Q for all generators g} as a subspace of S^d.
inline SubspaceT invariant_space(const MatrixGroup& g) {
    if (g.dim < 1) throw std::invalid_argument("invariant_space: empty group");
    SubspaceT full = full_space(g.dim);
    int m = full.dim();
    if (g.generators.empty()) return full;
    // Q = sum x_k A_k is invariant under g iff sum x_k (g^t A_k g - A_k) = 0,
    // one vector equation in S^d coordinates per generator.
    Mat sys(static_cast<int>(g.generators.size()) * m, m);
    int row0 = 0;
    for (const Unimodular& u : g.generators) {
        for (int k = 0; k < m; ++k) {
            SymMat img = transform(full.basis()[k], u) - full.basis()[k];
            Vec col = *full.coords_of(img);
            for (int c = 0; c < m; ++c) sys(row0 + c, k) = col[c];
        }
        row0 += m;
    }
    std::vector<Vec> kernel = nullspace(sys);
    if (kernel.empty()) throw std::logic_error("invariant_space: group fixes no nonzero form");
    std::vector<SymMat> basis;
    for (const Vec& x : kernel) basis.push_back(rational_normalize(full.from_coords(x)));
    return SubspaceT(g.dim, basis);
}

// Sum of the content-normalized extreme rays of a cone in T-coordinates,
// as a form. Equivariant: a unimodular map carrying one cone's rays onto
// another's carries the characteristic forms onto each other.
inline SymMat characteristic_form(const PolyCone& cone, const SubspaceT& t) {
    PolyCone c = cone;
    dual_description(c);
    if (c.rays.empty()) throw std::invalid_argument("characteristic_form: cone has no rays");
    SymMat sum(t.ambient());
    for (const Vec& r : c.rays) sum = sum + rational_normalize(t.from_coords(r));
    return sum;
}

namespace detail {

inline std::set<SymMat> normalized_ray_forms(const PolyCone& cone, const SubspaceT& t) {
    std::set<SymMat> out;
    for (const Vec& r : cone.rays) out.insert(rational_normalize(t.from_coords(r)));
    return out;
}

inline bool stabilizes_subspace(const Unimodular& u, const SubspaceT& t) {
    for (const SymMat& b : t.basis())
        if (!t.contains(transform(b, u))) return false;
    return true;
}

}  // namespace detail

// A unimodular C with C^t T C = T mapping sc1's cone onto sc2's, or
// absence. The candidates form the coset Aut(Q1) * A for any isometry A
// of the characteristic forms, so the loop over the automorphism group
// is exhaustive.
inline std::optional<Unimodular> t_equivalent(const SecondaryCone& sc1, const SecondaryCone& sc2,
                                              const SubspaceT& t) {
    if (sc1.T.ambient() != t.ambient() || sc2.T.ambient() != t.ambient() ||
        sc1.T.basis() != t.basis() || sc2.T.basis() != t.basis())
        throw std::invalid_argument("t_equivalent: cones are not over the given subspace");
    if (sc1.rigidity_index != sc2.rigidity_index) return std::nullopt;
    if (sc1.cone.rays.size() != sc2.cone.rays.size()) return std::nullopt;
    if (sc1.facet_records.size() != sc2.facet_records.size()) return std::nullopt;

    std::set<SymMat> rays1 = detail::normalized_ray_forms(sc1.cone, t);
    std::set<SymMat> rays2 = detail::normalized_ray_forms(sc2.cone, t);
    if (rays1 == rays2) return Unimodular(t.ambient());

    SymMat q1 = characteristic_form(sc1.cone, t);
    SymMat q2 = characteristic_form(sc2.cone, t);
    std::optional<Unimodular> a = isometry(q1, q2);
    if (!a) return std::nullopt;
    MatrixGroup aut = automorphism_group(q1);
    for (const Unimodular& b : aut.elements) {
        Unimodular c = uni_mul(b, *a);
        if (!detail::stabilizes_subspace(c, t)) continue;
        std::set<SymMat> image;
        for (const SymMat& r : rays1) image.insert(rational_normalize(transform(r, c)));
        if (image == rays2) return c;
    }
    return std::nullopt;
}

}  // namespace tcover
