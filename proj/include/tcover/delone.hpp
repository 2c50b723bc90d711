#pragma once

// Delone subdivisions of Z^d under a rational PD form Q, computed exactly.
//
// A cell is found by rotating an empty sphere: for a sphere through a point
// set F, the centers equidistant from F form an affine subspace; moving the
// center along a direction n in that subspace changes the quantity
// phi_u(t) = Q[u - c(t)] - r(t)^2 linearly in t for every lattice point u.
// The first u whose phi hits zero joins the sphere. All candidate points
// with a smaller parameter than a known candidate w0 lie inside the sphere
// through F and w0, so one exact ellipsoid enumeration bounds the search.
// The same primitive builds the initial cell (growing the affine dimension
// from a single point) and crosses a facet to the neighboring cell.
//
// Cells are stored up to translation, normalized so the lexicographically
// smallest vertex sits at the origin; breadth-first traversal over facet
// neighbors visits every translation class exactly once.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tcover/latenum.hpp"
#include "tcover/linalg.hpp"
#include "tcover/polycone.hpp"
#include "tcover/qform.hpp"
#include "tcover/symmat.hpp"

namespace tcover {

// ---- N-forms ----

// Barycentric coordinates of w in the affinely independent set V.
inline std::optional<Vec> barycentric(const std::vector<VecZ>& V, const VecZ& w) {
    if (V.empty()) throw std::invalid_argument("barycentric: empty V");
    int d = static_cast<int>(V[0].size());
    Mat sys(d + 1, static_cast<int>(V.size()));
    Vec rhs(d + 1);
    for (size_t j = 0; j < V.size(); ++j) {
        for (int i = 0; i < d; ++i) sys(i, static_cast<int>(j)) = Rat(V[j][i]);
        sys(d, static_cast<int>(j)) = 1;
    }
    for (int i = 0; i < d; ++i) rhs[i] = Rat(w[i]);
    rhs[d] = 1;
    return solve(sys, rhs);
}

inline bool affinely_independent(const std::vector<VecZ>& V) {
    if (V.empty()) return true;
    int d = static_cast<int>(V[0].size());
    Mat m(static_cast<int>(V.size()) - 1, d);
    for (size_t i = 1; i < V.size(); ++i)
        for (int j = 0; j < d; ++j) m(static_cast<int>(i) - 1, j) = Rat(V[i][j] - V[0][j]);
    return mat_rank(m) == static_cast<int>(V.size()) - 1;
}

struct NForm {
    SymMat matrix;
    std::vector<VecZ> V;
    VecZ w;
    Vec alpha;  // affine coefficients: w = sum alpha_v v, sum alpha_v = 1
};

// N_{V,w} = w w^t - sum_v alpha_v v v^t where w = sum alpha_v v is the
// affine combination. Requires V affinely independent and w in aff(V).
inline NForm nform(const std::vector<VecZ>& V, const VecZ& w) {
    if (!affinely_independent(V)) throw std::invalid_argument("nform: V is affinely dependent");
    std::optional<Vec> alpha = barycentric(V, w);
    if (!alpha) throw std::invalid_argument("nform: w is not in the affine hull of V");
    SymMat n = rank_one(w);
    for (size_t j = 0; j < V.size(); ++j)
        if (sgn((*alpha)[j]) != 0) n = n - (*alpha)[j] * rank_one(V[j]);
    return {std::move(n), V, w, std::move(*alpha)};
}

// ---- circumspheres ----

struct Sphere {
    Vec center;
    Rat radius_sq;
};

// The unique sphere through the affinely independent V with center in
// aff(V), with respect to the metric of the PD form q.
inline Sphere circumsphere(const SymMat& q, const std::vector<VecZ>& V) {
    if (V.empty()) throw std::invalid_argument("circumsphere: empty V");
    int d = q.dim;
    int k = static_cast<int>(V.size()) - 1;
    std::vector<Vec> diffs;
    for (int i = 1; i <= k; ++i) diffs.push_back(to_rat(vecz_sub(V[i], V[0])));
    Vec v0 = to_rat(V[0]);
    Mat sys(k, k);
    Vec rhs(k);
    for (int i = 0; i < k; ++i) {
        Vec qd = q.apply(diffs[i]);
        for (int j = 0; j < k; ++j) sys(i, j) = 2 * detail::dot(qd, diffs[j]);
        rhs[i] = q.eval(V[i + 1]) - q.eval(V[0]) - 2 * detail::dot(qd, v0);
    }
    std::optional<Vec> t = solve(sys, rhs);
    if (!t || mat_rank(sys) != k)
        throw std::invalid_argument("circumsphere: V is affinely dependent");
    Sphere s;
    s.center = v0;
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < d; ++j) s.center[j] += (*t)[i] * diffs[i][j];
    Vec dv(d);
    for (int j = 0; j < d; ++j) dv[j] = v0[j] - s.center[j];
    s.radius_sq = q.eval(dv);
    return s;
}

// Sign of <Q, N_{V,w}>: +1 when w is outside the circumsphere of V, 0 on
// it, -1 inside (Q[w - c] - r^2 has the same sign). Evaluating the N-form
// needs no circumsphere, so this works for indefinite Q as well.
inline int sphere_test(const SymMat& q, const std::vector<VecZ>& V, const VecZ& w) {
    return sgn(inner(q, nform(V, w).matrix));
}

// ---- subdivision data ----

struct DeloneCell {
    std::vector<VecZ> verts;  // sorted, lexicographically smallest vertex = 0
    Vec center;
    Rat radius_sq;
};

struct DeloneFacetRecord {
    int cell = -1;                   // owning cell class
    std::vector<int> facet_vertices; // indices into cells[cell].verts
    int neighbor = -1;               // neighbor cell class
    VecZ shift;                      // neighbor instance = cells[neighbor].verts + shift
    // Data for the secondary cone inequality <N_{V u {w}, w'}, Q> > 0:
    std::vector<VecZ> vsub;          // d affinely independent facet vertices
    VecZ w;                          // cell vertex off the facet
    VecZ wprime;                     // neighbor vertex off the facet (absolute)
};

struct DeloneSubdivision {
    SymMat q;
    std::vector<DeloneCell> cells;
    std::vector<DeloneFacetRecord> facets;
    bool is_triangulation = false;

    // Canonical identity of the subdivision: the sorted list of normalized
    // cell vertex lists. Equal keys mean equal subdivisions of Z^d.
    std::vector<std::vector<VecZ>> canonical_key() const {
        std::vector<std::vector<VecZ>> key;
        for (const DeloneCell& c : cells) key.push_back(c.verts);
        std::sort(key.begin(), key.end());
        return key;
    }
};

namespace detail {

inline std::pair<std::vector<VecZ>, VecZ> normalize_translate(std::vector<VecZ> pts) {
    std::sort(pts.begin(), pts.end());
    VecZ shift = pts[0];
    for (VecZ& p : pts) p = vecz_sub(p, shift);
    return {std::move(pts), std::move(shift)};
}

// Minimizing joiner of the rotating sphere family through `base` with
// current sphere (c, r2) and direction n. Returns the new sphere and its
// full lattice vertex set. Requires a candidate w0 with positive side
// value b = 2 n^t Q (w0 - base_pt).
struct RotationResult {
    Sphere sphere;
    std::vector<VecZ> verts;
};

inline RotationResult rotate_to_next(const EllipsoidEnumerator& enumerator, const Sphere& cur,
                                     const Vec& n, const Vec& base_pt, const VecZ& w0) {
    const SymMat& q = enumerator.form();
    int d = q.dim;
    Vec qn = q.apply(n);
    auto side = [&](const Vec& u) -> Rat {
        Rat b(0);
        for (int i = 0; i < d; ++i) b += qn[i] * (u[i] - base_pt[i]);
        return 2 * b;
    };
    auto excess = [&](const Vec& u) -> Rat {
        Vec dv(d);
        for (int i = 0; i < d; ++i) dv[i] = u[i] - cur.center[i];
        return q.eval(dv) - cur.radius_sq;
    };
    Vec w0r = to_rat(w0);
    Rat b0 = side(w0r);
    if (sgn(b0) <= 0) throw std::logic_error("rotate_to_next: candidate is not on the far side");
    Rat t0 = excess(w0r) / b0;
    Vec c0(d);
    for (int i = 0; i < d; ++i) c0[i] = cur.center[i] + t0 * n[i];
    Vec dv(d);
    for (int i = 0; i < d; ++i) dv[i] = base_pt[i] - c0[i];
    Rat rho0 = q.eval(dv);

    std::vector<LatticePoint> ball = enumerator.enumerate(c0, rho0, false);
    bool have = false;
    Rat tmin(0);
    for (const LatticePoint& p : ball) {
        Vec u = to_rat(p.v);
        Rat b = side(u);
        if (sgn(b) <= 0) continue;
        Rat t = excess(u) / b;
        if (!have || t < tmin) { have = true; tmin = t; }
    }
    if (!have) throw std::logic_error("rotate_to_next: no far-side candidate in bounding ball");

    RotationResult res;
    res.sphere.center.resize(d);
    for (int i = 0; i < d; ++i) res.sphere.center[i] = cur.center[i] + tmin * n[i];
    for (int i = 0; i < d; ++i) dv[i] = base_pt[i] - res.sphere.center[i];
    res.sphere.radius_sq = q.eval(dv);
    for (const LatticePoint& p : ball) {
        Vec u = to_rat(p.v);
        for (int i = 0; i < d; ++i) dv[i] = u[i] - res.sphere.center[i];
        if (q.eval(dv) == res.sphere.radius_sq) res.verts.push_back(p.v);
    }
    return res;
}

// A direction n with n^t Q (v - pts[0]) = 0 for all v in pts: the Q-normal
// space of the affine hull. Returns all basis vectors of that space.
inline std::vector<Vec> q_normal_space(const SymMat& q, const std::vector<VecZ>& pts) {
    int d = q.dim;
    int k = static_cast<int>(pts.size()) - 1;
    if (k <= 0) {
        std::vector<Vec> full;
        for (int i = 0; i < d; ++i) {
            Vec e(d, Rat(0));
            e[i] = 1;
            full.push_back(e);
        }
        return full;
    }
    Mat m(k, d);
    for (int i = 0; i < k; ++i) {
        Vec qd = q.apply(to_rat(vecz_sub(pts[i + 1], pts[0])));
        for (int j = 0; j < d; ++j) m(i, j) = qd[j];
    }
    return nullspace(m);
}

// Some lattice point strictly on the positive side of n through base, i.e.
// with n^t Q (w - base) > 0: shift base by a unit vector along sgn(Qn).
inline VecZ far_side_candidate(const SymMat& q, const Vec& n, const VecZ& base) {
    Vec qn = q.apply(n);
    for (int i = 0; i < q.dim; ++i) {
        if (sgn(qn[i]) == 0) continue;
        VecZ w = base;
        w[i] += sgn(qn[i]) > 0 ? 1 : -1;
        return w;
    }
    throw std::logic_error("far_side_candidate: Qn = 0 for nonzero n");
}

// Up to `want` affinely independent points of `pts`, scanning in order
// (so the selection is the lexicographically first one for sorted input).
inline std::vector<VecZ> greedy_affine_basis(const std::vector<VecZ>& pts, int want) {
    std::vector<VecZ> picked;
    for (const VecZ& p : pts) {
        if (static_cast<int>(picked.size()) == want) break;
        picked.push_back(p);
        if (!affinely_independent(picked)) picked.pop_back();
    }
    return picked;
}

inline std::vector<VecZ> affine_basis_exact(const std::vector<VecZ>& pts, int want) {
    std::vector<VecZ> picked = greedy_affine_basis(pts, want);
    if (static_cast<int>(picked.size()) != want)
        throw std::logic_error("affine_basis_exact: set has too small affine rank");
    return picked;
}

// Facets of the polytope conv(pts), via the homogenization cone over
// (1, v). Every input point must be a vertex (true for points on a
// sphere). Returns per facet the incident point indices.
inline std::vector<std::vector<int>> polytope_facets(const std::vector<VecZ>& pts) {
    int d = static_cast<int>(pts[0].size());
    std::vector<Vec> rays;
    for (const VecZ& p : pts) {
        Vec r(d + 1);
        r[0] = 1;
        for (int i = 0; i < d; ++i) r[i + 1] = Rat(p[i]);
        rays.push_back(std::move(r));
    }
    PolyCone cone = cone_from_v(d + 1, rays);
    std::map<Vec, int> ray_to_point;
    for (size_t i = 0; i < cone.rays.size(); ++i)
        ray_to_point[vec_rational_normalize(cone.rays[i])] = -1;
    std::vector<ConeFacet> cf = facets(cone);
    // Map the recomputed extreme rays back to input indices.
    std::map<Vec, int> input_index;
    for (size_t i = 0; i < rays.size(); ++i)
        input_index[vec_rational_normalize(rays[i])] = static_cast<int>(i);
    std::vector<int> ray_index(cone.rays.size(), -1);
    for (size_t i = 0; i < cone.rays.size(); ++i) {
        auto it = input_index.find(vec_rational_normalize(cone.rays[i]));
        if (it == input_index.end())
            throw std::logic_error("polytope_facets: hull ray is not an input point");
        ray_index[i] = it->second;
    }
    if (cone.rays.size() != rays.size())
        throw std::logic_error("polytope_facets: input point is not a vertex");
    std::vector<std::vector<int>> out;
    for (const ConeFacet& f : cf) {
        std::vector<int> idx;
        for (int r : f.ray_indices) idx.push_back(ray_index[r]);
        std::sort(idx.begin(), idx.end());
        out.push_back(std::move(idx));
    }
    return out;
}

}  // namespace detail

// Full-dimensional Delone polytope of Q containing the origin as a vertex,
// grown from the zero-radius sphere at 0 by repeated rotation.
inline DeloneCell initial_delone_cell(const EllipsoidEnumerator& enumerator) {
    const SymMat& q = enumerator.form();
    int d = q.dim;
    Sphere sphere{Vec(d, Rat(0)), Rat(0)};
    std::vector<VecZ> verts{VecZ(d, Int(0))};
    std::vector<VecZ> affbase = verts;
    while (static_cast<int>(affbase.size()) < d + 1) {
        std::vector<Vec> normals = detail::q_normal_space(q, affbase);
        const Vec n = vec_rational_normalize(normals.front());
        VecZ w0 = detail::far_side_candidate(q, n, affbase[0]);
        detail::RotationResult next =
            detail::rotate_to_next(enumerator, sphere, n, to_rat(affbase[0]), w0);
        sphere = next.sphere;
        verts = next.verts;
        affbase = detail::greedy_affine_basis(verts, d + 1);
    }
    DeloneCell cell;
    cell.verts = verts;
    cell.center = sphere.center;
    cell.radius_sq = sphere.radius_sq;
    return cell;
}

inline DeloneSubdivision delone_subdivision(const SymMat& q) {
    if (definiteness(q).kind != Definiteness::PositiveDefinite)
        throw std::invalid_argument("delone_subdivision: form is not positive definite");
    int d = q.dim;
    EllipsoidEnumerator enumerator(q);

    DeloneSubdivision sub;
    sub.q = q;

    std::map<std::vector<VecZ>, int> cell_index;
    std::map<std::vector<VecZ>, bool> facet_seen;

    auto add_cell = [&](const std::vector<VecZ>& verts_abs) -> int {
        auto [verts, shift] = detail::normalize_translate(verts_abs);
        auto it = cell_index.find(verts);
        if (it != cell_index.end()) return it->second;
        Sphere s = circumsphere(q, detail::affine_basis_exact(verts, d + 1));
        // Emptiness certificate: the sphere's lattice points are exactly
        // the vertex set.
        std::vector<LatticePoint> on = enumerator.enumerate(s.center, s.radius_sq, false);
        std::vector<VecZ> pts;
        for (const LatticePoint& p : on)
            if (p.value == s.radius_sq) pts.push_back(p.v);
        if (on.size() != pts.size() || pts != verts)
            throw std::logic_error("delone_subdivision: emptiness certificate failed");
        DeloneCell cell;
        cell.verts = verts;
        cell.center = s.center;
        cell.radius_sq = s.radius_sq;
        sub.cells.push_back(std::move(cell));
        int idx = static_cast<int>(sub.cells.size()) - 1;
        cell_index[sub.cells.back().verts] = idx;
        return idx;
    };

    DeloneCell first = initial_delone_cell(enumerator);
    std::vector<int> queue{add_cell(first.verts)};
    size_t head = 0;
    constexpr size_t kCellLimit = 1 << 20;

    while (head < queue.size()) {
        int ci = queue[head++];
        // Copy: sub.cells may reallocate while we append new cells.
        const DeloneCell cell = sub.cells[ci];
        std::vector<std::vector<int>> facet_sets = detail::polytope_facets(cell.verts);
        for (const std::vector<int>& fidx : facet_sets) {
            std::vector<VecZ> fverts;
            for (int i : fidx) fverts.push_back(cell.verts[i]);
            auto fkey = detail::normalize_translate(fverts).first;
            if (facet_seen.count(fkey)) continue;
            facet_seen[fkey] = true;

            // Rotate around the facet, away from this cell.
            std::vector<Vec> normals = detail::q_normal_space(q, fverts);
            if (normals.size() != 1)
                throw std::logic_error("delone_subdivision: facet normal space is not a line");
            Vec n = vec_rational_normalize(normals.front());
            VecZ wcell;  // cell vertex off the facet, lex-first
            for (const VecZ& v : cell.verts)
                if (std::find(fverts.begin(), fverts.end(), v) == fverts.end()) { wcell = v; break; }
            Vec qn = q.apply(n);
            Rat bw(0);
            for (int i = 0; i < d; ++i) bw += qn[i] * (Rat(wcell[i]) - Rat(fverts[0][i]));
            if (sgn(bw) == 0) throw std::logic_error("delone_subdivision: off-facet vertex on facet plane");
            if (sgn(bw) > 0)
                for (Rat& x : n) x = -x;
            VecZ w0 = detail::far_side_candidate(q, n, fverts[0]);
            detail::RotationResult next = detail::rotate_to_next(
                enumerator, Sphere{cell.center, cell.radius_sq}, n, to_rat(fverts[0]), w0);

            int nidx = -1;
            {
                auto [nverts, nshift] = detail::normalize_translate(next.verts);
                auto it = cell_index.find(nverts);
                if (it == cell_index.end()) {
                    nidx = add_cell(next.verts);
                    queue.push_back(nidx);
                    if (sub.cells.size() > kCellLimit)
                        throw std::runtime_error("delone_subdivision: cell class limit exceeded");
                } else {
                    nidx = it->second;
                }
            }

            DeloneFacetRecord rec;
            rec.cell = ci;
            rec.facet_vertices = fidx;
            rec.neighbor = nidx;
            {
                auto [nverts, nshift] = detail::normalize_translate(next.verts);
                rec.shift = nshift;
            }
            rec.vsub = detail::affine_basis_exact(fverts, d);
            rec.w = wcell;
            for (const VecZ& v : next.verts) {
                // next.verts is sorted, so this picks the lex-first vertex
                // of the neighbor that is off the facet.
                if (std::find(fverts.begin(), fverts.end(), v) == fverts.end()) {
                    rec.wprime = v;
                    break;
                }
            }
            sub.facets.push_back(std::move(rec));
        }
    }

    sub.is_triangulation = true;
    for (const DeloneCell& c : sub.cells)
        if (static_cast<int>(c.verts.size()) != d + 1) { sub.is_triangulation = false; break; }
    return sub;
}

// ---- covering quantities ----

// mu(Q): the maximum squared circumradius over the Delone cells.
inline Rat inhomogeneous_minimum(const DeloneSubdivision& sub) {
    if (sub.cells.empty()) throw std::invalid_argument("inhomogeneous_minimum: no cells");
    Rat mu = sub.cells[0].radius_sq;
    for (const DeloneCell& c : sub.cells) mu = std::max(mu, c.radius_sq);
    return mu;
}

inline Rat inhomogeneous_minimum(const SymMat& q) {
    return inhomogeneous_minimum(delone_subdivision(q));
}

// Volume of the unit ball in dimension d.
inline double unit_ball_volume(int d) {
    return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

struct CoveringDensity {
    Rat normalized_sq;  // mu(Q)^d / det(Q), the exact rational part of Theta^2
    double theta;       // sqrt(normalized_sq) * kappa_d
};

inline CoveringDensity covering_density(const DeloneSubdivision& sub) {
    int d = sub.q.dim;
    Rat mu = inhomogeneous_minimum(sub);
    Rat det = sym_det(sub.q);
    Rat mu_pow(1);
    for (int i = 0; i < d; ++i) mu_pow *= mu;
    CoveringDensity out;
    out.normalized_sq = mu_pow / det;
    out.theta = std::sqrt(rat_to_double(out.normalized_sq)) * unit_ball_volume(d);
    return out;
}

inline CoveringDensity covering_density(const SymMat& q) {
    return covering_density(delone_subdivision(q));
}

}  // namespace tcover
