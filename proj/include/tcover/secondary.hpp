#pragma once

// T-secondary cones of Delone subdivisions and T-flips across their
// facets. The cone of a subdivision D in T-coordinates collects one
// equality per extra vertex of each non-simplicial cell and one
// inequality per wall class; a flip replaces, inside each repartitioning
// polytope of a cone facet, the lower-hull cells of the lifted vertex set
// by the upper-hull cells.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tcover/delone.hpp"
#include "tcover/polycone.hpp"
#include "tcover/subspace.hpp"

namespace tcover {

// One facet of a T-secondary cone: the inequality functional vanishing
// exactly on it, a relative interior point of the facet, the normalized
// projected form N_F shared by its supporting wall classes, and those
// wall classes as indices into D.facets.
struct ConeFacetRecord {
    Vec functional;
    Vec rel_interior;
    SymMat normal;
    std::vector<int> walls;
};

struct SecondaryCone {
    DeloneSubdivision D;
    SubspaceT T;
    PolyCone cone;  // in T-coordinates
    int rigidity_index = 0;
    std::vector<ConeFacetRecord> facet_records;
};

namespace detail {

inline bool vec_is_zero(const Vec& v) {
    for (const Rat& x : v)
        if (sgn(x) != 0) return false;
    return true;
}

// N-form of a wall record: N over the cell-side affine basis plus the
// off-wall cell vertex, tested against the neighbor vertex.
inline SymMat wall_nform(const DeloneFacetRecord& rec) {
    std::vector<VecZ> v = rec.vsub;
    v.push_back(rec.w);
    return nform(v, rec.wprime).matrix;
}

}  // namespace detail

inline SecondaryCone secondary_cone(const DeloneSubdivision& D, const SubspaceT& T) {
    if (D.cells.empty()) throw std::invalid_argument("secondary_cone: subdivision has no cells");
    if (T.ambient() != D.q.dim)
        throw std::invalid_argument("secondary_cone: ambient dimension mismatch");
    int d = D.q.dim;

    std::vector<Vec> eqs;
    for (const DeloneCell& cell : D.cells) {
        if (static_cast<int>(cell.verts.size()) == d + 1) continue;
        std::vector<VecZ> v = detail::affine_basis_exact(cell.verts, d + 1);
        for (const VecZ& w : cell.verts) {
            if (std::find(v.begin(), v.end(), w) != v.end()) continue;
            Vec g = T.functional(nform(v, w).matrix);
            if (!detail::vec_is_zero(g)) eqs.push_back(std::move(g));
        }
    }

    std::vector<Vec> wall_funs;
    for (const DeloneFacetRecord& rec : D.facets)
        wall_funs.push_back(T.functional(detail::wall_nform(rec)));

    std::vector<Vec> ineqs;
    for (const Vec& g : wall_funs)
        if (!detail::vec_is_zero(g)) ineqs.push_back(g);

    SecondaryCone sc{D, T, cone_from_h(T.dim(), eqs, ineqs), 0, {}};
    dual_description(sc.cone);
    sc.rigidity_index = cone_dim(sc.cone);

    Vec cone_interior = relative_interior_point(sc.cone);
    for (const ConeFacet& f : facets(sc.cone)) {
        ConeFacetRecord fr;
        fr.functional = f.functional;
        fr.rel_interior = Vec(T.dim(), Rat(0));
        for (int ri : f.ray_indices)
            for (int k = 0; k < T.dim(); ++k) fr.rel_interior[k] += sc.cone.rays[ri][k];
        // A wall supports this facet iff its functional vanishes on the
        // facet's relative interior but not on the cone's.
        for (size_t wi = 0; wi < wall_funs.size(); ++wi) {
            const Vec& g = wall_funs[wi];
            if (detail::vec_is_zero(g)) continue;
            if (sgn(detail::dot(g, cone_interior)) == 0) continue;
            if (sgn(detail::dot(g, fr.rel_interior)) != 0) continue;
            fr.walls.push_back(static_cast<int>(wi));
        }
        if (fr.walls.empty())
            throw std::logic_error("secondary_cone: facet without supporting wall class");
        fr.normal =
            rational_normalize(T.project(detail::wall_nform(D.facets[fr.walls.front()])));
        sc.facet_records.push_back(std::move(fr));
    }
    return sc;
}

// A facet is a dead-end when it carries no positive definite form. The
// relative interior test is exact: a convex subset of the closed
// positive semidefinite cone meets the open definite cone if and only if
// its relative interior does.
inline bool is_dead_end(const SecondaryCone& sc, int facet_index) {
    if (facet_index < 0 || facet_index >= static_cast<int>(sc.facet_records.size()))
        throw std::invalid_argument("is_dead_end: facet index out of range");
    SymMat p = sc.T.from_coords(sc.facet_records[facet_index].rel_interior);
    return definiteness(p).kind != Definiteness::PositiveDefinite;
}

struct RepartitioningPolytope {
    std::vector<VecZ> vertices;                  // V_C, sorted
    std::vector<std::vector<VecZ>> lower_cells;  // cells of D tiling conv(V_C)
    std::vector<std::vector<VecZ>> upper_cells;  // their replacement after the flip
};

namespace detail {

// Validates the common flip preconditions and returns the witness's
// T-coordinates.
inline Vec check_flip_inputs(const SecondaryCone& sc, int facet_index, const SymMat& witness) {
    if (facet_index < 0 || facet_index >= static_cast<int>(sc.facet_records.size()))
        throw std::invalid_argument("flip: facet index out of range");
    if (sc.rigidity_index != sc.T.dim())
        throw std::invalid_argument("flip: secondary cone is not T-generic");
    if (is_dead_end(sc, facet_index)) throw std::invalid_argument("flip: facet is a dead-end");
    std::optional<Vec> x = sc.T.coords_of(witness);
    if (!x) throw std::invalid_argument("flip: witness form is not in T");
    for (const ConeFacetRecord& fr : sc.facet_records)
        if (sgn(dot(fr.functional, *x)) <= 0)
            throw std::invalid_argument("flip: witness is not interior to the cone");
    return *x;
}

// Facets of the polytope conv(pts) for rational lifted points, as
// (inequality functional over (1, x), incident point indices).
inline std::vector<std::pair<Vec, std::vector<int>>> lifted_facets(const std::vector<Vec>& pts) {
    int n = static_cast<int>(pts[0].size());
    std::vector<Vec> rays;
    for (const Vec& p : pts) {
        Vec r(n + 1);
        r[0] = 1;
        for (int i = 0; i < n; ++i) r[i + 1] = p[i];
        rays.push_back(std::move(r));
    }
    PolyCone cone = cone_from_v(n + 1, rays);
    std::map<Vec, int> input_index;
    for (size_t i = 0; i < rays.size(); ++i)
        input_index[vec_rational_normalize(rays[i])] = static_cast<int>(i);
    std::vector<int> ray_index(cone.rays.size());
    for (size_t i = 0; i < cone.rays.size(); ++i) {
        auto it = input_index.find(vec_rational_normalize(cone.rays[i]));
        if (it == input_index.end())
            throw std::logic_error("lifted_facets: hull ray is not an input point");
        ray_index[i] = it->second;
    }
    if (cone.rays.size() != rays.size())
        throw std::logic_error("lifted_facets: input point is not a vertex");
    std::vector<std::pair<Vec, std::vector<int>>> out;
    for (const ConeFacet& f : facets(cone)) {
        std::vector<int> idx;
        for (int r : f.ray_indices) idx.push_back(ray_index[r]);
        std::sort(idx.begin(), idx.end());
        out.emplace_back(f.functional, std::move(idx));
    }
    return out;
}

}  // namespace detail

// Repartitioning polytopes of the given cone facet: chains of cells of D
// glued along walls supporting the facet, with the lower/upper hull split
// of their lifted vertex sets relative to the witness.
inline std::vector<RepartitioningPolytope> repartitioning_polytopes(const SecondaryCone& sc,
                                                                    int facet_index,
                                                                    const SymMat& witness) {
    detail::check_flip_inputs(sc, facet_index, witness);
    const DeloneSubdivision& D = sc.D;
    int d = D.q.dim;
    const std::vector<int>& rf = sc.facet_records[facet_index].walls;

    constexpr size_t kChainLimit = 4096;
    std::set<std::vector<VecZ>> seen_polytopes;
    std::vector<RepartitioningPolytope> out;

    for (int start : rf) {
        // Chain of cell instances (class index, translation) joined by
        // walls supporting the facet.
        using Inst = std::pair<int, VecZ>;
        std::set<Inst> chain;
        std::vector<Inst> queue{{D.facets[start].cell, VecZ(d, Int(0))}};
        chain.insert(queue[0]);
        while (!queue.empty()) {
            auto [c, t] = queue.back();
            queue.pop_back();
            for (int wi : rf) {
                const DeloneFacetRecord& rec = D.facets[wi];
                std::vector<Inst> next;
                if (rec.cell == c) next.push_back({rec.neighbor, vecz_add(t, rec.shift)});
                if (rec.neighbor == c) next.push_back({rec.cell, vecz_sub(t, rec.shift)});
                for (Inst& in : next)
                    if (chain.insert(in).second) queue.push_back(in);
            }
            if (chain.size() > kChainLimit)
                throw std::runtime_error("repartitioning_polytopes: chain growth limit exceeded");
        }

        RepartitioningPolytope poly;
        std::set<std::vector<VecZ>> cells;
        std::set<VecZ> vset;
        for (const auto& [c, t] : chain) {
            std::vector<VecZ> verts;
            for (const VecZ& v : D.cells[c].verts) verts.push_back(vecz_add(v, t));
            for (const VecZ& v : verts) vset.insert(v);
            std::sort(verts.begin(), verts.end());
            cells.insert(std::move(verts));
        }
        poly.vertices.assign(vset.begin(), vset.end());
        poly.lower_cells.assign(cells.begin(), cells.end());
        if (!seen_polytopes.insert(detail::normalize_translate(poly.vertices).first).second)
            continue;

        // Lattice point identity: conv(V_C) contains no integer points
        // beyond V_C itself.
        std::vector<Vec> hrays;
        for (const VecZ& v : poly.vertices) hrays.push_back(to_rat(v));
        std::vector<std::pair<Vec, std::vector<int>>> hull = detail::lifted_facets(hrays);
        VecZ lo = poly.vertices[0], hi = poly.vertices[0];
        for (const VecZ& v : poly.vertices)
            for (int i = 0; i < d; ++i) {
                lo[i] = std::min(lo[i], v[i]);
                hi[i] = std::max(hi[i], v[i]);
            }
        std::vector<VecZ> inside;
        VecZ cur = lo;
        while (true) {
            Vec hx(d + 1);
            hx[0] = 1;
            for (int i = 0; i < d; ++i) hx[i + 1] = Rat(cur[i]);
            bool in = true;
            for (const auto& [fun, idx] : hull)
                if (sgn(detail::dot(fun, hx)) < 0) { in = false; break; }
            if (in) inside.push_back(cur);
            int i = 0;
            while (i < d && cur[i] == hi[i]) { cur[i] = lo[i]; ++i; }
            if (i == d) break;
            ++cur[i];
        }
        std::sort(inside.begin(), inside.end());
        if (inside != poly.vertices)
            throw std::logic_error("repartitioning_polytopes: lattice point identity failed");

        // Split the lifted hull; the lower cells must reproduce the chain.
        std::vector<Vec> lifted;
        for (const VecZ& v : poly.vertices) {
            Vec p = to_rat(v);
            p.push_back(witness.eval(v));
            lifted.push_back(std::move(p));
        }
        std::set<std::vector<VecZ>> lower_found;
        for (const auto& [fun, idx] : detail::lifted_facets(lifted)) {
            int s = sgn(fun[d + 1]);
            if (s == 0) continue;
            std::vector<VecZ> cell;
            for (int i : idx) cell.push_back(poly.vertices[i]);
            if (s > 0)
                lower_found.insert(std::move(cell));
            else
                poly.upper_cells.push_back(std::move(cell));
        }
        if (lower_found != cells)
            throw std::logic_error("repartitioning_polytopes: lower hull does not match the chain");
        std::sort(poly.upper_cells.begin(), poly.upper_cells.end());
        out.push_back(std::move(poly));
    }
    return out;
}

// Crosses the given cone facet: replaces lower by upper cells in each
// repartitioning polytope, then certifies the prediction by recomputing
// the subdivision of a form just beyond the facet and matching canonical
// keys. The returned subdivision is the recomputed one.
inline DeloneSubdivision flip(const SecondaryCone& sc, int facet_index, const SymMat& witness) {
    std::vector<RepartitioningPolytope> polys =
        repartitioning_polytopes(sc, facet_index, witness);

    std::set<std::vector<VecZ>> original;
    for (const DeloneCell& c : sc.D.cells) original.insert(c.verts);
    std::set<std::vector<VecZ>> key = original;
    for (const RepartitioningPolytope& p : polys)
        for (const std::vector<VecZ>& cell : p.lower_cells) {
            auto norm = detail::normalize_translate(cell).first;
            if (!original.count(norm))
                throw std::logic_error("flip: lower cell is not a cell class of D");
            key.erase(norm);
        }
    for (const RepartitioningPolytope& p : polys)
        for (const std::vector<VecZ>& cell : p.upper_cells)
            key.insert(detail::normalize_translate(cell).first);
    std::vector<std::vector<VecZ>> predicted(key.begin(), key.end());

    const ConeFacetRecord& fr = sc.facet_records[facet_index];
    Rat eps(1);
    for (int iter = 0; iter < 64; ++iter, eps /= 2) {
        Vec x(sc.T.dim());
        for (int k = 0; k < sc.T.dim(); ++k)
            x[k] = fr.rel_interior[k] - eps * fr.functional[k];
        SymMat qx = sc.T.from_coords(x);
        if (definiteness(qx).kind != Definiteness::PositiveDefinite) continue;
        DeloneSubdivision flipped = delone_subdivision(qx);
        if (flipped.canonical_key() == predicted) return flipped;
    }
    throw std::logic_error("flip: no nearby form matches the predicted subdivision");
}

}  // namespace tcover
