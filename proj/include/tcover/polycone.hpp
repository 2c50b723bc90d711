#pragma once

// Exact double description for polyhedral cones in R^k. Both conversion
// directions run through one pointed-cone engine: H->V reduces by the
// equality and lineality spaces first, V->H is polarity (feed rays as
// inequality functionals). Sizes here are small (k <= ~30, a few hundred
// functionals), so rational arithmetic with an algebraic rank-based
// adjacency test is affordable and leaves no degeneracy edge cases.

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcover/linalg.hpp"
#include "tcover/rational.hpp"

namespace tcover {

struct LinFun {
    Vec coeffs;

    Rat operator()(const Vec& x) const {
        if (coeffs.size() != x.size()) throw std::invalid_argument("LinFun: size mismatch");
        Rat s(0);
        for (size_t i = 0; i < x.size(); ++i)
            if (sgn(coeffs[i]) != 0) s += coeffs[i] * x[i];
        return s;
    }
};

namespace detail {

inline Rat dot(const Vec& a, const Vec& b) {
    Rat s(0);
    for (size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
    return s;
}

inline Vec scaled_sub(const Rat& ca, const Vec& a, const Rat& cb, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = ca * a[i] - cb * b[i];
    return r;
}

// Sign convention for functionals that may be negated freely (equalities,
// dedup keys): first nonzero entry positive.
inline Vec sign_normalize(Vec v) {
    for (const Rat& x : v) {
        if (sgn(x) == 0) continue;
        if (sgn(x) < 0)
            for (Rat& y : v) y = -y;
        break;
    }
    return v;
}

inline std::vector<Vec> dedup_sorted(std::vector<Vec> rows) {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return rows;
}

inline int rank_of_rows(const std::vector<Vec>& rows, int k) {
    if (rows.empty()) return 0;
    Mat m(static_cast<int>(rows.size()), k);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < k; ++j) m(static_cast<int>(i), j) = rows[i][j];
    return mat_rank(m);
}

// Extreme rays of {u : a.u >= 0 for all a}, assuming the functionals have
// full rank k (the cone is pointed). Functionals are inserted in the given
// order after the initial simplicial basis.
inline std::vector<Vec> dd_pointed(const std::vector<Vec>& funs, int k) {
    if (k == 0) return {};
    // Greedy full-rank initial subset.
    std::vector<int> base;
    {
        std::vector<Vec> picked;
        for (size_t i = 0; i < funs.size() && static_cast<int>(base.size()) < k; ++i) {
            picked.push_back(funs[i]);
            if (rank_of_rows(picked, k) == static_cast<int>(picked.size()))
                base.push_back(static_cast<int>(i));
            else
                picked.pop_back();
        }
    }
    if (static_cast<int>(base.size()) != k)
        throw std::logic_error("dd_pointed: functionals do not have full rank");

    Mat mb(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) mb(i, j) = funs[base[i]][j];
    Mat mb_inv = *mat_inverse(mb);

    std::vector<Vec> rays;
    std::vector<std::vector<int>> tight;  // per ray: indices into `order` below
    std::vector<int> order(base);         // processed functional indices

    for (int j = 0; j < k; ++j) {
        Vec r(k);
        for (int i = 0; i < k; ++i) r[i] = mb_inv(i, j);
        rays.push_back(vec_rational_normalize(r));
        std::vector<int> t;
        for (int i = 0; i < k; ++i)
            if (i != j) t.push_back(i);
        tight.push_back(t);
    }

    std::vector<bool> in_base(funs.size(), false);
    for (int b : base) in_base[b] = true;

    for (size_t fi = 0; fi < funs.size(); ++fi) {
        if (in_base[fi]) continue;
        const Vec& a = funs[fi];
        std::vector<int> pos, zero, neg;
        std::vector<Rat> val(rays.size());
        for (size_t r = 0; r < rays.size(); ++r) {
            val[r] = dot(a, rays[r]);
            int s = sgn(val[r]);
            if (s > 0) pos.push_back(static_cast<int>(r));
            else if (s < 0) neg.push_back(static_cast<int>(r));
            else zero.push_back(static_cast<int>(r));
        }
        int cur = static_cast<int>(order.size());
        if (neg.empty()) {
            for (int r : zero) tight[r].push_back(cur);
            order.push_back(static_cast<int>(fi));
            continue;
        }
        std::vector<Vec> new_rays;
        std::vector<std::vector<int>> new_tight;
        for (int p : pos)
            for (int n : neg) {
                // Adjacency: the common tight constraints must cut a 2-face.
                std::vector<int> common;
                std::set_intersection(tight[p].begin(), tight[p].end(), tight[n].begin(),
                                      tight[n].end(), std::back_inserter(common));
                if (static_cast<int>(common.size()) < k - 2) continue;
                std::vector<Vec> rows;
                for (int c : common) rows.push_back(funs[order[c]]);
                if (rank_of_rows(rows, k) != k - 2) continue;
                Vec nr = vec_rational_normalize(scaled_sub(val[p], rays[n], val[n], rays[p]));
                std::vector<int> t(common);
                t.push_back(cur);
                new_rays.push_back(std::move(nr));
                new_tight.push_back(std::move(t));
            }
        std::vector<Vec> kept_rays;
        std::vector<std::vector<int>> kept_tight;
        for (int r : zero) {
            kept_rays.push_back(std::move(rays[r]));
            std::vector<int> t = std::move(tight[r]);
            t.push_back(cur);
            kept_tight.push_back(std::move(t));
        }
        for (int r : pos) {
            kept_rays.push_back(std::move(rays[r]));
            kept_tight.push_back(std::move(tight[r]));
        }
        for (size_t r = 0; r < new_rays.size(); ++r) {
            kept_rays.push_back(std::move(new_rays[r]));
            kept_tight.push_back(std::move(new_tight[r]));
        }
        rays = std::move(kept_rays);
        tight = std::move(kept_tight);
        order.push_back(static_cast<int>(fi));
    }
    return rays;
}

}  // namespace detail

struct PolyCone {
    int ambient = 0;
    // H-side: {x : e.x = 0, a.x >= 0}. V-side: cone(rays) + span(lineality).
    std::vector<Vec> equalities;
    std::vector<Vec> inequalities;
    std::vector<Vec> rays;
    std::vector<Vec> lineality;
    bool has_h = false;
    bool has_v = false;
};

inline PolyCone cone_from_h(int ambient, std::vector<Vec> equalities, std::vector<Vec> inequalities) {
    PolyCone c;
    c.ambient = ambient;
    c.equalities = std::move(equalities);
    c.inequalities = std::move(inequalities);
    c.has_h = true;
    for (const Vec& v : c.equalities)
        if (static_cast<int>(v.size()) != ambient) throw std::invalid_argument("cone_from_h: bad equality size");
    for (const Vec& v : c.inequalities)
        if (static_cast<int>(v.size()) != ambient) throw std::invalid_argument("cone_from_h: bad inequality size");
    return c;
}

inline PolyCone cone_from_v(int ambient, std::vector<Vec> rays, std::vector<Vec> lineality = {}) {
    PolyCone c;
    c.ambient = ambient;
    c.rays = std::move(rays);
    c.lineality = std::move(lineality);
    c.has_v = true;
    for (const Vec& v : c.rays)
        if (static_cast<int>(v.size()) != ambient) throw std::invalid_argument("cone_from_v: bad ray size");
    for (const Vec& v : c.lineality)
        if (static_cast<int>(v.size()) != ambient) throw std::invalid_argument("cone_from_v: bad lineality size");
    return c;
}

namespace detail {

// Core conversion: from {x : E x = 0, A x >= 0} to (rays, lineality).
inline std::pair<std::vector<Vec>, std::vector<Vec>> h_to_v(int k, const std::vector<Vec>& eqs,
                                                            const std::vector<Vec>& ineqs_in) {
    // Deduplicate normalized functionals.
    std::vector<Vec> ineqs;
    for (const Vec& a : ineqs_in) {
        Vec n = vec_rational_normalize(a);
        bool zero = true;
        for (const Rat& x : n)
            if (sgn(x) != 0) { zero = false; break; }
        if (!zero) ineqs.push_back(std::move(n));
    }
    ineqs = dedup_sorted(std::move(ineqs));

    // Basis of the equality null space; cone lives in y with x = N y.
    std::vector<Vec> nbasis;
    if (eqs.empty()) {
        for (int i = 0; i < k; ++i) {
            Vec e(k, Rat(0));
            e[i] = 1;
            nbasis.push_back(e);
        }
    } else {
        Mat em(static_cast<int>(eqs.size()), k);
        for (size_t i = 0; i < eqs.size(); ++i)
            for (int j = 0; j < k; ++j) em(static_cast<int>(i), j) = eqs[i][j];
        nbasis = nullspace(em);
    }
    int k1 = static_cast<int>(nbasis.size());
    if (k1 == 0) return {{}, {}};

    std::vector<Vec> restr;  // functionals on y
    for (const Vec& a : ineqs) {
        Vec ay(k1);
        for (int j = 0; j < k1; ++j) ay[j] = dot(a, nbasis[j]);
        restr.push_back(std::move(ay));
    }

    // Lineality in y: common kernel of the restricted functionals.
    std::vector<Vec> lin_y;
    if (restr.empty()) {
        for (int i = 0; i < k1; ++i) {
            Vec e(k1, Rat(0));
            e[i] = 1;
            lin_y.push_back(e);
        }
    } else {
        Mat am(static_cast<int>(restr.size()), k1);
        for (size_t i = 0; i < restr.size(); ++i)
            for (int j = 0; j < k1; ++j) am(static_cast<int>(i), j) = restr[i][j];
        lin_y = nullspace(am);
    }
    int k2 = static_cast<int>(lin_y.size());

    // Complement basis: standard vectors missing from the lineality pivots.
    std::vector<Vec> comp;
    {
        std::vector<bool> is_pivot(k1, false);
        if (k2 > 0) {
            Mat lm(k2, k1);
            for (int i = 0; i < k2; ++i)
                for (int j = 0; j < k1; ++j) lm(i, j) = lin_y[i][j];
            for (int p : rref(lm)) is_pivot[p] = true;
        }
        for (int j = 0; j < k1; ++j) {
            if (static_cast<int>(comp.size()) == k1 - k2) break;
            if (!is_pivot[j]) {
                Vec e(k1, Rat(0));
                e[j] = 1;
                comp.push_back(e);
            }
        }
    }
    int k3 = static_cast<int>(comp.size());

    std::vector<Vec> rays_x;
    if (k3 > 0 && !restr.empty()) {
        std::vector<Vec> funs;
        for (const Vec& ay : restr) {
            Vec au(k3);
            bool zero = true;
            for (int j = 0; j < k3; ++j) {
                au[j] = dot(ay, comp[j]);
                if (sgn(au[j]) != 0) zero = false;
            }
            if (!zero) funs.push_back(vec_rational_normalize(au));
        }
        funs = dedup_sorted(std::move(funs));
        std::vector<Vec> rays_u = dd_pointed(funs, k3);
        for (const Vec& u : rays_u) {
            Vec y(k1, Rat(0));
            for (int j = 0; j < k3; ++j)
                for (int i = 0; i < k1; ++i) y[i] += comp[j][i] * u[j];
            Vec x(k, Rat(0));
            for (int i = 0; i < k1; ++i)
                for (int t = 0; t < k; ++t) x[t] += nbasis[i][t] * y[i];
            rays_x.push_back(vec_rational_normalize(x));
        }
    }
    std::vector<Vec> lin_x;
    for (const Vec& y : lin_y) {
        Vec x(k, Rat(0));
        for (int i = 0; i < k1; ++i)
            for (int t = 0; t < k; ++t) x[t] += nbasis[i][t] * y[i];
        lin_x.push_back(vec_rational_normalize(x));
    }
    std::sort(rays_x.begin(), rays_x.end());
    return {rays_x, lin_x};
}

}  // namespace detail

// Completes the missing description side in place and canonicalizes both:
// rays become the sorted rational-normalized extreme rays, inequalities the
// irredundant facet functionals, implicit equalities move to the equality
// list. The H-side is derived by polarity: the polar of cone(R) + span(L)
// is {a : a.r >= 0, a.l = 0}, whose extreme rays are the facet normals and
// whose lineality spans the equalities.
inline void dual_description(PolyCone& c) {
    if (!c.has_h && !c.has_v) throw std::invalid_argument("dual_description: empty cone description");
    if (c.has_h && c.has_v) return;
    if (!c.has_h) {
        auto [ineqs, eqs] = detail::h_to_v(c.ambient, c.lineality, c.rays);
        c.inequalities = std::move(ineqs);
        c.equalities = std::move(eqs);
        c.has_h = true;
        auto [rays, lin] = detail::h_to_v(c.ambient, c.equalities, c.inequalities);
        c.rays = std::move(rays);
        c.lineality = std::move(lin);
    } else {
        auto [rays, lin] = detail::h_to_v(c.ambient, c.equalities, c.inequalities);
        c.rays = std::move(rays);
        c.lineality = std::move(lin);
        c.has_v = true;
        auto [ineqs, eqs] = detail::h_to_v(c.ambient, c.lineality, c.rays);
        c.inequalities = std::move(ineqs);
        c.equalities = std::move(eqs);
    }
}

struct ConeFacet {
    Vec functional;                // irredundant inequality, rational-normalized
    std::vector<int> ray_indices;  // rays incident to the facet
};

// Irredundant facet list with incident rays; both descriptions are
// completed as a side effect.
inline std::vector<ConeFacet> facets(PolyCone& c) {
    dual_description(c);
    std::vector<ConeFacet> out;
    for (const Vec& g : c.inequalities) {
        ConeFacet f;
        f.functional = vec_rational_normalize(g);
        for (size_t r = 0; r < c.rays.size(); ++r)
            if (sgn(detail::dot(g, c.rays[r])) == 0) f.ray_indices.push_back(static_cast<int>(r));
        out.push_back(std::move(f));
    }
    return out;
}

// A point in the relative interior: the sum of the normalized extreme rays
// (the lineality part contributes zero, which is interior to a subspace).
inline Vec relative_interior_point(PolyCone& c) {
    dual_description(c);
    Vec p(c.ambient, Rat(0));
    for (const Vec& r : c.rays)
        for (int i = 0; i < c.ambient; ++i) p[i] += r[i];
    return p;
}

inline int cone_dim(PolyCone& c) {
    dual_description(c);
    std::vector<Vec> gens = c.rays;
    gens.insert(gens.end(), c.lineality.begin(), c.lineality.end());
    return detail::rank_of_rows(gens, c.ambient);
}

// ---- text format ----

inline std::string format_cone(const PolyCone& c) {
    std::ostringstream os;
    os << "ambient " << c.ambient << "\n";
    auto section = [&os](const char* name, const std::vector<Vec>& rows) {
        os << name << " " << rows.size() << "\n";
        for (const Vec& r : rows) {
            for (size_t i = 0; i < r.size(); ++i) {
                if (i) os << ' ';
                os << rat_to_string(r[i]);
            }
            os << "\n";
        }
    };
    if (c.has_h) {
        section("equalities", c.equalities);
        section("inequalities", c.inequalities);
    }
    if (c.has_v) {
        section("rays", c.rays);
        section("lineality", c.lineality);
    }
    return os.str();
}

inline PolyCone parse_cone(std::istream& is) {
    PolyCone c;
    std::string kw;
    if (!(is >> kw >> c.ambient) || kw != "ambient" || c.ambient < 1)
        throw std::invalid_argument("parse_cone: expected 'ambient k'");
    while (is >> kw) {
        int n = 0;
        if (!(is >> n) || n < 0) throw std::invalid_argument("parse_cone: bad section count");
        std::vector<Vec> rows;
        for (int i = 0; i < n; ++i) {
            Vec row(c.ambient);
            for (int j = 0; j < c.ambient; ++j) {
                std::string tok;
                if (!(is >> tok)) throw std::invalid_argument("parse_cone: truncated section");
                row[j] = parse_rat(tok);
            }
            rows.push_back(std::move(row));
        }
        if (kw == "equalities") { c.equalities = std::move(rows); c.has_h = true; }
        else if (kw == "inequalities") { c.inequalities = std::move(rows); c.has_h = true; }
        else if (kw == "rays") { c.rays = std::move(rows); c.has_v = true; }
        else if (kw == "lineality") { c.lineality = std::move(rows); c.has_v = true; }
        else throw std::invalid_argument("parse_cone: unknown section '" + kw + "'");
    }
    return c;
}

inline PolyCone parse_cone(const std::string& text) {
    std::istringstream is(text);
    return parse_cone(is);
}

}  // namespace tcover
