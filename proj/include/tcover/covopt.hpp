#pragma once

// Covering-density optimization over a T-secondary cone: determinant
// maximization under bordered circumradius blocks, solved by a damped
// Newton barrier method in floating point and certified by exact
// rational feasible points and exact weak-duality bounds.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tcover/delone.hpp"
#include "tcover/enumerate.hpp"
#include "tcover/secondary.hpp"
#include "tcover/subspace.hpp"
#include "tcover/symmetry.hpp"

namespace tcover {

// Bordered circumradius matrix of a d-simplex: PSD iff the circumradius
// of the simplex under q is at most 1. With v_i the vertices relative to
// the first one, the entries are 4 in the corner, q[v_i] on the border,
// and the Gram products inside.
inline SymMat br_matrix(const SymMat& q, const std::vector<VecZ>& simplex) {
    int d = q.dim;
    if (static_cast<int>(simplex.size()) != d + 1)
        throw std::invalid_argument("br_matrix: simplex needs d+1 vertices");
    std::vector<VecZ> v(d);
    for (int i = 0; i < d; ++i) {
        v[i] = simplex[i + 1];
        for (int j = 0; j < d; ++j) v[i][j] -= simplex[0][j];
    }
    Mat span(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) span(i, j) = Rat(v[i][j]);
    if (sgn(mat_det(span)) == 0) throw std::invalid_argument("br_matrix: degenerate simplex");
    SymMat br(d + 1);
    br(0, 0) = 4;
    for (int i = 0; i < d; ++i) {
        br(i + 1, 0) = q.eval(v[i]);
        for (int j = 0; j <= i; ++j) br(i + 1, j + 1) = q.bilinear(v[i], v[j]);
    }
    return br;
}

// mu^d / det: the squared covering density divided by the squared unit
// ball volume. Exact, scale-invariant, GL_d(Z)-invariant.
inline Rat normalized_theta_sq(const SymMat& q) {
    if (!is_positive_definite(q))
        throw std::invalid_argument("normalized_theta_sq: form is not positive definite");
    Rat mu = inhomogeneous_minimum(delone_subdivision(q));
    Rat p(1);
    for (int i = 0; i < q.dim; ++i) p *= mu;
    return p / sym_det(q);
}

inline double ball_volume(int d) { return std::pow(M_PI, d * 0.5) / std::tgamma(d * 0.5 + 1.0); }

// Float covering density from an exact squared bound.
inline double theta_from_sq(int d, const Rat& sq) {
    return ball_volume(d) * std::sqrt(sq.get_d());
}

// gamma^2 = mu / (lambda_min^2 / 4): squared packing-covering constant.
inline Rat packing_covering(const QForm& q) {
    if (!q.positive_definite())
        throw std::invalid_argument("packing_covering: form is not positive definite");
    Rat mu = inhomogeneous_minimum(delone_subdivision(q.mat()));
    Rat lam = shortest_vectors(q.mat()).lambda_sq;
    return 4 * mu / lam;
}

// Determinant maximization data over one cone: G(x) = sum x_k A_k,
// one bordered block per representative simplex, one linear block per
// facet inequality. Cells equivalent under automorphisms of a sample
// form that fix T pointwise share one block.
struct MaxDetProblem {
    SubspaceT T;
    std::vector<std::vector<VecZ>> simplices;     // one spanning simplex per cell orbit
    std::vector<std::vector<SymMat>> br_coeffs;   // per simplex, per coordinate, corner 0
    std::vector<Vec> ineqs;                       // facet functionals in T-coordinates
    Vec start;                                    // strictly feasible coordinates, mu = 1/2
};

namespace detail {

inline SymMat br_linear_part(const SymMat& a, const std::vector<VecZ>& simplex) {
    SymMat c = br_matrix(a, simplex);
    c(0, 0) = 0;
    return c;
}

inline std::vector<std::vector<VecZ>> representative_simplices(const SecondaryCone& sc,
                                                               const SymMat& sample) {
    MatrixGroup aut = automorphism_group(sample);
    std::vector<Unimodular> bt;
    for (const Unimodular& g : aut.elements)
        if (stabilizes_subspace(g, sc.T)) {
            bool pointwise = true;
            for (const SymMat& b : sc.T.basis())
                if (transform(b, g) != b) pointwise = false;
            if (pointwise) bt.push_back(g);
        }
    std::map<std::vector<VecZ>, int> orbit_key;
    std::vector<std::vector<VecZ>> out;
    for (const DeloneCell& cell : sc.D.cells) {
        std::vector<VecZ> best;
        for (const Unimodular& g : bt) {
            std::vector<VecZ> img;
            for (const VecZ& v : cell.verts) img.push_back(g.apply(v));
            std::vector<VecZ> key = normalize_translate(img).first;
            if (best.empty() || key < best) best = std::move(key);
        }
        if (orbit_key.emplace(std::move(best), 1).second)
            out.push_back(affine_basis_exact(cell.verts, sample.dim + 1));
    }
    return out;
}

}  // namespace detail

inline MaxDetProblem build_maxdet(const SecondaryCone& sc) {
    if (sc.rigidity_index != sc.T.dim())
        throw std::invalid_argument("build_maxdet: cone is not T-generic");
    MaxDetProblem p{sc.T, {}, {}, {}, {}};
    SymMat sample = interior_form(sc);
    if (!is_positive_definite(sample))
        throw std::logic_error("build_maxdet: interior sample is not positive definite");
    p.simplices = detail::representative_simplices(sc, sample);
    for (const std::vector<VecZ>& L : p.simplices) {
        std::vector<SymMat> coeffs;
        for (const SymMat& a : sc.T.basis()) coeffs.push_back(detail::br_linear_part(a, L));
        p.br_coeffs.push_back(std::move(coeffs));
    }
    p.ineqs = sc.cone.inequalities;

    // mu of the sample itself; the radii stored in sc.D belong to whatever
    // form defined the cone, not to this interior point
    Rat mu(0);
    for (const DeloneCell& cell : sc.D.cells) {
        Sphere s = circumsphere(sample, detail::affine_basis_exact(cell.verts, sample.dim + 1));
        mu = std::max(mu, s.radius_sq);
    }
    Vec x = *sc.T.coords_of(sample);
    Rat scale = 1 / (2 * mu);
    for (Rat& c : x) c *= scale;
    p.start = std::move(x);
    return p;
}

struct SolverOptions {
    double barrier_gap = 1e-9;    // complementarity target nu / t
    double theta_gap = 5e-7;      // stop refining certificates below this
    int max_newton = 2000;
    long max_denominator = 1L << 28;  // cap for certificate rounding
};

struct SolverTrace {
    int newton_steps = 0;
    double final_t = 0.0;
    double logdet = 0.0;
    bool converged = false;
};

struct BoundCertificate {
    SymMat qstar;           // exact form in the cone with mu(qstar) = 1
    Rat upper_sq;           // 1 / det(qstar), bounds the cone optimum from above
    SymMat w;               // exact PD dual matrix
    std::vector<SymMat> z;  // exact PSD block multipliers
    std::vector<Rat> lambda;
    Rat lower_sq;           // det(w) * (d/c)^d with c = 4 * sum of corner entries
    double gap = 0.0;       // float width of the theta interval
    std::vector<std::vector<VecZ>> simplices;  // cells the z blocks refer to
};

struct OptimizeResult {
    std::vector<double> x;
    BoundCertificate cert;
    SolverTrace trace;
};

namespace detail {

// ---- small dense double linear algebra ----

struct DMat {
    int n = 0;
    std::vector<double> a;
    explicit DMat(int n_) : n(n_), a(static_cast<size_t>(n_) * n_, 0.0) {}
    double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

// In-place lower Cholesky; false when not numerically PD.
inline bool dchol(DMat& m) {
    for (int j = 0; j < m.n; ++j) {
        double s = m.at(j, j);
        for (int k = 0; k < j; ++k) s -= m.at(j, k) * m.at(j, k);
        if (!(s > 0.0) || !std::isfinite(s)) return false;
        double l = std::sqrt(s);
        m.at(j, j) = l;
        for (int i = j + 1; i < m.n; ++i) {
            double t = m.at(i, j);
            for (int k = 0; k < j; ++k) t -= m.at(i, k) * m.at(j, k);
            m.at(i, j) = t / l;
        }
    }
    return true;
}

inline double chol_logdet(const DMat& l) {
    double s = 0.0;
    for (int j = 0; j < l.n; ++j) s += std::log(l.at(j, j));
    return 2.0 * s;
}

inline void chol_solve(const DMat& l, std::vector<double>& b) {
    for (int i = 0; i < l.n; ++i) {
        for (int k = 0; k < i; ++k) b[i] -= l.at(i, k) * b[k];
        b[i] /= l.at(i, i);
    }
    for (int i = l.n - 1; i >= 0; --i) {
        for (int k = i + 1; k < l.n; ++k) b[i] -= l.at(k, i) * b[k];
        b[i] /= l.at(i, i);
    }
}

inline DMat chol_inverse(const DMat& l) {
    DMat inv(l.n);
    for (int c = 0; c < l.n; ++c) {
        std::vector<double> e(l.n, 0.0);
        e[c] = 1.0;
        chol_solve(l, e);
        for (int r = 0; r < l.n; ++r) inv.at(r, c) = e[r];
    }
    for (int i = 0; i < l.n; ++i)
        for (int j = 0; j < i; ++j) {
            double v = 0.5 * (inv.at(i, j) + inv.at(j, i));
            inv.at(i, j) = inv.at(j, i) = v;
        }
    return inv;
}

inline double dtrace_mul(const DMat& a, const DMat& b) {
    double s = 0.0;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) s += a.at(i, j) * b.at(j, i);
    return s;
}

inline DMat dmul(const DMat& a, const DMat& b) {
    DMat c(a.n);
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < a.n; ++k) {
            double v = a.at(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < a.n; ++j) c.at(i, j) += v * b.at(k, j);
        }
    return c;
}

inline DMat to_dmat(const SymMat& m) {
    DMat d(m.dim);
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j) d.at(i, j) = m(i, j).get_d();
    return d;
}

// Best rational approximation with bounded denominator via continued
// fractions.
inline Rat rat_approx(double v, long max_den) {
    if (!std::isfinite(v)) throw std::invalid_argument("rat_approx: value is not finite");
    bool neg = v < 0;
    double x = neg ? -v : v;
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int it = 0; it < 64; ++it) {
        if (x > 9e17) break;
        long a = static_cast<long>(std::floor(x));
        if (a > 0 && (p1 > 9e17 / a || q1 > 9e17 / a)) break;
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den || q2 < 0 || p2 < 0) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double frac = x - static_cast<double>(a);
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    if (q1 == 0) return Rat(neg ? -p0 : p0, q0 == 0 ? 1 : q0);
    Rat r(neg ? -p1 : p1, q1);
    r.canonicalize();
    return r;
}

inline Rat rat_pow(Rat base, int e) {
    Rat r(1);
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// Barrier state: G(x) and the blocks, their Cholesky factors and
// inverses. valid is false outside the feasible interior.
struct BarrierState {
    bool valid = false;
    DMat gl{1};
    std::vector<DMat> brl;
    std::vector<double> gx;
    double logdet_g = 0.0;
};

struct BarrierData {
    int d = 0, m = 0;
    std::vector<DMat> a;                  // basis forms
    std::vector<std::vector<DMat>> c;     // block coefficients
    std::vector<SymMat> f0;               // block constants (corner 4)
    std::vector<std::vector<double>> g;   // inequality functionals
    double nu = 0.0;

    BarrierState eval(const std::vector<double>& x) const {
        BarrierState s;
        s.gl = DMat(d);
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) s.gl.at(i, j) += x[k] * a[k].at(i, j);
        if (!dchol(s.gl)) return s;
        s.logdet_g = chol_logdet(s.gl);
        for (size_t b = 0; b < c.size(); ++b) {
            DMat br = to_dmat(f0[b]);
            for (int k = 0; k < m; ++k)
                for (int i = 0; i < d + 1; ++i)
                    for (int j = 0; j < d + 1; ++j) br.at(i, j) += x[k] * c[b][k].at(i, j);
            if (!dchol(br)) return s;
            s.brl.push_back(std::move(br));
        }
        for (const std::vector<double>& gj : g) {
            double v = 0.0;
            for (int k = 0; k < m; ++k) v += gj[k] * x[k];
            if (!(v > 0.0)) return s;
            s.gx.push_back(v);
        }
        s.valid = true;
        return s;
    }

    double phi(double t, const BarrierState& s) const {
        double v = -t * s.logdet_g;
        for (const DMat& l : s.brl) v -= chol_logdet(l);
        for (double gx : s.gx) v -= std::log(gx);
        return v;
    }
};

}  // namespace detail

// Damped Newton barrier solve followed by exact certification. The upper
// bound is a rounded, repaired, exactly rescaled feasible form; the lower
// bound is exact weak duality: for lambda >= 0, Z_i PSD and PD W with
// <W, A_k> + sum lambda_j g_jk + sum <Z_i, C_ik> = 0, every feasible Q
// has <W, Q> <= c = 4 sum (Z_i)_00, so det Q <= (c/d)^d / det W.
inline OptimizeResult optimize_cone(const SecondaryCone& sc, const SolverOptions& opts = {}) {
    MaxDetProblem p = build_maxdet(sc);
    int d = sc.T.ambient();
    int m = sc.T.dim();

    detail::BarrierData bd;
    bd.d = d;
    bd.m = m;
    for (const SymMat& a : p.T.basis()) bd.a.push_back(detail::to_dmat(a));
    SymMat corner(d + 1);
    corner(0, 0) = 4;
    for (const std::vector<SymMat>& coeffs : p.br_coeffs) {
        std::vector<detail::DMat> row;
        for (const SymMat& cmat : coeffs) row.push_back(detail::to_dmat(cmat));
        bd.c.push_back(std::move(row));
        bd.f0.push_back(corner);
    }
    for (const Vec& gj : p.ineqs) {
        std::vector<double> row;
        for (const Rat& v : gj) row.push_back(v.get_d());
        bd.g.push_back(std::move(row));
    }
    bd.nu = bd.c.size() * (d + 1) + bd.g.size();

    std::vector<double> x;
    for (const Rat& v : p.start) x.push_back(v.get_d());
    detail::BarrierState st = bd.eval(x);
    if (!st.valid) throw std::logic_error("optimize_cone: start point is infeasible");

    OptimizeResult res;
    res.trace.converged = true;
    double t = 1.0;
    while (true) {
        for (int it = 0; it < 80; ++it) {
            if (res.trace.newton_steps >= opts.max_newton) {
                res.trace.converged = false;
                break;
            }
            // gradient and Hessian
            detail::DMat ginv = detail::chol_inverse(st.gl);
            std::vector<detail::DMat> brinv;
            for (const detail::DMat& l : st.brl) brinv.push_back(detail::chol_inverse(l));
            std::vector<detail::DMat> mg;
            for (int k = 0; k < m; ++k) mg.push_back(detail::dmul(ginv, bd.a[k]));
            std::vector<std::vector<detail::DMat>> mb(bd.c.size());
            for (size_t b = 0; b < bd.c.size(); ++b)
                for (int k = 0; k < m; ++k) mb[b].push_back(detail::dmul(brinv[b], bd.c[b][k]));
            std::vector<double> grad(m, 0.0);
            detail::DMat hess(m);
            for (int k = 0; k < m; ++k) {
                double gk = 0.0;
                for (int i = 0; i < d; ++i) gk -= t * mg[k].at(i, i);
                for (size_t b = 0; b < bd.c.size(); ++b)
                    for (int i = 0; i < d + 1; ++i) gk -= mb[b][k].at(i, i);
                for (size_t j = 0; j < bd.g.size(); ++j) gk -= bd.g[j][k] / st.gx[j];
                grad[k] = gk;
            }
            for (int k = 0; k < m; ++k)
                for (int l = k; l < m; ++l) {
                    double h = t * detail::dtrace_mul(mg[k], mg[l]);
                    for (size_t b = 0; b < bd.c.size(); ++b)
                        h += detail::dtrace_mul(mb[b][k], mb[b][l]);
                    for (size_t j = 0; j < bd.g.size(); ++j)
                        h += bd.g[j][k] * bd.g[j][l] / (st.gx[j] * st.gx[j]);
                    hess.at(k, l) = hess.at(l, k) = h;
                }
            detail::DMat hl = hess;
            if (!detail::dchol(hl)) {
                res.trace.converged = false;
                break;
            }
            std::vector<double> dx(m);
            for (int k = 0; k < m; ++k) dx[k] = -grad[k];
            detail::chol_solve(hl, dx);
            double dec = 0.0;
            for (int k = 0; k < m; ++k) dec -= grad[k] * dx[k];
            if (dec * 0.5 < 1e-13) break;
            double phi0 = bd.phi(t, st);
            double step = 1.0;
            bool moved = false;
            for (int bt = 0; bt < 60; ++bt, step *= 0.5) {
                std::vector<double> xn(m);
                for (int k = 0; k < m; ++k) xn[k] = x[k] + step * dx[k];
                detail::BarrierState sn = bd.eval(xn);
                if (!sn.valid) continue;
                if (bd.phi(t, sn) <= phi0 - 0.25 * step * dec) {
                    x = std::move(xn);
                    st = std::move(sn);
                    moved = true;
                    break;
                }
            }
            ++res.trace.newton_steps;
            if (!moved) break;
        }
        if (bd.nu / t <= opts.barrier_gap || !res.trace.converged) break;
        t *= 4.0;
    }
    res.trace.final_t = t;
    res.trace.logdet = st.logdet_g;
    res.x = x;

    // float dual estimates from the central point
    detail::DMat ginv = detail::chol_inverse(st.gl);
    std::vector<detail::DMat> zhat;
    for (const detail::DMat& l : st.brl) {
        detail::DMat z = detail::chol_inverse(l);
        for (double& v : z.a) v /= t;
        zhat.push_back(std::move(z));
    }
    std::vector<double> lhat;
    for (double gx : st.gx) lhat.push_back(1.0 / (t * gx));

    // ---- exact certification ----
    const Mat& gram = p.T.gram();
    std::optional<Mat> gram_inv = mat_inverse(gram);
    if (!gram_inv) throw std::logic_error("optimize_cone: singular subspace Gram matrix");

    BoundCertificate best;
    bool have_upper = false, have_lower = false;
    std::vector<long> dens;
    for (long cand : {16L, 1L << 10, 1L << 16, 1L << 22, 1L << 28})
        if (dens.empty() || cand <= opts.max_denominator) dens.push_back(cand);
    for (long den : dens) {
        if (!have_upper || (have_lower && best.gap > opts.theta_gap)) {
            // primal: round, blend toward the exact start point, rescale
            Vec xr(m);
            for (int k = 0; k < m; ++k) xr[k] = detail::rat_approx(x[k], den);
            for (int bexp = 20; bexp >= 0; bexp -= 4) {
                Rat beta = bexp == 0 ? Rat(1) : Rat(1, 1L << bexp);
                Vec xm(m);
                for (int k = 0; k < m; ++k) xm[k] = (1 - beta) * xr[k] + beta * p.start[k];
                bool inside = true;
                for (const Vec& gj : p.ineqs) {
                    Rat v(0);
                    for (int k = 0; k < m; ++k) v += gj[k] * xm[k];
                    if (sgn(v) < 0) inside = false;
                }
                if (!inside) continue;
                SymMat q = p.T.from_coords(xm);
                if (!is_positive_definite(q)) continue;
                Rat mu = inhomogeneous_minimum(delone_subdivision(q));
                Rat upper = detail::rat_pow(mu, d) / sym_det(q);
                if (!have_upper || upper < best.upper_sq) {
                    Rat inv_mu = 1 / mu;
                    best.qstar = inv_mu * q;
                    best.upper_sq = upper;
                    have_upper = true;
                }
                break;
            }
        }

        // dual: round multipliers, repair Z to PSD, solve for W exactly
        std::vector<SymMat> z;
        bool zok = true;
        for (const detail::DMat& zh : zhat) {
            SymMat zi(d + 1);
            for (int i = 0; i < d + 1; ++i)
                for (int j = 0; j <= i; ++j) zi(i, j) = detail::rat_approx(zh.at(i, j), den);
            Rat eps(1, den);
            int loads = 0;
            while (definiteness(zi).kind == Definiteness::Indefinite) {
                for (int i = 0; i < d + 1; ++i) zi(i, i) += eps;
                eps *= 2;
                if (++loads > 80) {
                    zok = false;
                    break;
                }
            }
            if (!zok) break;
            z.push_back(std::move(zi));
        }
        if (!zok) continue;
        std::vector<Rat> lam;
        for (double v : lhat) {
            Rat r = detail::rat_approx(v, den);
            lam.push_back(sgn(r) < 0 ? Rat(0) : r);
        }
        SymMat w(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j <= i; ++j) w(i, j) = detail::rat_approx(ginv.at(i, j), den);
        // residual of the stationarity equations, absorbed into W
        Vec r(m, Rat(0));
        for (int k = 0; k < m; ++k) {
            Rat s = inner(w, p.T.basis()[k]);
            for (size_t j = 0; j < p.ineqs.size(); ++j) s += lam[j] * p.ineqs[j][k];
            for (size_t b = 0; b < p.br_coeffs.size(); ++b) s += inner(z[b], p.br_coeffs[b][k]);
            r[k] = s;
        }
        Vec y(m, Rat(0));
        for (int k = 0; k < m; ++k) {
            Rat s(0);
            for (int l = 0; l < m; ++l) s += (*gram_inv)(k, l) * r[l];
            y[k] = -s;
        }
        for (int k = 0; k < m; ++k)
            if (sgn(y[k]) != 0) w = w + y[k] * p.T.basis()[k];
        for (int k = 0; k < m; ++k) {
            Rat s = inner(w, p.T.basis()[k]);
            for (size_t j = 0; j < p.ineqs.size(); ++j) s += lam[j] * p.ineqs[j][k];
            for (size_t b = 0; b < p.br_coeffs.size(); ++b) s += inner(z[b], p.br_coeffs[b][k]);
            if (sgn(s) != 0) throw std::logic_error("optimize_cone: dual repair failed");
        }
        if (!is_positive_definite(w)) continue;
        Rat c(0);
        for (const SymMat& zi : z) c += zi(0, 0);
        c *= 4;
        if (sgn(c) <= 0) continue;
        Rat lower = sym_det(w) * detail::rat_pow(Rat(d) / c, d);
        if (!have_lower || lower > best.lower_sq) {
            best.w = w;
            best.z = z;
            best.lambda = lam;
            best.lower_sq = lower;
            have_lower = true;
        }

        if (have_upper && have_lower) {
            best.gap = ball_volume(d) *
                       (std::sqrt(best.upper_sq.get_d()) - std::sqrt(best.lower_sq.get_d()));
            if (best.gap < opts.theta_gap) break;
        }
    }
    if (!have_upper) throw std::logic_error("optimize_cone: no exact feasible point found");
    if (!have_lower) best.lower_sq = Rat(0);
    best.gap = ball_volume(d) *
               (std::sqrt(best.upper_sq.get_d()) - std::sqrt(best.lower_sq.get_d()));
    if (best.lower_sq > best.upper_sq)
        throw std::logic_error("optimize_cone: certificate bounds crossed");
    best.simplices = p.simplices;
    res.cert = std::move(best);
    return res;
}

struct ThetaBounds {
    Rat lower_sq;
    Rat upper_sq;
    bool conditional = false;  // enumeration was incomplete
    std::vector<BoundCertificate> certificates;
};

// Theta_T bounds: the minimum over all representative cones. Conditional
// when the enumeration hit its limit before completing.
inline ThetaBounds theta_T(const EnumerationReport& report, const SolverOptions& opts = {}) {
    if (report.representatives.empty())
        throw std::invalid_argument("theta_T: report has no representatives");
    ThetaBounds out;
    out.conditional = !report.complete;
    for (const ConeRepresentative& rep : report.representatives) {
        OptimizeResult r = optimize_cone(rep.cone, opts);
        if (out.certificates.empty() || r.cert.upper_sq < out.upper_sq)
            out.upper_sq = r.cert.upper_sq;
        if (out.certificates.empty() || r.cert.lower_sq < out.lower_sq)
            out.lower_sq = r.cert.lower_sq;
        out.certificates.push_back(std::move(r.cert));
    }
    return out;
}

// ---- certificate text format: exact rationals plus the cells the z
// blocks refer to, so a reader can recheck every inequality ----

inline std::string format_certificate(const BoundCertificate& c) {
    std::ostringstream os;
    os << "certificate\n";
    os << "qstar\n" << format_symmat(c.qstar);
    os << "upper_sq " << rat_to_string(c.upper_sq) << "\n";
    os << "w\n" << format_symmat(c.w);
    os << "z " << c.z.size() << "\n";
    for (const SymMat& zi : c.z) os << format_symmat(zi);
    os << "lambda " << c.lambda.size() << "\n";
    for (const Rat& l : c.lambda) os << rat_to_string(l) << "\n";
    os << "lower_sq " << rat_to_string(c.lower_sq) << "\n";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", c.gap);
    os << "gap " << buf << "\n";
    os << "simplices " << c.simplices.size() << "\n";
    for (const std::vector<VecZ>& s : c.simplices) {
        os << "simplex " << s.size() << " " << (s.empty() ? 0 : s[0].size()) << "\n";
        for (const VecZ& v : s) {
            for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i].get_str();
            os << "\n";
        }
    }
    os << "end certificate\n";
    return os.str();
}

inline BoundCertificate parse_certificate(std::istream& is) {
    auto expect = [&](const char* want) {
        std::string got;
        if (!(is >> got) || got != want)
            throw std::invalid_argument(std::string("parse_certificate: expected '") + want +
                                        "'");
    };
    auto read_rat = [&]() -> Rat {
        std::string tok;
        if (!(is >> tok)) throw std::invalid_argument("parse_certificate: truncated rational");
        return parse_rat(tok);
    };
    expect("certificate");
    BoundCertificate c;
    expect("qstar");
    c.qstar = parse_symmat(is);
    expect("upper_sq");
    c.upper_sq = read_rat();
    expect("w");
    c.w = parse_symmat(is);
    expect("z");
    size_t nz = 0;
    if (!(is >> nz)) throw std::invalid_argument("parse_certificate: bad z count");
    for (size_t i = 0; i < nz; ++i) c.z.push_back(parse_symmat(is));
    expect("lambda");
    size_t nl = 0;
    if (!(is >> nl)) throw std::invalid_argument("parse_certificate: bad lambda count");
    for (size_t i = 0; i < nl; ++i) c.lambda.push_back(read_rat());
    expect("lower_sq");
    c.lower_sq = read_rat();
    expect("gap");
    if (!(is >> c.gap)) throw std::invalid_argument("parse_certificate: bad gap");
    expect("simplices");
    size_t ns = 0;
    if (!(is >> ns)) throw std::invalid_argument("parse_certificate: bad simplex count");
    for (size_t i = 0; i < ns; ++i) {
        expect("simplex");
        size_t nv = 0, dim = 0;
        if (!(is >> nv >> dim)) throw std::invalid_argument("parse_certificate: bad simplex");
        std::vector<VecZ> s;
        for (size_t v = 0; v < nv; ++v) {
            VecZ vert(dim);
            for (size_t k = 0; k < dim; ++k) {
                std::string tok;
                if (!(is >> tok))
                    throw std::invalid_argument("parse_certificate: truncated simplex");
                vert[k] = Int(tok);
            }
            s.push_back(std::move(vert));
        }
        c.simplices.push_back(std::move(s));
    }
    expect("end");
    expect("certificate");
    return c;
}

}  // namespace tcover
