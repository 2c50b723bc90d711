#pragma once

// Totally real number fields with a fixed integral basis: exact trace
// forms via multiplication matrices, total positivity by Sturm root
// isolation, the trace-form subspace T, and the thinness verdict from
// certified covering bounds.

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tcover/covopt.hpp"

namespace tcover {

// Field elements are coordinate vectors in the power basis 1, x, ...,
// x^(degree-1); the integral basis is given in the same coordinates.
struct NumberField {
    std::string label;
    std::vector<Int> min_poly;  // coefficients c0..cn, monic
    int degree = 0;
    std::vector<Vec> basis;
    Int disc;
};

namespace detail {

// ---- rational polynomials, coefficient index = power ----

using RPoly = std::vector<Rat>;

inline void rpoly_trim(RPoly& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

inline int rpoly_deg(const RPoly& p) { return static_cast<int>(p.size()) - 1; }

inline Rat rpoly_eval(const RPoly& p, const Rat& x) {
    Rat v(0);
    for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

inline RPoly rpoly_deriv(const RPoly& p) {
    RPoly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(Rat(static_cast<long>(i)) * p[i]);
    rpoly_trim(d);
    return d;
}

inline RPoly rpoly_mul(const RPoly& a, const RPoly& b) {
    if (a.empty() || b.empty()) return {};
    RPoly c(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    rpoly_trim(c);
    return c;
}

inline RPoly rpoly_rem(RPoly a, const RPoly& b) {
    int db = rpoly_deg(b);
    Rat lead = b[db];
    while (rpoly_deg(a) >= db) {
        Rat f = a.back() / lead;
        int shift = rpoly_deg(a) - db;
        for (int i = 0; i <= db; ++i) a[shift + i] -= f * b[i];
        rpoly_trim(a);
    }
    return a;
}

inline RPoly rpoly_gcd(RPoly a, RPoly b) {
    rpoly_trim(a);
    rpoly_trim(b);
    while (!b.empty()) {
        RPoly r = rpoly_rem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rat lead = a.back();
        for (Rat& c : a) c /= lead;
    }
    return a;
}

inline std::vector<RPoly> sturm_chain(const RPoly& f) {
    std::vector<RPoly> chain{f, rpoly_deriv(f)};
    while (rpoly_deg(chain.back()) >= 1) {
        RPoly r = rpoly_rem(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        for (Rat& c : r) c = -c;
        chain.push_back(std::move(r));
    }
    return chain;
}

inline int sign_changes(const std::vector<RPoly>& chain, const Rat& x) {
    int changes = 0, prev = 0;
    for (const RPoly& p : chain) {
        int s = sgn(rpoly_eval(p, x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

// Number of distinct real roots in (a, b].
inline int sturm_count(const std::vector<RPoly>& chain, const Rat& a, const Rat& b) {
    return sign_changes(chain, a) - sign_changes(chain, b);
}

inline Rat cauchy_bound(const RPoly& f) {
    Rat m(0);
    for (size_t i = 0; i + 1 < f.size(); ++i) {
        Rat c = abs(f[i] / f.back());
        if (c > m) m = c;
    }
    return m + 1;
}

// ---- arithmetic mod the minimal polynomial ----

inline RPoly min_rpoly(const NumberField& k) {
    RPoly f;
    for (const Int& c : k.min_poly) f.push_back(Rat(c));
    return f;
}

inline Vec field_reduce(const NumberField& k, RPoly p) {
    int n = k.degree;
    for (int i = rpoly_deg(p); i >= n; --i) {
        if (sgn(p[i]) == 0) continue;
        for (int j = 0; j < n; ++j) p[i - n + j] -= p[i] * Rat(k.min_poly[j]);
        p[i] = 0;
    }
    Vec out(n, Rat(0));
    for (int i = 0; i < n && i < static_cast<int>(p.size()); ++i) out[i] = p[i];
    return out;
}

inline Vec field_mul(const NumberField& k, const Vec& a, const Vec& b) {
    return field_reduce(k, rpoly_mul(RPoly(a.begin(), a.end()), RPoly(b.begin(), b.end())));
}

inline Rat field_trace(const NumberField& k, const Vec& a) {
    // trace of the multiplication-by-a matrix in the power basis
    Rat tr(0);
    Vec cur = a;
    for (int j = 0; j < k.degree; ++j) {
        if (j > 0) {
            RPoly shifted(k.degree + 1, Rat(0));
            for (int i = 0; i < k.degree; ++i) shifted[i + 1] = cur[i];
            cur = field_reduce(k, std::move(shifted));
        }
        tr += cur[j];
    }
    return tr;
}

}  // namespace detail

inline SymMat trace_form(const NumberField& k, const Vec& alpha) {
    if (static_cast<int>(alpha.size()) != k.degree)
        throw std::invalid_argument("trace_form: element size mismatch");
    if (detail::vec_is_zero(alpha)) throw std::invalid_argument("trace_form: alpha is zero");
    std::vector<Vec> scaled;
    for (const Vec& w : k.basis) scaled.push_back(detail::field_mul(k, alpha, w));
    SymMat g(k.degree);
    for (int i = 0; i < k.degree; ++i)
        for (int j = 0; j <= i; ++j)
            g(i, j) = detail::field_trace(k, detail::field_mul(k, scaled[i], k.basis[j]));
    return g;
}

// True iff alpha is positive under every real embedding: Sturm isolation
// of the roots of the minimal polynomial, then interval refinement until
// the sign of alpha's polynomial is decided on each isolating interval.
inline bool is_totally_positive(const NumberField& k, const Vec& alpha) {
    if (static_cast<int>(alpha.size()) != k.degree)
        throw std::invalid_argument("is_totally_positive: element size mismatch");
    detail::RPoly g(alpha.begin(), alpha.end());
    detail::rpoly_trim(g);
    if (g.empty()) return false;
    detail::RPoly f = detail::min_rpoly(k);
    if (detail::rpoly_deg(detail::rpoly_gcd(f, g)) > 0) return false;

    std::vector<detail::RPoly> cf = detail::sturm_chain(f);
    std::vector<detail::RPoly> cg = detail::sturm_chain(g);
    Rat bound = detail::cauchy_bound(f);
    std::vector<std::pair<Rat, Rat>> isolated;
    std::vector<std::pair<Rat, Rat>> work{{-bound, bound}};
    while (!work.empty()) {
        auto [a, b] = work.back();
        work.pop_back();
        int c = detail::sturm_count(cf, a, b);
        if (c == 0) continue;
        if (c == 1) {
            isolated.emplace_back(a, b);
            continue;
        }
        Rat m = (a + b) / 2;
        work.emplace_back(a, m);
        work.emplace_back(m, b);
    }
    for (auto& [a, b] : isolated) {
        while (detail::sturm_count(cg, a, b) > 0) {
            Rat m = (a + b) / 2;
            if (detail::sturm_count(cf, a, m) == 1)
                b = m;
            else
                a = m;
        }
        if (sgn(detail::rpoly_eval(g, b)) <= 0) return false;
    }
    return true;
}

// Builds and fully validates a field: monic squarefree totally real
// minimal polynomial, a multiplication-closed basis, and a trace form at
// alpha = 1 whose determinant is the claimed discriminant.
inline NumberField number_field(std::string label, std::vector<Int> min_poly,
                                std::vector<Vec> basis, Int disc) {
    NumberField k;
    k.label = std::move(label);
    k.min_poly = std::move(min_poly);
    k.degree = static_cast<int>(k.min_poly.size()) - 1;
    k.basis = std::move(basis);
    k.disc = std::move(disc);
    if (k.degree < 2) throw std::invalid_argument("number_field: degree must be at least 2");
    if (k.min_poly.back() != 1) throw std::invalid_argument("number_field: polynomial not monic");

    detail::RPoly f = detail::min_rpoly(k);
    if (detail::rpoly_deg(detail::rpoly_gcd(f, detail::rpoly_deriv(f))) > 0)
        throw std::invalid_argument("number_field: polynomial not squarefree");
    Rat bound = detail::cauchy_bound(f);
    if (detail::sturm_count(detail::sturm_chain(f), -bound, bound) != k.degree)
        throw std::invalid_argument("number_field: polynomial not totally real");

    if (static_cast<int>(k.basis.size()) != k.degree)
        throw std::invalid_argument("number_field: basis size mismatch");
    Mat bm(k.degree, k.degree);
    for (int j = 0; j < k.degree; ++j) {
        if (static_cast<int>(k.basis[j].size()) != k.degree)
            throw std::invalid_argument("number_field: basis element size mismatch");
        for (int i = 0; i < k.degree; ++i) bm(i, j) = k.basis[j][i];
    }
    std::optional<Mat> bm_inv = mat_inverse(bm);
    if (!bm_inv) throw std::invalid_argument("number_field: basis is linearly dependent");
    for (int i = 0; i < k.degree; ++i)
        for (int j = 0; j <= i; ++j) {
            Vec prod = detail::field_mul(k, k.basis[i], k.basis[j]);
            Vec coords = mat_apply(*bm_inv, prod);
            for (const Rat& c : coords)
                if (c.get_den() != 1)
                    throw std::invalid_argument("number_field: basis not multiplication-closed");
        }

    Vec one(k.degree, Rat(0));
    one[0] = 1;
    if (sym_det(trace_form(k, one)) != Rat(k.disc))
        throw std::invalid_argument("number_field: trace form determinant is not the discriminant");
    return k;
}

// The subspace spanned by the trace forms of alpha_k = c_k + omega_k,
// with c_k the smallest nonnegative integer shift into total positivity.
inline SubspaceT field_subspace(const NumberField& k) {
    std::vector<SymMat> forms;
    for (const Vec& w : k.basis) {
        Vec alpha = w;
        int shift = 0;
        while (!is_totally_positive(k, alpha)) {
            alpha[0] += 1;
            if (++shift > 10000)
                throw std::logic_error("field_subspace: no totally positive shift found");
        }
        forms.push_back(trace_form(k, alpha));
    }
    try {
        return SubspaceT(k.degree, std::move(forms));
    } catch (const std::invalid_argument&) {
        throw std::logic_error("field_subspace: trace forms are linearly dependent");
    }
}

// n^n / d_K: the square of t(K) divided by the square of the unit ball
// volume, kept rational so verdict comparisons stay exact.
inline Rat thin_ratio_sq(const NumberField& k) {
    return detail::rat_pow(Rat(k.degree), k.degree) / Rat(k.disc);
}

inline double thin_bound(const NumberField& k) {
    return ball_volume(k.degree) * std::sqrt(thin_ratio_sq(k).get_d());
}

enum class ThinVerdict { Thin, WeaklyThin, NotThin, Inconclusive };

inline const char* to_string(ThinVerdict v) {
    switch (v) {
        case ThinVerdict::Thin: return "thin";
        case ThinVerdict::WeaklyThin: return "weakly_thin";
        case ThinVerdict::NotThin: return "not_thin";
        default: return "inconclusive";
    }
}

struct ThinReport {
    ThinVerdict verdict = ThinVerdict::Inconclusive;
    Rat ratio_sq;       // n^n / d_K
    double t_value = 0.0;
    ThetaBounds bounds;
};

// Compares the certified covering bounds over the field subspace against
// t(K), squared and rational on both sides. Incomplete enumeration can
// only ever yield "inconclusive".
inline ThinReport classify_thin(const NumberField& k, const EnumerationReport& report,
                                const ThetaBounds& bounds) {
    SubspaceT t = field_subspace(k);
    if (report.T.ambient() != t.ambient() || !(report.T.basis() == t.basis()))
        throw std::invalid_argument("classify_thin: report subspace does not match the field");
    ThinReport out;
    out.ratio_sq = thin_ratio_sq(k);
    out.t_value = thin_bound(k);
    out.bounds = bounds;
    if (!report.complete || bounds.conditional) return out;
    if (bounds.upper_sq < out.ratio_sq)
        out.verdict = ThinVerdict::Thin;
    else if (bounds.lower_sq > out.ratio_sq)
        out.verdict = ThinVerdict::NotThin;
    else if (bounds.lower_sq == out.ratio_sq && bounds.upper_sq == out.ratio_sq)
        out.verdict = ThinVerdict::WeaklyThin;
    return out;
}

// ---- fixtures ----

inline std::vector<long> table_discriminants() {
    return {5, 8, 12, 13, 17, 21, 24, 49, 81, 148, 169, 725, 1125, 1600, 1957, 2000, 14641};
}

inline NumberField table_field(long disc) {
    auto power_basis = [](int n) {
        std::vector<Vec> b(n, Vec(n, Rat(0)));
        for (int i = 0; i < n; ++i) b[i][i] = 1;
        return b;
    };
    switch (disc) {
        case 5:
            return number_field("Q[x]/(x^2-x-1)", {-1, -1, 1}, power_basis(2), 5);
        case 8:
            return number_field("Q[x]/(x^2-2)", {-2, 0, 1}, power_basis(2), 8);
        case 12:
            return number_field("Q[x]/(x^2-3)", {-3, 0, 1}, power_basis(2), 12);
        case 13:
            return number_field("Q[x]/(x^2-x-3)", {-3, -1, 1}, power_basis(2), 13);
        case 17:
            return number_field("Q[x]/(x^2-x-4)", {-4, -1, 1}, power_basis(2), 17);
        case 21:
            return number_field("Q[x]/(x^2-x-5)", {-5, -1, 1}, power_basis(2), 21);
        case 24:
            return number_field("Q[x]/(x^2-6)", {-6, 0, 1}, power_basis(2), 24);
        case 49:
            return number_field("Q[x]/(x^3+x^2-2x-1)", {-1, -2, 1, 1}, power_basis(3), 49);
        case 81:
            return number_field("Q[x]/(x^3-3x+1)", {1, -3, 0, 1}, power_basis(3), 81);
        case 148:
            return number_field("Q[x]/(x^3+x^2-3x-1)", {-1, -3, 1, 1}, power_basis(3), 148);
        case 169:
            return number_field("Q[x]/(x^3+x^2-4x+1)", {1, -4, 1, 1}, power_basis(3), 169);
        case 725:
            return number_field("Q[x]/(x^4-x^3-3x^2+x+1)", {1, 1, -3, -1, 1}, power_basis(4), 725);
        case 1125:
            return number_field("Q[x]/(x^4-x^3-4x^2+4x+1)", {1, 4, -4, -1, 1}, power_basis(4),
                                1125);
        case 1600:
            return number_field(
                "Q[x]/(x^4+2x^3-5x^2-6x-1)", {-1, -6, -5, 2, 1},
                {Vec{Rat(1), Rat(0), Rat(0), Rat(0)},
                 Vec{Rat(-7, 3), Rat(-13, 3), Rat(1), Rat(2, 3)},
                 Vec{Rat(7, 3), Rat(10, 3), Rat(-1), Rat(-2, 3)},
                 Vec{Rat(-8, 3), Rat(-5, 3), Rat(1), Rat(1, 3)}},
                1600);
        case 1957:
            return number_field("Q[x]/(x^4-4x^2-x+1)", {1, -1, -4, 0, 1}, power_basis(4), 1957);
        case 2000:
            return number_field("Q[x]/(x^4-5x^2+5)", {5, 0, -5, 0, 1}, power_basis(4), 2000);
        case 14641:
            return number_field("Q[x]/(x^5+x^4-4x^3-3x^2+3x+1)", {1, 3, -3, -4, 1, 1},
                                power_basis(5), 14641);
        default:
            throw std::invalid_argument("table_field: unknown discriminant");
    }
}

// ---- text format ----
// "field <label>", "poly <n> <c0..cn>", "basis" + n rows of n rationals,
// "disc <d>".

inline std::string format_field(const NumberField& k) {
    std::ostringstream os;
    os << "field " << k.label << "\n";
    os << "poly " << k.degree;
    for (const Int& c : k.min_poly) os << " " << c.get_str();
    os << "\nbasis\n";
    for (const Vec& w : k.basis) {
        for (int i = 0; i < k.degree; ++i) os << (i ? " " : "") << rat_to_string(w[i]);
        os << "\n";
    }
    os << "disc " << k.disc.get_str() << "\n";
    return os.str();
}

inline NumberField parse_field(std::istream& is) {
    std::string kw, label;
    if (!(is >> kw >> label) || kw != "field")
        throw std::invalid_argument("parse_field: expected 'field <label>'");
    int n = 0;
    if (!(is >> kw >> n) || kw != "poly" || n < 2)
        throw std::invalid_argument("parse_field: expected 'poly <degree>'");
    std::vector<Int> poly(n + 1);
    for (Int& c : poly) {
        std::string tok;
        if (!(is >> tok)) throw std::invalid_argument("parse_field: truncated polynomial");
        c = Int(tok);
    }
    if (!(is >> kw) || kw != "basis") throw std::invalid_argument("parse_field: expected 'basis'");
    std::vector<Vec> basis(n, Vec(n));
    for (Vec& w : basis)
        for (Rat& c : w) {
            std::string tok;
            if (!(is >> tok)) throw std::invalid_argument("parse_field: truncated basis");
            c = parse_rat(tok);
        }
    std::string dtok;
    if (!(is >> kw >> dtok) || kw != "disc")
        throw std::invalid_argument("parse_field: expected 'disc <d>'");
    return number_field(std::move(label), std::move(poly), std::move(basis), Int(dtok));
}

inline NumberField parse_field(const std::string& text) {
    std::istringstream is(text);
    return parse_field(is);
}

}  // namespace tcover
