#pragma once

// Finding a T-generic Delone subdivision by seeded random sampling and
// enumerating all T-inequivalent T-generic secondary cones by flip-graph
// traversal with exact equivalence tests.

#include <cstdint>
#include <deque>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tcover/delone.hpp"
#include "tcover/secondary.hpp"
#include "tcover/subspace.hpp"
#include "tcover/symmetry.hpp"

namespace tcover {

struct EnumerationLimits {
    std::uint64_t seed = 1;
    int max_tries = 4000;  // sampling budget for the generic start form
    int max_cones = 512;   // hard cap; traversal may not terminate otherwise
    // called after each frontier cone: (cones explored, frontier size, classes found)
    std::function<void(size_t, size_t, size_t)> progress;
};

struct ConeRepresentative {
    SecondaryCone cone;
    SymMat sample;  // exact interior point of the cone, positive definite
    Rat char_det;   // invariants of the characteristic form
    Rat lambda_sq;
    size_t shortest_count = 0;
};

struct EnumerationReport {
    SubspaceT T;
    std::vector<ConeRepresentative> representatives;
    int dead_end_count = 0;
    std::vector<std::string> crossings;
    bool complete = false;
};

// A random rational PD form in T whose subdivision is T-generic,
// deterministic for a given seed. Uniform rejection over a slowly widening
// integer box runs first; if it finds PD forms but no generic one, the
// second phase perturbs a known PD point, scaled up until the perturbation
// is small enough to keep definiteness and land in a full-dimensional cone.
inline std::pair<QForm, DeloneSubdivision> find_generic(const SubspaceT& t, std::uint64_t seed,
                                                        int max_tries = 4000) {
    if (t.dim() < 2) throw std::invalid_argument("find_generic: dim T must be at least 2");
    bool traceless = true;
    for (const SymMat& b : t.basis()) {
        Rat tr(0);
        for (int i = 0; i < b.dim; ++i) tr += b(i, i);
        if (sgn(tr) != 0) traceless = false;
    }
    if (traceless)
        throw std::runtime_error("find_generic: subspace contains no positive definite form");

    int m = t.dim();
    std::mt19937_64 rng(seed);
    std::optional<Vec> pd_point;
    auto consider = [&](const Vec& x) { return is_positive_definite(t.from_coords(x)); };

    // Deterministic PD candidates: the projected identity, the basis sum,
    // and the basis directions.
    {
        SymMat id(t.ambient());
        for (int i = 0; i < t.ambient(); ++i) id(i, i) = 1;
        std::vector<Vec> cands = {t.project_coords(id), Vec(m, Rat(1))};
        for (int k = 0; k < m; ++k) {
            Vec e(m, Rat(0));
            e[k] = 1;
            cands.push_back(std::move(e));
        }
        for (const Vec& x : cands)
            if (consider(x)) {
                pd_point = x;
                break;
            }
    }

    auto try_form = [&](const SymMat& q) -> std::optional<std::pair<QForm, DeloneSubdivision>> {
        DeloneSubdivision d = delone_subdivision(q);
        SecondaryCone sc = secondary_cone(d, t);
        if (sc.rigidity_index != m) return std::nullopt;
        return std::make_pair(QForm(q), std::move(d));
    };

    int phase1 = max_tries / 2;
    for (int tr = 0; tr < phase1; ++tr) {
        long h = 2 + tr / 16;
        std::uniform_int_distribution<long> coeff(-h, h);
        Vec x(m);
        for (int k = 0; k < m; ++k) x[k] = Rat(coeff(rng));
        SymMat q = t.from_coords(x);
        if (!is_positive_definite(q)) continue;
        if (!pd_point) pd_point = x;
        if (auto hit = try_form(q)) return std::move(*hit);
    }
    if (!pd_point)
        throw std::runtime_error("find_generic: no positive definite form found in the try budget");

    Vec base = vec_rational_normalize(*pd_point);
    Int scale(4);
    std::uniform_int_distribution<long> delta(-2, 2);
    for (int tr = phase1; tr < max_tries; ++tr) {
        Vec x(m);
        for (int k = 0; k < m; ++k) x[k] = Rat(scale) * base[k] + Rat(delta(rng));
        SymMat q = t.from_coords(x);
        if (!is_positive_definite(q)) {
            scale *= 2;
            continue;
        }
        if (auto hit = try_form(q)) return std::move(*hit);
    }
    throw std::runtime_error("find_generic: no T-generic form found in the try budget");
}

// The ray sum, mapped back to a form: an exact relative-interior point.
inline SymMat interior_form(const SecondaryCone& sc) {
    Vec x(sc.cone.ambient, Rat(0));
    for (const Vec& r : sc.cone.rays)
        for (int i = 0; i < sc.cone.ambient; ++i) x[i] += r[i];
    return sc.T.from_coords(x);
}

namespace detail {

struct ConeInvariants {
    int rigidity = 0;
    size_t rays = 0;
    size_t facets = 0;
    Rat char_det;
    Rat lambda_sq;
    size_t shortest_count = 0;

    bool operator==(const ConeInvariants& o) const {
        return rigidity == o.rigidity && rays == o.rays && facets == o.facets &&
               char_det == o.char_det && lambda_sq == o.lambda_sq &&
               shortest_count == o.shortest_count;
    }
};

inline ConeInvariants cone_invariants(const SecondaryCone& sc, const SubspaceT& t) {
    ConeInvariants inv;
    inv.rigidity = sc.rigidity_index;
    inv.rays = sc.cone.rays.size();
    inv.facets = sc.facet_records.size();
    SymMat cf = characteristic_form(sc.cone, t);
    inv.char_det = sym_det(cf);
    ShortestVectors sv = shortest_vectors(cf);
    inv.lambda_sq = sv.lambda_sq;
    inv.shortest_count = sv.vectors.size();
    return inv;
}

// Secondary cones always carry both descriptions, so their text form is
// the four sections in fixed order; reading them explicitly keeps the
// report stream position exact.
inline PolyCone parse_cone_block(std::istream& is) {
    PolyCone c;
    std::string kw;
    if (!(is >> kw >> c.ambient) || kw != "ambient" || c.ambient < 1)
        throw std::invalid_argument("parse_cone_block: expected 'ambient k'");
    auto section = [&](const char* name, std::vector<Vec>& rows) {
        int n = 0;
        if (!(is >> kw >> n) || kw != name || n < 0)
            throw std::invalid_argument(std::string("parse_cone_block: expected section ") + name);
        for (int i = 0; i < n; ++i) {
            Vec row(c.ambient);
            for (int j = 0; j < c.ambient; ++j) {
                std::string tok;
                if (!(is >> tok)) throw std::invalid_argument("parse_cone_block: truncated section");
                row[j] = parse_rat(tok);
            }
            rows.push_back(std::move(row));
        }
    };
    section("equalities", c.equalities);
    section("inequalities", c.inequalities);
    section("rays", c.rays);
    section("lineality", c.lineality);
    c.has_h = true;
    c.has_v = true;
    return c;
}

}  // namespace detail

// Algorithm: breadth-first flip-graph traversal from one generic cone.
// Every facet of every representative is either a certified dead-end or
// crossed; new cones are kept iff t_equivalent rejects them against all
// stored representatives. Stops early with complete = false when max_cones
// is reached, since some subspaces have infinitely many cones.
inline EnumerationReport enumerate_cones(const SubspaceT& t, const EnumerationLimits& limits = {}) {
    if (limits.max_cones < 1)
        throw std::invalid_argument("enumerate_cones: max_cones must be positive");
    auto [q0, d0] = find_generic(t, limits.seed, limits.max_tries);
    (void)q0;

    EnumerationReport rep{t, {}, 0, {}, false};
    std::vector<detail::ConeInvariants> invariants;

    auto add_representative = [&](SecondaryCone sc) -> int {
        detail::ConeInvariants inv = detail::cone_invariants(sc, t);
        SymMat sample = interior_form(sc);
        if (!is_positive_definite(sample))
            throw std::logic_error("enumerate_cones: interior sample is not positive definite");
        rep.representatives.push_back(
            {std::move(sc), std::move(sample), inv.char_det, inv.lambda_sq, inv.shortest_count});
        invariants.push_back(std::move(inv));
        return static_cast<int>(rep.representatives.size()) - 1;
    };

    auto match = [&](const SecondaryCone& sc) -> int {
        detail::ConeInvariants inv = detail::cone_invariants(sc, t);
        for (size_t i = 0; i < rep.representatives.size(); ++i) {
            if (!(invariants[i] == inv)) continue;
            if (t_equivalent(rep.representatives[i].cone, sc, t)) return static_cast<int>(i);
        }
        return -1;
    };

    add_representative(secondary_cone(d0, t));
    std::deque<int> frontier = {0};
    size_t explored = 0;
    while (!frontier.empty()) {
        int ci = frontier.front();
        frontier.pop_front();
        if (limits.progress)
            limits.progress(++explored, frontier.size(), rep.representatives.size());
        SecondaryCone sc = rep.representatives[ci].cone;
        SymMat sample = rep.representatives[ci].sample;
        std::string tag = "cone " + std::to_string(ci) + " facet ";
        for (size_t fi = 0; fi < sc.facet_records.size(); ++fi) {
            std::string line = tag + std::to_string(fi) + ": ";
            if (is_dead_end(sc, static_cast<int>(fi))) {
                ++rep.dead_end_count;
                rep.crossings.push_back(line + "dead end");
                continue;
            }
            DeloneSubdivision dn = flip(sc, static_cast<int>(fi), sample);
            SecondaryCone scn = secondary_cone(dn, t);
            if (scn.rigidity_index != t.dim())
                throw std::logic_error("enumerate_cones: flip produced a non-generic cone");
            int hit = match(scn);
            if (hit >= 0) {
                rep.crossings.push_back(line + "equivalent to cone " + std::to_string(hit));
                continue;
            }
            if (static_cast<int>(rep.representatives.size()) >= limits.max_cones) {
                rep.crossings.push_back(line + "cone limit reached");
                rep.complete = false;
                return rep;
            }
            int ni = add_representative(std::move(scn));
            frontier.push_back(ni);
            rep.crossings.push_back(line + "new cone " + std::to_string(ni));
        }
    }
    rep.complete = true;
    return rep;
}

// ---- text format: header, subspace, representative blocks, crossing log ----

inline std::string format_enumeration_report(const EnumerationReport& rep) {
    std::ostringstream os;
    os << "tcover enumeration report\n";
    os << "status " << (rep.complete ? "complete" : "partial") << "\n";
    os << "representatives " << rep.representatives.size() << "\n";
    os << "dead_ends " << rep.dead_end_count << "\n";
    os << "crossings " << rep.crossings.size() << "\n";
    os << "subspace\n" << format_subspace(rep.T);
    for (size_t i = 0; i < rep.representatives.size(); ++i) {
        const ConeRepresentative& r = rep.representatives[i];
        os << "representative " << i << "\n";
        os << "rigidity " << r.cone.rigidity_index << "\n";
        os << "sample\n" << format_symmat(r.sample);
        os << "cone\n" << format_cone(r.cone.cone);
    }
    os << "log\n";
    for (const std::string& line : rep.crossings) os << line << "\n";
    os << "end\n";
    return os.str();
}

// Rebuilds each representative from its exact sample form, then checks the
// recomputed cone against the stored one.
inline EnumerationReport parse_enumeration_report(std::istream& is) {
    auto expect = [&](const std::string& want) {
        std::string got;
        if (!(is >> got) || got != want)
            throw std::invalid_argument("parse_enumeration_report: expected '" + want + "'");
    };
    expect("tcover");
    expect("enumeration");
    expect("report");
    expect("status");
    std::string status;
    is >> status;
    if (status != "complete" && status != "partial")
        throw std::invalid_argument("parse_enumeration_report: bad status");
    size_t nrep = 0, ncross = 0;
    int ndead = 0;
    expect("representatives");
    is >> nrep;
    expect("dead_ends");
    is >> ndead;
    expect("crossings");
    is >> ncross;
    expect("subspace");
    SubspaceT t = parse_subspace(is);
    EnumerationReport rep{t, {}, ndead, {}, status == "complete"};
    for (size_t i = 0; i < nrep; ++i) {
        expect("representative");
        size_t idx = 0;
        is >> idx;
        if (idx != i) throw std::invalid_argument("parse_enumeration_report: block out of order");
        expect("rigidity");
        int rig = 0;
        is >> rig;
        expect("sample");
        SymMat sample = parse_symmat(is);
        expect("cone");
        PolyCone stored = detail::parse_cone_block(is);
        SecondaryCone sc = secondary_cone(delone_subdivision(sample), t);
        if (sc.rigidity_index != rig || sc.cone.rays != stored.rays)
            throw std::invalid_argument("parse_enumeration_report: cone does not match its sample");
        detail::ConeInvariants inv = detail::cone_invariants(sc, t);
        rep.representatives.push_back(
            {std::move(sc), std::move(sample), inv.char_det, inv.lambda_sq, inv.shortest_count});
    }
    expect("log");
    is.ignore(1);
    for (size_t i = 0; i < ncross; ++i) {
        std::string line;
        if (!std::getline(is, line))
            throw std::invalid_argument("parse_enumeration_report: truncated log");
        rep.crossings.push_back(line);
    }
    expect("end");
    return rep;
}

inline EnumerationReport parse_enumeration_report(const std::string& text) {
    std::istringstream is(text);
    return parse_enumeration_report(is);
}

}  // namespace tcover
