#pragma once

// Batch front end shared by the command-line tool and its tests: run
// configuration, report rendering with outward decimal rounding, command
// dispatch, and independent re-checking of emitted reports.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tcover/catalog.hpp"
#include "tcover/covopt.hpp"
#include "tcover/numberfield.hpp"

namespace tcover {

struct RunConfig {
    std::string command;
    std::string form_path;
    std::string form2_path;
    std::string subspace_path;
    std::string field_path;
    std::string report_path;
    std::string out_path;  // empty: write to the stream given to dispatch
    std::string name;      // catalog entry, e.g. "A5^6"
    std::uint64_t seed = 1;
    int max_cones = 512;
    int max_tries = 4000;
    int max_newton = 2000;
    long max_den = 1L << 28;
    int threads = 0;  // echoed for reproducibility; results never depend on it
    int facet = -1;
    bool json = false;
    bool verify = false;  // re-check the produced report before exiting
    int verbosity = 1;
};

// ---- outward decimal rendering ----
// Printed enclosures must contain the certified interval: lower endpoints
// round down, upper endpoints round up, with a few-ulp guard against the
// scaling product itself landing on the wrong side of an integer.

inline std::string decimal_directed(double v, int digits, bool up) {
    double p = std::pow(10.0, digits);
    double scaled = v * p;
    for (int i = 0; i < 4; ++i)
        scaled = std::nextafter(scaled, up ? std::numeric_limits<double>::infinity()
                                           : -std::numeric_limits<double>::infinity());
    double r = (up ? std::ceil(scaled) : std::floor(scaled)) / p;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, r);
    return buf;
}

inline std::string interval_string(double lo, double hi, int digits) {
    return "[" + decimal_directed(lo, digits, false) + ", " + decimal_directed(hi, digits, true) +
           "]";
}

inline std::string theta_interval(int d, const Rat& lower_sq, const Rat& upper_sq,
                                  int digits = 6) {
    return interval_string(theta_from_sq(d, lower_sq), theta_from_sq(d, upper_sq), digits);
}

// ---- file helpers ----

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open input file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline SymMat load_form(const std::string& path) { return parse_symmat(read_text_file(path)); }
inline SubspaceT load_subspace(const std::string& path) {
    return parse_subspace(read_text_file(path));
}
inline NumberField load_field(const std::string& path) {
    return parse_field(read_text_file(path));
}

// catalog names: "A<d>" or "A<d>^<r>"
inline std::pair<int, int> parse_catalog_name(const std::string& name) {
    size_t i = 0;
    if (name.empty() || (name[0] != 'A' && name[0] != 'a'))
        throw std::invalid_argument("catalog: unknown name '" + name + "' (want A<d> or A<d>^<r>)");
    ++i;
    size_t caret = name.find('^', i);
    std::string ds = name.substr(i, caret == std::string::npos ? std::string::npos : caret - i);
    std::string rs = caret == std::string::npos ? "1" : name.substr(caret + 1);
    if (ds.empty() || rs.empty() ||
        ds.find_first_not_of("0123456789") != std::string::npos ||
        rs.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("catalog: unknown name '" + name + "' (want A<d> or A<d>^<r>)");
    return {std::stoi(ds), std::stoi(rs)};
}

namespace detail {

inline void write_run_header(std::ostream& os, const RunConfig& cfg) {
    os << "tcover run report\n";
    os << "command " << cfg.command << "\n";
    os << "seed " << cfg.seed << "\n";
    os << "max_cones " << cfg.max_cones << "\n";
    os << "max_tries " << cfg.max_tries << "\n";
    os << "max_newton " << cfg.max_newton << "\n";
    os << "max_den " << cfg.max_den << "\n";
    os << "threads " << cfg.threads << "\n";
}

inline SolverOptions solver_options(const RunConfig& cfg) {
    SolverOptions opts;
    opts.max_newton = cfg.max_newton;
    opts.max_denominator = cfg.max_den;
    return opts;
}

inline EnumerationLimits enumeration_limits(const RunConfig& cfg, std::ostream* err) {
    EnumerationLimits lim;
    lim.seed = cfg.seed;
    lim.max_tries = cfg.max_tries;
    lim.max_cones = cfg.max_cones;
    if (err && cfg.verbosity >= 1)
        lim.progress = [err](size_t done, size_t front, size_t classes) {
            if (done % 10 == 0)
                *err << "progress: explored " << done << " cones, frontier " << front
                     << ", classes " << classes << "\n";
        };
    return lim;
}

// ---- command bodies ----
// Each writes the text body and, when given a mirror object, the same
// data as JSON; bodies depend only on their explicit inputs so a reader
// can rebuild and compare them.

inline void delone_body(std::ostream& os, const SymMat& q, nlohmann::json* js) {
    DeloneSubdivision sub = delone_subdivision(q);
    CoveringDensity cd = covering_density(sub);
    Rat mu = inhomogeneous_minimum(sub);
    os << "form\n" << format_symmat(q);
    os << "triangulation " << (sub.is_triangulation ? "true" : "false") << "\n";
    os << "cells " << sub.cells.size() << "\n";
    for (size_t i = 0; i < sub.cells.size(); ++i)
        os << "cell " << i << " vertices " << sub.cells[i].verts.size() << " radius_sq "
           << rat_to_string(sub.cells[i].radius_sq) << "\n";
    os << "mu " << rat_to_string(mu) << "\n";
    os << "det " << rat_to_string(sym_det(q)) << "\n";
    os << "normalized_theta_sq " << rat_to_string(cd.normalized_sq) << "\n";
    os << "theta " << theta_interval(q.dim, cd.normalized_sq, cd.normalized_sq) << "\n";
    if (js) {
        (*js)["form"] = format_symmat(q);
        (*js)["triangulation"] = sub.is_triangulation;
        (*js)["cells"] = sub.cells.size();
        (*js)["mu"] = rat_to_string(mu);
        (*js)["det"] = rat_to_string(sym_det(q));
        (*js)["normalized_theta_sq"] = rat_to_string(cd.normalized_sq);
        (*js)["theta"] = theta_interval(q.dim, cd.normalized_sq, cd.normalized_sq);
    }
}

inline void cone_body(std::ostream& os, const SymMat& q, const SubspaceT& t,
                      nlohmann::json* js) {
    SecondaryCone sc = secondary_cone(delone_subdivision(q), t);
    os << "form\n" << format_symmat(q);
    os << "subspace\n" << format_subspace(t);
    os << "rigidity " << sc.rigidity_index << "\n";
    os << "generic " << (sc.rigidity_index == t.dim() ? "true" : "false") << "\n";
    os << "facets " << sc.facet_records.size() << "\n";
    os << "cone\n" << format_cone(sc.cone);
    if (js) {
        (*js)["form"] = format_symmat(q);
        (*js)["subspace"] = format_subspace(t);
        (*js)["rigidity"] = sc.rigidity_index;
        (*js)["generic"] = sc.rigidity_index == t.dim();
        (*js)["facets"] = sc.facet_records.size();
        (*js)["cone"] = format_cone(sc.cone);
    }
}

inline void flip_body(std::ostream& os, const SymMat& q, const SubspaceT& t, int facet,
                      nlohmann::json* js) {
    SecondaryCone sc = secondary_cone(delone_subdivision(q), t);
    if (facet < 0 || facet >= static_cast<int>(sc.facet_records.size()))
        throw std::invalid_argument("flip: facet index out of range");
    os << "form\n" << format_symmat(q);
    os << "subspace\n" << format_subspace(t);
    os << "facet " << facet << "\n";
    bool dead = is_dead_end(sc, facet);
    os << "status " << (dead ? "dead_end" : "flipped") << "\n";
    if (js) {
        (*js)["form"] = format_symmat(q);
        (*js)["subspace"] = format_subspace(t);
        (*js)["facet"] = facet;
        (*js)["status"] = dead ? "dead_end" : "flipped";
    }
    if (dead) return;
    DeloneSubdivision dn = flip(sc, facet, q);
    SecondaryCone scn = secondary_cone(dn, t);
    os << "neighbor_form\n" << format_symmat(dn.q);
    os << "neighbor_cells " << dn.cells.size() << "\n";
    os << "neighbor_rigidity " << scn.rigidity_index << "\n";
    if (js) {
        (*js)["neighbor_form"] = format_symmat(dn.q);
        (*js)["neighbor_cells"] = dn.cells.size();
        (*js)["neighbor_rigidity"] = scn.rigidity_index;
    }
}

inline int enumerate_body(std::ostream& os, const EnumerationReport& rep, nlohmann::json* js) {
    os << format_enumeration_report(rep);
    if (js) {
        (*js)["report"] = format_enumeration_report(rep);
        (*js)["representatives"] = rep.representatives.size();
        (*js)["dead_ends"] = rep.dead_end_count;
        (*js)["complete"] = rep.complete;
    }
    return rep.complete ? 0 : 2;
}

inline int optimize_body(std::ostream& os, const EnumerationReport& rep,
                         const SolverOptions& opts, nlohmann::json* js) {
    ThetaBounds bounds = theta_T(rep, opts);
    os << format_enumeration_report(rep);
    os << "certificates " << bounds.certificates.size() << "\n";
    for (const BoundCertificate& c : bounds.certificates) os << format_certificate(c);
    os << "theta_sq_lower " << rat_to_string(bounds.lower_sq) << "\n";
    os << "theta_sq_upper " << rat_to_string(bounds.upper_sq) << "\n";
    int d = rep.T.ambient();
    os << "theta " << theta_interval(d, bounds.lower_sq, bounds.upper_sq) << "\n";
    os << "status " << (bounds.conditional ? "conditional" : "complete") << "\n";
    if (js) {
        (*js)["report"] = format_enumeration_report(rep);
        nlohmann::json certs = nlohmann::json::array();
        for (const BoundCertificate& c : bounds.certificates)
            certs.push_back(format_certificate(c));
        (*js)["certificates"] = std::move(certs);
        (*js)["theta_sq_lower"] = rat_to_string(bounds.lower_sq);
        (*js)["theta_sq_upper"] = rat_to_string(bounds.upper_sq);
        (*js)["theta"] = theta_interval(d, bounds.lower_sq, bounds.upper_sq);
        (*js)["conditional"] = bounds.conditional;
    }
    return bounds.conditional ? 2 : 0;
}

inline int thinfield_body(std::ostream& os, const NumberField& k, const EnumerationReport& rep,
                          const SolverOptions& opts, nlohmann::json* js) {
    ThetaBounds bounds = theta_T(rep, opts);
    ThinReport tr = classify_thin(k, rep, bounds);
    os << format_field(k);
    os << "ratio_sq " << rat_to_string(tr.ratio_sq) << "\n";
    os << "t_value " << interval_string(tr.t_value, tr.t_value, 6) << "\n";
    os << format_enumeration_report(rep);
    os << "certificates " << bounds.certificates.size() << "\n";
    for (const BoundCertificate& c : bounds.certificates) os << format_certificate(c);
    os << "theta_sq_lower " << rat_to_string(bounds.lower_sq) << "\n";
    os << "theta_sq_upper " << rat_to_string(bounds.upper_sq) << "\n";
    os << "theta " << theta_interval(k.degree, bounds.lower_sq, bounds.upper_sq) << "\n";
    os << "verdict " << to_string(tr.verdict) << "\n";
    os << "status " << (rep.complete && !bounds.conditional ? "complete" : "conditional")
       << "\n";
    if (js) {
        (*js)["field"] = format_field(k);
        (*js)["ratio_sq"] = rat_to_string(tr.ratio_sq);
        (*js)["t_value"] = interval_string(tr.t_value, tr.t_value, 6);
        (*js)["report"] = format_enumeration_report(rep);
        nlohmann::json certs = nlohmann::json::array();
        for (const BoundCertificate& c : bounds.certificates)
            certs.push_back(format_certificate(c));
        (*js)["certificates"] = std::move(certs);
        (*js)["theta_sq_lower"] = rat_to_string(bounds.lower_sq);
        (*js)["theta_sq_upper"] = rat_to_string(bounds.upper_sq);
        (*js)["theta"] = theta_interval(k.degree, bounds.lower_sq, bounds.upper_sq);
        (*js)["verdict"] = to_string(tr.verdict);
        (*js)["complete"] = rep.complete && !bounds.conditional;
    }
    return rep.complete && !bounds.conditional ? 0 : 2;
}

inline void catalog_body(std::ostream& os, const std::string& name, nlohmann::json* js) {
    auto [d, r] = parse_catalog_name(name);
    QForm q = coxeter_form(d, r);
    os << "name " << name << "\n";
    os << "form\n" << format_symmat(q.mat());
    if (js) {
        (*js)["name"] = name;
        (*js)["form"] = format_symmat(q.mat());
    }
}

inline void autgroup_body(std::ostream& os, const SymMat& q, nlohmann::json* js) {
    MatrixGroup g = automorphism_group(q);
    os << "form\n" << format_symmat(q);
    os << "order " << g.elements.size() << "\n";
    if (js) {
        (*js)["form"] = format_symmat(q);
        (*js)["order"] = g.elements.size();
    }
}

inline void isometry_body(std::ostream& os, const SymMat& a, const SymMat& b,
                          nlohmann::json* js) {
    std::optional<Unimodular> u = isometry(a, b);
    os << "form\n" << format_symmat(a);
    os << "form2\n" << format_symmat(b);
    os << "isometric " << (u ? "true" : "false") << "\n";
    if (js) {
        (*js)["form"] = format_symmat(a);
        (*js)["form2"] = format_symmat(b);
        (*js)["isometric"] = static_cast<bool>(u);
    }
    if (!u) return;
    os << "map " << u->dim << "\n";
    for (int i = 0; i < u->dim; ++i) {
        for (int j = 0; j < u->dim; ++j) os << (j ? " " : "") << (*u)(i, j).get_str();
        os << "\n";
    }
    if (js) {
        std::ostringstream ms;
        for (int i = 0; i < u->dim; ++i) {
            for (int j = 0; j < u->dim; ++j) ms << (j ? " " : "") << (*u)(i, j).get_str();
            ms << "\n";
        }
        (*js)["map"] = ms.str();
    }
}

}  // namespace detail

// ---- verify: independent re-checks of a written report ----

namespace detail {

inline void expect_token(std::istream& is, const char* want, const char* who) {
    std::string got;
    if (!(is >> got) || got != want)
        throw std::invalid_argument(std::string(who) + ": expected '" + want + "'");
}

inline RunConfig parse_run_header(std::istream& is) {
    expect_token(is, "tcover", "verify");
    expect_token(is, "run", "verify");
    expect_token(is, "report", "verify");
    RunConfig cfg;
    expect_token(is, "command", "verify");
    is >> cfg.command;
    expect_token(is, "seed", "verify");
    is >> cfg.seed;
    expect_token(is, "max_cones", "verify");
    is >> cfg.max_cones;
    expect_token(is, "max_tries", "verify");
    is >> cfg.max_tries;
    expect_token(is, "max_newton", "verify");
    is >> cfg.max_newton;
    expect_token(is, "max_den", "verify");
    is >> cfg.max_den;
    expect_token(is, "threads", "verify");
    if (!(is >> cfg.threads)) throw std::invalid_argument("verify: truncated header");
    return cfg;
}

// body text = everything after the 8 header lines
inline std::string report_body(const std::string& text) {
    size_t pos = 0;
    for (int i = 0; i < 8; ++i) {
        pos = text.find('\n', pos);
        if (pos == std::string::npos) throw std::invalid_argument("verify: truncated header");
        ++pos;
    }
    return text.substr(pos);
}

// checks one certificate against the representative's cone data using
// plain exact arithmetic; appends human-readable problems
inline void check_certificate_arith(const BoundCertificate& c, const ConeRepresentative& rep,
                                    const SubspaceT& t, size_t index,
                                    std::vector<std::string>& problems) {
    auto fail = [&](const std::string& what) {
        problems.push_back("certificate " + std::to_string(index) + ": " + what);
    };
    int d = t.ambient();
    int m = t.dim();
    const std::vector<Vec>& ineqs = rep.cone.cone.inequalities;
    if (c.lambda.size() != ineqs.size()) {
        fail("lambda count does not match the cone inequalities");
        return;
    }
    if (c.z.size() != c.simplices.size()) {
        fail("z block count does not match the simplex list");
        return;
    }
    for (const Rat& l : c.lambda)
        if (sgn(l) < 0) fail("negative lambda multiplier");
    for (const SymMat& zi : c.z)
        if (zi.dim != d + 1 || definiteness(zi).kind == Definiteness::Indefinite)
            fail("z block is not positive semidefinite");
    if (!is_positive_definite(c.w)) fail("w is not positive definite");

    // every simplex must live inside one cell of the subdivision
    for (const std::vector<VecZ>& s : c.simplices) {
        bool found = false;
        for (const DeloneCell& cell : rep.cone.D.cells) {
            size_t hit = 0;
            for (const VecZ& v : s)
                for (const VecZ& w : cell.verts)
                    if (v == w) {
                        ++hit;
                        break;
                    }
            if (hit == s.size()) {
                found = true;
                break;
            }
        }
        if (!found) fail("simplex is not contained in a cell of the subdivision");
    }

    // stationarity: <W, A_k> + sum lambda_j g_jk + sum <Z_i, C_ik> = 0
    for (int k = 0; k < m; ++k) {
        Rat s = inner(c.w, t.basis()[k]);
        for (size_t j = 0; j < ineqs.size(); ++j) s += c.lambda[j] * ineqs[j][k];
        for (size_t b = 0; b < c.simplices.size(); ++b)
            s += inner(c.z[b], br_linear_part(t.basis()[k], c.simplices[b]));
        if (sgn(s) != 0) {
            fail("stationarity fails at coordinate " + std::to_string(k));
            break;
        }
    }

    Rat cc(0);
    for (const SymMat& zi : c.z) cc += zi(0, 0);
    cc *= 4;
    if (sgn(cc) <= 0) {
        fail("certificate constant is not positive");
        return;
    }
    if (c.lower_sq != sym_det(c.w) * rat_pow(Rat(d) / cc, d))
        fail("lower bound does not equal det(w) (d/c)^d");
    if (!t.contains(c.qstar)) {
        fail("qstar is not in the subspace");
        return;
    }
    if (!is_positive_definite(c.qstar)) {
        fail("qstar is not positive definite");
        return;
    }
    if (covering_density(c.qstar).normalized_sq != c.upper_sq)
        fail("upper bound does not equal the covering density of qstar");
    if (c.lower_sq > c.upper_sq) fail("bounds crossed");
}

struct ParsedBounds {
    EnumerationReport report;
    std::vector<BoundCertificate> certificates;
    Rat lower_sq, upper_sq;
    std::string status;
};

inline ParsedBounds parse_bounds_block(std::istream& is, const char* who) {
    ParsedBounds pb{parse_enumeration_report(is), {}, Rat(0), Rat(0), ""};
    expect_token(is, "certificates", who);
    size_t n = 0;
    if (!(is >> n)) throw std::invalid_argument(std::string(who) + ": bad certificate count");
    for (size_t i = 0; i < n; ++i) pb.certificates.push_back(parse_certificate(is));
    expect_token(is, "theta_sq_lower", who);
    std::string tok;
    is >> tok;
    pb.lower_sq = parse_rat(tok);
    expect_token(is, "theta_sq_upper", who);
    is >> tok;
    pb.upper_sq = parse_rat(tok);
    expect_token(is, "theta", who);
    std::getline(is, tok);  // rendered interval, informational
    expect_token(is, "status", who);
    if (!(is >> pb.status)) throw std::invalid_argument(std::string(who) + ": bad status");
    return pb;
}

inline void check_bounds_block(const ParsedBounds& pb, std::vector<std::string>& problems) {
    const std::vector<ConeRepresentative>& reps = pb.report.representatives;
    if (pb.certificates.size() != reps.size()) {
        problems.push_back("certificate count does not match the representatives");
        return;
    }
    for (size_t i = 0; i < reps.size(); ++i)
        check_certificate_arith(pb.certificates[i], reps[i], pb.report.T, i, problems);
    Rat lo(0), hi(0);
    for (size_t i = 0; i < pb.certificates.size(); ++i) {
        if (i == 0 || pb.certificates[i].lower_sq < lo) lo = pb.certificates[i].lower_sq;
        if (i == 0 || pb.certificates[i].upper_sq < hi) hi = pb.certificates[i].upper_sq;
    }
    if (!pb.certificates.empty() && (lo != pb.lower_sq || hi != pb.upper_sq))
        problems.push_back("theta_sq bounds are not the minimum over the certificates");
    bool complete_status = pb.status == "complete";
    if (pb.report.complete != complete_status)
        problems.push_back("status does not match the enumeration report");
}

}  // namespace detail

inline int verify_report_text(const std::string& text, std::ostream& out) {
    std::istringstream is(text);
    RunConfig stored = detail::parse_run_header(is);
    std::string body = detail::report_body(text);
    std::vector<std::string> problems;
    size_t checks = 0;

    auto compare_rebuilt = [&](const std::string& rebuilt) {
        ++checks;
        if (rebuilt != body) problems.push_back("body does not match its recomputation");
    };

    if (stored.command == "delone") {
        std::istringstream bs(body);
        detail::expect_token(bs, "form", "verify");
        SymMat q = parse_symmat(bs);
        std::ostringstream rb;
        detail::delone_body(rb, q, nullptr);
        compare_rebuilt(rb.str());
    } else if (stored.command == "cone") {
        std::istringstream bs(body);
        detail::expect_token(bs, "form", "verify");
        SymMat q = parse_symmat(bs);
        detail::expect_token(bs, "subspace", "verify");
        SubspaceT t = parse_subspace(bs);
        std::ostringstream rb;
        detail::cone_body(rb, q, t, nullptr);
        compare_rebuilt(rb.str());
    } else if (stored.command == "flip") {
        std::istringstream bs(body);
        detail::expect_token(bs, "form", "verify");
        SymMat q = parse_symmat(bs);
        detail::expect_token(bs, "subspace", "verify");
        SubspaceT t = parse_subspace(bs);
        detail::expect_token(bs, "facet", "verify");
        int facet = -1;
        bs >> facet;
        std::ostringstream rb;
        detail::flip_body(rb, q, t, facet, nullptr);
        compare_rebuilt(rb.str());
    } else if (stored.command == "catalog") {
        std::istringstream bs(body);
        detail::expect_token(bs, "name", "verify");
        std::string name;
        bs >> name;
        std::ostringstream rb;
        detail::catalog_body(rb, name, nullptr);
        compare_rebuilt(rb.str());
    } else if (stored.command == "autgroup") {
        std::istringstream bs(body);
        detail::expect_token(bs, "form", "verify");
        SymMat q = parse_symmat(bs);
        std::ostringstream rb;
        detail::autgroup_body(rb, q, nullptr);
        compare_rebuilt(rb.str());
    } else if (stored.command == "isometry") {
        std::istringstream bs(body);
        detail::expect_token(bs, "form", "verify");
        SymMat a = parse_symmat(bs);
        detail::expect_token(bs, "form2", "verify");
        SymMat b = parse_symmat(bs);
        detail::expect_token(bs, "isometric", "verify");
        std::string flag;
        bs >> flag;
        ++checks;
        if (flag == "true") {
            detail::expect_token(bs, "map", "verify");
            int dim = 0;
            bs >> dim;
            Unimodular u(dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) {
                    std::string tok;
                    if (!(bs >> tok)) throw std::invalid_argument("verify: truncated map");
                    u(i, j) = Int(tok);
                }
            if (!(transform(a, u) == b))
                problems.push_back("map does not carry the first form to the second");
        } else if (isometry(a, b).has_value()) {
            problems.push_back("forms are isometric but the report says otherwise");
        }
    } else if (stored.command == "enumerate") {
        std::istringstream bs(body);
        EnumerationReport rep = parse_enumeration_report(bs);  // recomputes every cone
        ++checks;
        if (format_enumeration_report(rep) != body)
            problems.push_back("report does not match its canonical re-rendering");
    } else if (stored.command == "optimize") {
        std::istringstream bs(body);
        detail::ParsedBounds pb = detail::parse_bounds_block(bs, "verify");
        checks += 1 + pb.certificates.size();
        detail::check_bounds_block(pb, problems);
    } else if (stored.command == "thinfield") {
        std::istringstream bs(body);
        NumberField k = parse_field(bs);  // revalidates the field data
        detail::expect_token(bs, "ratio_sq", "verify");
        std::string tok;
        bs >> tok;
        Rat ratio = parse_rat(tok);
        detail::expect_token(bs, "t_value", "verify");
        std::getline(bs, tok);
        detail::ParsedBounds pb = detail::parse_bounds_block(bs, "verify");
        detail::expect_token(bs, "verdict", "verify");
        std::string verdict;
        bs >> verdict;
        checks += 3 + pb.certificates.size();
        if (ratio != thin_ratio_sq(k)) problems.push_back("ratio_sq mismatch");
        detail::check_bounds_block(pb, problems);
        ThetaBounds bounds{pb.lower_sq, pb.upper_sq, !pb.report.complete, pb.certificates};
        ThinReport tr = classify_thin(k, pb.report, bounds);
        if (std::string(to_string(tr.verdict)) != verdict)
            problems.push_back("verdict does not match the recomputed classification");
    } else {
        throw std::invalid_argument("verify: unknown report command '" + stored.command + "'");
    }

    out << "kind " << stored.command << "\n";
    out << "checks " << checks << "\n";
    for (const std::string& p : problems) out << "problem " << p << "\n";
    out << (problems.empty() ? "verify ok" : "verify failed") << "\n";
    return problems.empty() ? 0 : 1;
}

inline int run_verify(const RunConfig& cfg, std::ostream& out) {
    out << "input " << cfg.report_path << "\n";
    return verify_report_text(read_text_file(cfg.report_path), out);
}

// ---- config files: "key value" lines, '#' comments; entries override flags ----

inline void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& val) {
    auto as_long = [&]() -> long {
        try {
            return std::stol(val);
        } catch (const std::exception&) {
            throw std::invalid_argument("config: bad number for '" + key + "'");
        }
    };
    if (key == "form") cfg.form_path = val;
    else if (key == "form2") cfg.form2_path = val;
    else if (key == "subspace") cfg.subspace_path = val;
    else if (key == "field") cfg.field_path = val;
    else if (key == "report") cfg.report_path = val;
    else if (key == "out") cfg.out_path = val;
    else if (key == "name") cfg.name = val;
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(as_long());
    else if (key == "max-cones" || key == "max_cones") cfg.max_cones = static_cast<int>(as_long());
    else if (key == "max-tries" || key == "max_tries") cfg.max_tries = static_cast<int>(as_long());
    else if (key == "max-newton" || key == "max_newton") cfg.max_newton = static_cast<int>(as_long());
    else if (key == "max-den" || key == "max_den") cfg.max_den = as_long();
    else if (key == "threads") cfg.threads = static_cast<int>(as_long());
    else if (key == "facet") cfg.facet = static_cast<int>(as_long());
    else if (key == "verbosity") cfg.verbosity = static_cast<int>(as_long());
    else if (key == "json") cfg.json = val == "true" || val == "1";
    else if (key == "verify") cfg.verify = val == "true" || val == "1";
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::istringstream is(read_text_file(path));
    std::string line;
    while (std::getline(is, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string key, val;
        if (!(ls >> key)) continue;
        if (!(ls >> val)) throw std::invalid_argument("config: missing value for '" + key + "'");
        apply_config_entry(cfg, key, val);
    }
}

// ---- dispatch ----

inline int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        auto need = [&](const std::string& path, const char* flag) {
            if (path.empty())
                throw std::invalid_argument(cfg.command + ": " + flag + " is required");
        };
        std::ostringstream body;
        nlohmann::json js;
        nlohmann::json* jp = cfg.json ? &js : nullptr;
        int code = 0;
        if (cfg.command == "delone") {
            need(cfg.form_path, "--form");
            detail::delone_body(body, load_form(cfg.form_path), jp);
        } else if (cfg.command == "cone") {
            need(cfg.form_path, "--form");
            need(cfg.subspace_path, "--subspace");
            detail::cone_body(body, load_form(cfg.form_path), load_subspace(cfg.subspace_path),
                              jp);
        } else if (cfg.command == "flip") {
            need(cfg.form_path, "--form");
            need(cfg.subspace_path, "--subspace");
            if (cfg.facet < 0) throw std::invalid_argument("flip: --facet is required");
            detail::flip_body(body, load_form(cfg.form_path), load_subspace(cfg.subspace_path),
                              cfg.facet, jp);
        } else if (cfg.command == "enumerate") {
            need(cfg.subspace_path, "--subspace");
            EnumerationReport rep = enumerate_cones(load_subspace(cfg.subspace_path),
                                                    detail::enumeration_limits(cfg, &err));
            code = detail::enumerate_body(body, rep, jp);
        } else if (cfg.command == "optimize") {
            if (cfg.report_path.empty() && cfg.subspace_path.empty())
                throw std::invalid_argument("optimize: --subspace or --report is required");
            EnumerationReport rep =
                !cfg.report_path.empty()
                    ? parse_enumeration_report(detail::report_body(read_text_file(cfg.report_path)))
                    : enumerate_cones(load_subspace(cfg.subspace_path),
                                      detail::enumeration_limits(cfg, &err));
            code = detail::optimize_body(body, rep, detail::solver_options(cfg), jp);
        } else if (cfg.command == "thinfield") {
            need(cfg.field_path, "--field");
            NumberField k = load_field(cfg.field_path);
            SubspaceT t = field_subspace(k);
            EnumerationReport rep = enumerate_cones(t, detail::enumeration_limits(cfg, &err));
            code = detail::thinfield_body(body, k, rep, detail::solver_options(cfg), jp);
        } else if (cfg.command == "catalog") {
            need(cfg.name, "a lattice name");
            detail::catalog_body(body, cfg.name, jp);
        } else if (cfg.command == "autgroup") {
            need(cfg.form_path, "--form");
            detail::autgroup_body(body, load_form(cfg.form_path), jp);
        } else if (cfg.command == "isometry") {
            need(cfg.form_path, "--form");
            need(cfg.form2_path, "--form2");
            detail::isometry_body(body, load_form(cfg.form_path), load_form(cfg.form2_path), jp);
        } else if (cfg.command == "verify") {
            need(cfg.report_path, "a report path");
            code = run_verify(cfg, body);
        } else {
            throw std::invalid_argument("unknown command '" + cfg.command + "'");
        }

        if (cfg.verify && cfg.command != "verify") {
            std::ostringstream produced;
            detail::write_run_header(produced, cfg);
            produced << body.str();
            std::ostringstream vout;
            if (verify_report_text(produced.str(), vout) != 0) {
                err << vout.str();
                return 1;
            }
            err << "verify ok\n";
        }

        std::ostringstream full;
        if (cfg.json) {
            js["command"] = cfg.command;
            js["seed"] = cfg.seed;
            js["max_cones"] = cfg.max_cones;
            js["max_tries"] = cfg.max_tries;
            js["max_newton"] = cfg.max_newton;
            js["max_den"] = cfg.max_den;
            js["threads"] = cfg.threads;
            js["exit"] = code;
            full << js.dump(2) << "\n";
        } else {
            detail::write_run_header(full, cfg);
            full << body.str();
        }
        if (cfg.out_path.empty()) {
            out << full.str();
        } else {
            std::ofstream f(cfg.out_path);
            if (!f) throw std::invalid_argument("cannot open output file: " + cfg.out_path);
            f << full.str();
        }
        return code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace tcover
