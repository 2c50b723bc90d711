#pragma once

// Exact arithmetic base layer: GMP-backed integers and canonical rationals,
// plus the handful of floor/ceil/sqrt helpers the enumeration code needs.

#include <gmpxx.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace tcover {

using Int = mpz_class;
using Rat = mpq_class;

inline int sign(const Int& a) { return sgn(a); }
inline int sign(const Rat& a) { return sgn(a); }

inline Int rat_num(const Rat& a) { return a.get_num(); }
inline Int rat_den(const Rat& a) { return a.get_den(); }

// Largest integer <= a.
inline Int rat_floor(const Rat& a) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    return q;
}

// Smallest integer >= a.
inline Int rat_ceil(const Rat& a) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
    return q;
}

// Floor of sqrt(n) for n >= 0.
inline Int isqrt_floor(const Int& n) {
    if (sgn(n) < 0) throw std::domain_error("isqrt_floor: negative argument");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline Rat rat_abs(const Rat& a) { return a < 0 ? Rat(-a) : a; }

inline double rat_to_double(const Rat& a) { return a.get_d(); }

// Parses "p/q" or "p"; whitespace-free token expected.
inline Rat parse_rat(const std::string& token) {
    if (token.empty()) throw std::invalid_argument("parse_rat: empty token");
    Rat r;
    if (r.set_str(token, 10) != 0)
        throw std::invalid_argument("parse_rat: bad rational '" + token + "'");
    if (sgn(Int(r.get_den())) == 0)
        throw std::invalid_argument("parse_rat: zero denominator in '" + token + "'");
    r.canonicalize();
    return r;
}

inline std::string rat_to_string(const Rat& a) { return a.get_str(); }

// Best rational approximation to x with denominator <= max_den, via the
// continued fraction expansion (convergents are optimal approximations).
inline Rat rat_from_double(double x, const Int& max_den) {
    if (max_den < 1) throw std::invalid_argument("rat_from_double: max_den < 1");
    Rat target(x);
    target.canonicalize();
    if (target.get_den() <= max_den) return target;
    Int p_prev = 0, q_prev = 1;  // h_{-2}/k_{-2}
    Int p_cur = 1, q_cur = 0;    // h_{-1}/k_{-1}; first step yields floor(x)/1
    Rat rem = target;
    while (true) {
        Int a = rat_floor(rem);
        Int p_next = a * p_cur + p_prev;
        Int q_next = a * q_cur + q_prev;
        if (q_next > max_den) break;
        p_prev = p_cur; q_prev = q_cur;
        p_cur = p_next; q_cur = q_next;
        Rat frac = rem - Rat(a);
        if (sgn(frac) == 0) break;
        rem = Rat(1) / frac;
    }
    return Rat(p_cur) / Rat(q_cur);
}

}  // namespace tcover
