#pragma once

// Named lattice constructors: the root lattice A_d, the Coxeter lattices
// A_d^r, explicit lattice bases with their Gram forms, and lamination of
// a form family into one dimension higher.

#include <stdexcept>
#include <utility>
#include <vector>

#include "tcover/qform.hpp"
#include "tcover/subspace.hpp"

namespace tcover {

struct LatticeBasis {
    int dim = 0;
    Mat basis;  // columns generate the lattice, possibly in a larger space
    QForm gram;
};

inline LatticeBasis lattice_basis(Mat b) {
    if (b.cols < 1 || b.rows < b.cols)
        throw std::invalid_argument("lattice_basis: need at least as many rows as columns");
    if (mat_rank(b) != b.cols)
        throw std::invalid_argument("lattice_basis: columns are linearly dependent");
    SymMat g(b.cols);
    for (int i = 0; i < b.cols; ++i)
        for (int j = 0; j <= i; ++j) {
            Rat s(0);
            for (int k = 0; k < b.rows; ++k) s += b(k, i) * b(k, j);
            g(i, j) = s;
        }
    int dim = b.cols;
    return {dim, std::move(b), QForm(std::move(g))};
}

// Gram form of the Coxeter lattice A_d^r: the root lattice A_d extended
// by the glue vector w = (1/r) sum(e_i) - (e_1 + ... + e_m), m = (d+1)/r.
// The basis is the first d-1 roots e_i - e_(i+1) plus w (just the roots
// for r = 1), and the whole form is scaled by r^2 to stay integral.
inline QForm coxeter_form(int d, int r) {
    if (d < 1) throw std::invalid_argument("coxeter_form: dimension must be positive");
    if (r < 1 || (d + 1) % r != 0)
        throw std::invalid_argument("coxeter_form: r must divide d+1");
    SymMat g(d);
    if (r == 1) {
        for (int i = 0; i < d; ++i) {
            g(i, i) = 2;
            if (i > 0) g(i, i - 1) = -1;
        }
        return QForm(std::move(g));
    }
    int m = (d + 1) / r;
    for (int i = 0; i + 1 < d; ++i) {
        g(i, i) = 2;
        if (i > 0) g(i, i - 1) = -1;
    }
    for (int i = 0; i + 1 < d; ++i) g(d - 1, i) = (i + 1 == m) ? Rat(-1) : Rat(0);
    g(d - 1, d - 1) = Rat(static_cast<long>(m) * (r - 1)) / Rat(r);
    Rat rr(static_cast<long>(r) * r);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) g(i, j) *= rr;
    return QForm(std::move(g));
}

// Lifts T to the subspace T' of (d+1)-dimensional forms
//   [[A, Ac], [c^t A, c^t A c]]  for A in a basis of T,
// plus the unit form at the new corner, so the laminated family
// Q'(s) = lift(Q) + s E has dim T' = dim T + 1.
inline SubspaceT laminate(const QForm& q, const SubspaceT& t, const Vec& c) {
    int d = t.ambient();
    if (q.mat().dim != d)
        throw std::invalid_argument("laminate: form and subspace dimensions differ");
    if (static_cast<int>(c.size()) != d)
        throw std::invalid_argument("laminate: center size mismatch");
    if (!t.contains(q.mat()))
        throw std::invalid_argument("laminate: form is not in the subspace");
    std::vector<SymMat> basis;
    for (const SymMat& a : t.basis()) {
        SymMat lift(d + 1);
        Vec ac(d, Rat(0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) ac[i] += a(i, j) * c[j];
        Rat corner(0);
        for (int i = 0; i < d; ++i) corner += c[i] * ac[i];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j <= i; ++j) lift(i, j) = a(i, j);
        for (int j = 0; j < d; ++j) lift(d, j) = ac[j];
        lift(d, d) = corner;
        basis.push_back(std::move(lift));
    }
    SymMat e(d + 1);
    e(d, d) = 1;
    basis.push_back(std::move(e));
    return SubspaceT(d + 1, std::move(basis));
}

}  // namespace tcover
