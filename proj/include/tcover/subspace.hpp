#pragma once

// Linear subspaces T of S^d given by a basis of symmetric matrices, with
// coordinates, membership tests and the orthogonal projection onto T with
// respect to <A,B> = trace(AB).

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcover/qform.hpp"
#include "tcover/symmat.hpp"

namespace tcover {

class SubspaceT {
public:
    SubspaceT(int ambient_dim, std::vector<SymMat> basis)
        : d_(ambient_dim), basis_(std::move(basis)) {
        if (basis_.empty()) throw std::invalid_argument("SubspaceT: empty basis");
        for (const SymMat& b : basis_)
            if (b.dim != d_) throw std::invalid_argument("SubspaceT: basis dim mismatch");
        int m = static_cast<int>(basis_.size());
        gram_ = Mat(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j <= i; ++j) gram_(i, j) = gram_(j, i) = inner(basis_[i], basis_[j]);
        if (mat_rank(gram_) != m)
            throw std::invalid_argument("SubspaceT: basis is linearly dependent");
        gram_inv_ = *mat_inverse(gram_);
    }

    int ambient() const { return d_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<SymMat>& basis() const { return basis_; }
    const Mat& gram() const { return gram_; }

    SymMat from_coords(const Vec& x) const {
        if (static_cast<int>(x.size()) != dim())
            throw std::invalid_argument("SubspaceT::from_coords: size mismatch");
        SymMat m(d_);
        for (int k = 0; k < dim(); ++k)
            if (sgn(x[k]) != 0) m = m + x[k] * basis_[k];
        return m;
    }

    // Coordinates of m in the basis, if m lies in T.
    std::optional<Vec> coords_of(const SymMat& m) const {
        Vec x = project_coords(m);
        return from_coords(x) == m ? std::optional<Vec>(x) : std::nullopt;
    }

    bool contains(const SymMat& m) const { return coords_of(m).has_value(); }

    // Coordinates of the orthogonal projection of m onto T.
    Vec project_coords(const SymMat& m) const {
        if (m.dim != d_) throw std::invalid_argument("SubspaceT::project_coords: dim mismatch");
        Vec rhs(dim());
        for (int k = 0; k < dim(); ++k) rhs[k] = inner(m, basis_[k]);
        return mat_apply(gram_inv_, rhs);
    }

    SymMat project(const SymMat& m) const { return from_coords(project_coords(m)); }

    // Functional coordinates of <n, .> restricted to T: component k is <n, A_k>.
    Vec functional(const SymMat& n) const {
        if (n.dim != d_) throw std::invalid_argument("SubspaceT::functional: dim mismatch");
        Vec f(dim());
        for (int k = 0; k < dim(); ++k) f[k] = inner(n, basis_[k]);
        return f;
    }

private:
    int d_;
    std::vector<SymMat> basis_;
    Mat gram_;
    Mat gram_inv_;
};

// Full space S^d as a subspace: basis E_ii and E_ij + E_ji.
inline SubspaceT full_space(int d) {
    std::vector<SymMat> basis;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) {
            SymMat b(d);
            b(i, j) = 1;
            basis.push_back(b);
        }
    return SubspaceT(d, basis);
}

// ---- text format ----
// Line 1: "ambient d", line 2: "forms m", then m lower-triangle blocks,
// each "dim d" + d rows (the SymMat format).

inline std::string format_subspace(const SubspaceT& t) {
    std::ostringstream os;
    os << "ambient " << t.ambient() << "\n";
    os << "forms " << t.dim() << "\n";
    for (const SymMat& b : t.basis()) os << format_symmat(b);
    return os.str();
}

inline SubspaceT parse_subspace(std::istream& is) {
    std::string kw;
    int d = 0, m = 0;
    if (!(is >> kw >> d) || kw != "ambient" || d < 1)
        throw std::invalid_argument("parse_subspace: expected 'ambient d'");
    if (!(is >> kw >> m) || kw != "forms" || m < 1)
        throw std::invalid_argument("parse_subspace: expected 'forms m'");
    std::vector<SymMat> basis;
    for (int k = 0; k < m; ++k) basis.push_back(parse_symmat(is));
    return SubspaceT(d, basis);
}

inline SubspaceT parse_subspace(const std::string& text) {
    std::istringstream is(text);
    return parse_subspace(is);
}

}  // namespace tcover
