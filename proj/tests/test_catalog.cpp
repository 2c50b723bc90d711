#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "tcover/catalog.hpp"
#include "tcover/delone.hpp"
#include "tcover/symmetry.hpp"

using namespace tcover;

namespace {

SymMat sym2(long a, long b, long c) {
  SymMat q(2);
  q(0, 0) = a;
  q(1, 0) = b;
  q(1, 1) = c;
  return q;
}

SymMat tridiagonal_root_gram(int d) {
  SymMat g(d);
  for (int i = 0; i < d; ++i) {
    g(i, i) = 2;
    if (i > 0) g(i, i - 1) = -1;
  }
  return g;
}

// dual of the root lattice at the r^2 = (d+1)^2 scale that coxeter_form uses
SymMat dual_root_gram_scaled(int d) {
  Mat inv = *mat_inverse(tridiagonal_root_gram(d).to_mat());
  Rat scale(static_cast<long>(d + 1) * (d + 1));
  SymMat g(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) g(i, j) = scale * inv(i, j);
  return g;
}

}  // namespace

TEST_CASE("coxeter forms match root lattice oracles", "[catalog]") {
  CHECK(coxeter_form(2, 1).mat() == sym2(2, -1, 2));
  CHECK(coxeter_form(3, 1).mat() == tridiagonal_root_gram(3));
  SymMat a1(1);
  a1(0, 0) = 2;
  CHECK(coxeter_form(1, 1).mat() == a1);
  CHECK(coxeter_form(1, 2).mat() == a1);  // A_1^2 is A_1 rescaled

  // A_2^3 = A_2* in the glue basis, scaled by 9
  CHECK(coxeter_form(2, 3).mat() == sym2(18, -9, 6));

  CHECK_THROWS_AS(coxeter_form(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(coxeter_form(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(coxeter_form(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(coxeter_form(3, 0), std::invalid_argument);
}

TEST_CASE("coxeter determinants follow the index relation", "[catalog]") {
  for (int d = 1; d <= 5; ++d)
    for (int r = 1; r <= d + 1; ++r) {
      if ((d + 1) % r != 0) continue;
      QForm q = coxeter_form(d, r);
      CHECK(q.positive_definite());
      // det(A_d^r) = det(A_d)/r^2 = (d+1)/r^2, times the r^2 form scaling
      Rat expected(d + 1);
      for (int k = 0; k < 2 * d - 2; ++k) expected *= r;
      CHECK(sym_det(q.mat()) == expected);
    }
  CHECK(sym_det(coxeter_form(3, 2).mat()) == Rat(64));  // unscaled det 1
}

TEST_CASE("coxeter dual forms are arithmetically equivalent to the dual root lattice",
          "[catalog]") {
  for (int d : {2, 3}) {
    QForm q = coxeter_form(d, d + 1);
    CHECK(isometry(q.mat(), dual_root_gram_scaled(d)).has_value());
  }
  CHECK_FALSE(isometry(coxeter_form(2, 3).mat(), coxeter_form(2, 1).mat()).has_value());
}

TEST_CASE("coxeter A7^2 is isometric to E7", "[catalog]") {
  SymMat e7(7);
  for (int i = 0; i < 6; ++i) {
    e7(i, i) = 2;
    if (i > 0) e7(i, i - 1) = -1;
  }
  e7(6, 6) = 2;
  e7(6, 3) = -1;  // branch node attached to the fourth chain node
  CHECK(sym_det(e7) == Rat(2));
  SymMat e7_scaled(7);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j <= i; ++j) e7_scaled(i, j) = 4 * e7(i, j);
  QForm q = coxeter_form(7, 2);
  REQUIRE(sym_det(q.mat()) == sym_det(e7_scaled));
  CHECK(isometry(q.mat(), e7_scaled).has_value());
}

TEST_CASE("lattice basis computes the Gram form", "[catalog]") {
  // A_2 root columns inside R^3
  Mat roots(3, 2);
  roots(0, 0) = 1;
  roots(1, 0) = -1;
  roots(1, 1) = 1;
  roots(2, 1) = -1;
  LatticeBasis lb = lattice_basis(roots);
  CHECK(lb.dim == 2);
  CHECK(lb.gram.mat() == sym2(2, -1, 2));
  CHECK(lb.gram.positive_definite());

  Mat id(2, 2);
  id(0, 0) = 1;
  id(1, 1) = 1;
  CHECK(lattice_basis(id).gram.mat() == sym2(1, 0, 1));

  Mat dep(2, 2);
  dep(0, 0) = 1;
  dep(0, 1) = 2;
  dep(1, 0) = 2;
  dep(1, 1) = 4;
  CHECK_THROWS_AS(lattice_basis(dep), std::invalid_argument);
  Mat wide(1, 2);
  wide(0, 0) = 1;
  wide(0, 1) = 1;
  CHECK_THROWS_AS(lattice_basis(wide), std::invalid_argument);
}

TEST_CASE("laminate reproduces the block formula", "[catalog]") {
  SymMat q1(1);
  q1(0, 0) = 4;
  SubspaceT t = full_space(1);
  SubspaceT tp = laminate(QForm(q1), t, Vec{Rat(1, 2)});
  CHECK(tp.ambient() == 2);
  CHECK(tp.dim() == 2);

  Vec base = *t.coords_of(q1);
  auto family = [&](const Rat& lam_sq) {
    Vec x = base;
    x.push_back(lam_sq);
    return tp.from_coords(x);
  };
  CHECK(family(Rat(1)) == sym2(4, 2, 2));
  CHECK(family(Rat(0)) == sym2(4, 2, 1));
  CHECK(family(Rat(9)) == sym2(4, 2, 10));

  CHECK(definiteness(family(Rat(1))).kind == Definiteness::PositiveDefinite);
  auto psd = definiteness(family(Rat(0)));
  CHECK(psd.kind == Definiteness::PositiveSemidefinite);
  CHECK(psd.kernel.size() == 1);
  CHECK(definiteness(family(Rat(-1))).kind == Definiteness::Indefinite);
}

TEST_CASE("laminate grows the subspace by one dimension", "[catalog]") {
  SubspaceT diag(2, {sym2(1, 0, 0), sym2(0, 0, 1)});
  SymMat q = sym2(1, 0, 2);
  SubspaceT tp = laminate(QForm(q), diag, Vec{Rat(1, 2), Rat(1, 3)});
  CHECK(tp.ambient() == 3);
  CHECK(tp.dim() == 3);

  SubspaceT full = full_space(2);
  CHECK(laminate(QForm(sym2(2, 1, 2)), full, Vec{Rat(1, 3), Rat(1, 3)}).dim() == 4);

  CHECK_THROWS_AS(laminate(QForm(sym2(2, 1, 2)), diag, Vec{Rat(0), Rat(0)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(laminate(QForm(q), diag, Vec{Rat(0)}), std::invalid_argument);
  SymMat q3(3);
  for (int i = 0; i < 3; ++i) q3(i, i) = 1;
  CHECK_THROWS_AS(laminate(QForm(q3), diag, Vec{Rat(0), Rat(0)}), std::invalid_argument);
}

TEST_CASE("laminated family is definite exactly above the Schur threshold", "[catalog]") {
  SubspaceT full = full_space(2);
  Vec c{Rat(1, 3), Rat(1, 3)};
  SymMat hex = sym2(2, 1, 2);
  SubspaceT tp = laminate(QForm(hex), full, c);
  Vec base = *full.coords_of(hex);
  auto family = [&](const Rat& lam_sq) {
    Vec x = base;
    x.push_back(lam_sq);
    return tp.from_coords(x);
  };
  for (long num : {1L, 4L, 36L})
    CHECK(definiteness(family(Rat(num, 4))).kind == Definiteness::PositiveDefinite);
  CHECK(definiteness(family(Rat(0))).kind == Definiteness::PositiveSemidefinite);
  CHECK(definiteness(family(Rat(-1, 4))).kind == Definiteness::Indefinite);

  // indefinite base form stays indefinite for every lambda
  SymMat ind = sym2(1, 2, 1);
  SubspaceT ti = laminate(QForm(ind), full, c);
  Vec bi = *full.coords_of(ind);
  bi.push_back(Rat(1));
  CHECK(definiteness(ti.from_coords(bi)).kind == Definiteness::Indefinite);
}

TEST_CASE("laminated delone subdivision restricts to the base layer", "[catalog]") {
  SymMat hex = sym2(2, 1, 2);
  SubspaceT full = full_space(2);
  Vec c{Rat(1, 3), Rat(1, 3)};  // circumcenter of the triangle 0, e1, e2
  SubspaceT tp = laminate(QForm(hex), full, c);
  Vec x = *full.coords_of(hex);
  x.push_back(Rat(100));
  DeloneSubdivision sub = delone_subdivision(tp.from_coords(x));

  std::set<std::vector<VecZ>> layer_parts;
  for (const DeloneCell& cell : sub.cells) {
    Int lo = cell.verts[0].back(), hi = lo;
    for (const VecZ& v : cell.verts) {
      lo = std::min(lo, v.back());
      hi = std::max(hi, v.back());
    }
    CHECK(hi - lo == 1);  // tall lamination: cells span two adjacent layers
    for (const Int& layer : {lo, hi}) {
      std::vector<VecZ> part;
      for (const VecZ& v : cell.verts)
        if (v.back() == layer) part.push_back(VecZ(v.begin(), v.end() - 1));
      if (part.size() >= 3) layer_parts.insert(detail::normalize_translate(part).first);
    }
  }
  // the base triangle centered at c is embedded as a layer of some cell
  std::vector<VecZ> tri{VecZ{0, 0}, VecZ{1, 0}, VecZ{0, 1}};
  CHECK(layer_parts.count(detail::normalize_translate(tri).first) == 1);
}
