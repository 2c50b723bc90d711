#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "tcover/covopt.hpp"

using namespace tcover;

namespace {

SymMat sym2(long a, long b, long c) {
  SymMat q(2);
  q(0, 0) = a;
  q(1, 0) = b;
  q(1, 1) = c;
  return q;
}

SymMat hexagonal() { return sym2(2, 1, 2); }

SubspaceT diagonal_subspace() {
  return SubspaceT(2, {sym2(1, 0, 0), sym2(0, 0, 1)});
}

std::vector<VecZ> unit_simplex2() {
  return {VecZ{0, 0}, VecZ{0, 1}, VecZ{1, 0}};
}

// Stationarity and positivity of a dual certificate, rechecked from its
// parts against the problem data.
void check_certificate(const MaxDetProblem& p, const BoundCertificate& cert) {
  int d = p.T.ambient();
  REQUIRE(is_positive_definite(cert.w));
  REQUIRE(cert.lambda.size() == p.ineqs.size());
  REQUIRE(cert.z.size() == p.br_coeffs.size());
  for (const Rat& l : cert.lambda) REQUIRE(sgn(l) >= 0);
  for (const SymMat& z : cert.z)
    REQUIRE(definiteness(z).kind != Definiteness::Indefinite);
  for (int k = 0; k < p.T.dim(); ++k) {
    Rat s = inner(cert.w, p.T.basis()[k]);
    for (size_t j = 0; j < p.ineqs.size(); ++j) s += cert.lambda[j] * p.ineqs[j][k];
    for (size_t b = 0; b < p.br_coeffs.size(); ++b) s += inner(cert.z[b], p.br_coeffs[b][k]);
    REQUIRE(sgn(s) == 0);
  }
  Rat c(0);
  for (const SymMat& z : cert.z) c += z(0, 0);
  c *= 4;
  REQUIRE(sgn(c) > 0);
  Rat cd(1), dd(1);
  for (int i = 0; i < d; ++i) {
    cd *= c;
    dd *= Rat(d);
  }
  REQUIRE(cert.lower_sq == sym_det(cert.w) * dd / cd);
  // the primal witness obeys the trace bound the certificate promises
  REQUIRE(inner(cert.w, cert.qstar) <= c);
}

}  // namespace

TEST_CASE("bordered circumradius matrices") {
  SymMat id = sym2(1, 0, 1);
  std::vector<VecZ> simplex = unit_simplex2();

  SymMat br = br_matrix(id, simplex);
  REQUIRE(br.dim == 3);
  REQUIRE(br(0, 0) == 4);
  REQUIRE(br(1, 0) == 1);
  REQUIRE(br(2, 0) == 1);
  REQUIRE(br(1, 1) == 1);
  REQUIRE(br(2, 1) == 0);
  REQUIRE(br(2, 2) == 1);
  REQUIRE(is_positive_definite(br));

  // circumradius exactly 1: singular but semidefinite
  SymMat two = sym2(2, 0, 2);
  REQUIRE(definiteness(br_matrix(two, simplex)).kind == Definiteness::PositiveSemidefinite);
  REQUIRE(sym_det(br_matrix(two, simplex)) == 0);

  // circumradius 2: indefinite
  SymMat four = sym2(4, 0, 4);
  REQUIRE(definiteness(br_matrix(four, simplex)).kind == Definiteness::Indefinite);
  REQUIRE(sym_det(br_matrix(four, simplex)) == -64);

  std::vector<VecZ> shifted = {VecZ{3, -2}, VecZ{3, -1}, VecZ{4, -2}};
  REQUIRE(br_matrix(id, shifted) == br);

  REQUIRE_THROWS_AS(br_matrix(id, {VecZ{0, 0}, VecZ{1, 0}}), std::invalid_argument);
  REQUIRE_THROWS_AS(br_matrix(id, {VecZ{0, 0}, VecZ{1, 0}, VecZ{2, 0}}), std::invalid_argument);
}

TEST_CASE("block semidefiniteness matches cell circumradii") {
  for (const SymMat& base : {hexagonal(), sym2(1, 0, 4), sym2(3, 1, 5)}) {
    for (long num : {1L, 2L, 5L}) {
      SymMat q = Rat(num, 2) * base;
      DeloneSubdivision sub = delone_subdivision(q);
      for (const DeloneCell& cell : sub.cells) {
        SymMat br = br_matrix(q, detail::affine_basis_exact(cell.verts, q.dim + 1));
        bool psd = definiteness(br).kind != Definiteness::Indefinite;
        REQUIRE(psd == (cell.radius_sq <= 1));
      }
    }
  }
}

TEST_CASE("normalized covering density") {
  REQUIRE(normalized_theta_sq(hexagonal()) == Rat(4, 27));
  REQUIRE(normalized_theta_sq(sym2(1, 0, 1)) == Rat(1, 4));
  REQUIRE(normalized_theta_sq(sym2(1, 0, 4)) == Rat(25, 64));

  // body-centered cubic: deep hole norm 5/4, determinant 16
  SymMat bcc(3);
  for (int i = 0; i < 3; ++i) bcc(i, i) = 3;
  bcc(1, 0) = bcc(2, 0) = bcc(2, 1) = -1;
  REQUIRE(inhomogeneous_minimum(delone_subdivision(bcc)) == Rat(5, 4));
  REQUIRE(normalized_theta_sq(bcc) == Rat(125, 1024));

  // scale and basis-change invariance
  REQUIRE(normalized_theta_sq(Rat(3) * hexagonal()) == Rat(4, 27));
  Unimodular u(2);
  u(0, 1) = 1;
  REQUIRE(normalized_theta_sq(transform(hexagonal(), u)) == Rat(4, 27));

  REQUIRE_THROWS_AS(normalized_theta_sq(sym2(1, 0, -1)), std::invalid_argument);
}

TEST_CASE("packing-covering constant") {
  REQUIRE(packing_covering(QForm(sym2(1, 0, 1))) == 2);
  SymMat id3(3);
  for (int i = 0; i < 3; ++i) id3(i, i) = 1;
  REQUIRE(packing_covering(QForm(id3)) == 3);
  REQUIRE(packing_covering(QForm(hexagonal())) == Rat(4, 3));
  REQUIRE(packing_covering(QForm(sym2(1, 0, 4))) == 5);
  REQUIRE_THROWS_AS(packing_covering(QForm(sym2(1, 0, -1))), std::invalid_argument);
}

TEST_CASE("maxdet problem over the diagonal cone") {
  SubspaceT diag = diagonal_subspace();
  EnumerationReport rep = enumerate_cones(diag);
  REQUIRE(rep.representatives.size() == 1);
  MaxDetProblem p = build_maxdet(rep.representatives[0].cone);

  REQUIRE(p.simplices.size() == 1);
  REQUIRE(p.ineqs.size() == 2);
  REQUIRE(p.br_coeffs[0].size() == 2);

  // reassembling the block from its coefficients gives br_matrix
  Vec xid = *diag.coords_of(sym2(1, 0, 1));
  SymMat br(3);
  br(0, 0) = 4;
  for (int k = 0; k < 2; ++k) br = br + xid[k] * p.br_coeffs[0][k];
  REQUIRE(br == br_matrix(sym2(1, 0, 1), p.simplices[0]));

  SymMat start = diag.from_coords(p.start);
  REQUIRE(is_positive_definite(start));
  REQUIRE(inhomogeneous_minimum(delone_subdivision(start)) == Rat(1, 2));

  // a cone with equalities is rejected
  DeloneSubdivision square = delone_subdivision(sym2(1, 0, 1));
  SecondaryCone sc = secondary_cone(square, full_space(2));
  REQUIRE(sc.rigidity_index < 3);
  REQUIRE_THROWS_AS(build_maxdet(sc), std::invalid_argument);
}

TEST_CASE("quadrant optimization is exactly tight") {
  SubspaceT diag = diagonal_subspace();
  EnumerationReport rep = enumerate_cones(diag);
  OptimizeResult res = optimize_cone(rep.representatives[0].cone);

  REQUIRE(res.trace.converged);
  REQUIRE(res.trace.newton_steps > 0);
  REQUIRE(res.x.size() == 2);
  REQUIRE(std::abs(res.x[0] - 2.0) < 1e-6);
  REQUIRE(std::abs(res.x[1] - 2.0) < 1e-6);

  REQUIRE(res.cert.qstar == sym2(2, 0, 2));
  REQUIRE(res.cert.upper_sq == Rat(1, 4));
  REQUIRE(res.cert.lower_sq == Rat(1, 4));
  REQUIRE(res.cert.gap == 0.0);

  MaxDetProblem p = build_maxdet(rep.representatives[0].cone);
  check_certificate(p, res.cert);

  // theta = pi/2 for the best diagonal form
  REQUIRE(std::abs(theta_from_sq(2, res.cert.upper_sq) - M_PI / 2) < 1e-12);
}

TEST_CASE("hexagonal cone optimization") {
  EnumerationReport rep = enumerate_cones(full_space(2));
  REQUIRE(rep.representatives.size() == 1);

  MaxDetProblem p = build_maxdet(rep.representatives[0].cone);
  REQUIRE(p.simplices.size() == 1);  // -I merges the two triangle classes
  REQUIRE(p.ineqs.size() == 3);

  OptimizeResult res = optimize_cone(rep.representatives[0].cone);
  REQUIRE(res.trace.converged);
  REQUIRE(res.cert.upper_sq == Rat(4, 27));
  REQUIRE(res.cert.lower_sq <= res.cert.upper_sq);
  REQUIRE(res.cert.gap < 1e-6);
  check_certificate(p, res.cert);

  REQUIRE(normalized_theta_sq(res.cert.qstar) == res.cert.upper_sq);
  double theta = theta_from_sq(2, res.cert.upper_sq);
  REQUIRE(std::abs(theta - 1.2091995) < 1e-6);
}

TEST_CASE("barrier stationarity at the returned point") {
  EnumerationReport rep = enumerate_cones(full_space(2));
  const SecondaryCone& sc = rep.representatives[0].cone;
  MaxDetProblem p = build_maxdet(sc);
  OptimizeResult res = optimize_cone(sc);

  detail::BarrierData bd;
  bd.d = 2;
  bd.m = 3;
  for (const SymMat& a : p.T.basis()) bd.a.push_back(detail::to_dmat(a));
  SymMat corner(3);
  corner(0, 0) = 4;
  for (const std::vector<SymMat>& coeffs : p.br_coeffs) {
    std::vector<detail::DMat> row;
    for (const SymMat& c : coeffs) row.push_back(detail::to_dmat(c));
    bd.c.push_back(std::move(row));
    bd.f0.push_back(corner);
  }
  for (const Vec& gj : p.ineqs) {
    std::vector<double> row;
    for (const Rat& v : gj) row.push_back(v.get_d());
    bd.g.push_back(std::move(row));
  }

  detail::BarrierState st = bd.eval(res.x);
  REQUIRE(st.valid);
  double t = res.trace.final_t;
  double phi0 = bd.phi(t, st);
  for (int k = 0; k < 3; ++k) {
    for (double step : {1e-4, -1e-4}) {
      std::vector<double> xp = res.x;
      xp[k] += step;
      detail::BarrierState sp = bd.eval(xp);
      if (!sp.valid) continue;
      REQUIRE(bd.phi(t, sp) >= phi0 - 1e-9 * std::abs(phi0));
    }
  }
}

TEST_CASE("theta bounds over a report") {
  EnumerationReport rep2 = enumerate_cones(full_space(2));
  ThetaBounds b2 = theta_T(rep2);
  REQUIRE_FALSE(b2.conditional);
  REQUIRE(b2.certificates.size() == 1);
  REQUIRE(b2.upper_sq == Rat(4, 27));
  double lo = theta_from_sq(2, b2.lower_sq);
  double hi = theta_from_sq(2, b2.upper_sq);
  REQUIRE(lo <= 1.209200);
  REQUIRE(1.209199 <= hi + 1e-6);
  REQUIRE(hi - lo < 1e-4);

  // the d=3 optimum is the body-centered cubic class; the certificate
  // closes completely on it
  EnumerationReport rep3 = enumerate_cones(full_space(3));
  REQUIRE(rep3.representatives.size() == 1);
  ThetaBounds b3 = theta_T(rep3);
  REQUIRE_FALSE(b3.conditional);
  REQUIRE(b3.upper_sq == Rat(125, 1024));
  REQUIRE(b3.lower_sq == Rat(125, 1024));
  REQUIRE(std::abs(theta_from_sq(3, b3.upper_sq) - 1.463503068966818) < 1e-12);

  REQUIRE_THROWS_AS(theta_T(EnumerationReport{full_space(2), {}, 0, {}, true}),
                    std::invalid_argument);
}

TEST_CASE("rational approximation") {
  REQUIRE(detail::rat_approx(0.5, 16) == Rat(1, 2));
  REQUIRE(detail::rat_approx(2.0000000001, 16) == 2);
  REQUIRE(detail::rat_approx(-0.33333333333, 100) == Rat(-1, 3));
  REQUIRE(detail::rat_approx(0.0, 16) == 0);
  REQUIRE(detail::rat_approx(M_PI, 113) == Rat(355, 113));
  REQUIRE_THROWS_AS(detail::rat_approx(1.0 / 0.0, 16), std::invalid_argument);
}
