#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "tcover/enumerate.hpp"

using namespace tcover;

namespace {

SymMat sym2(long a, long b, long c) {
  SymMat q(2);
  q(0, 0) = a;
  q(1, 0) = b;
  q(1, 1) = c;
  return q;
}

SubspaceT diagonal_subspace() {
  return SubspaceT(2, {sym2(1, 0, 0), sym2(0, 0, 1)});
}

// Invariant space of two commuting order-3 rotations acting on separate
// 2-dimensional blocks: the forms a*hex (+) b*hex, a plane inside S^4.
SubspaceT doubled_hexagonal_subspace() {
  Unimodular r1(4), r2(4);
  r1(0, 0) = 0;
  r1(0, 1) = -1;
  r1(1, 0) = 1;
  r1(1, 1) = -1;
  r2(2, 2) = 0;
  r2(2, 3) = -1;
  r2(3, 2) = 1;
  r2(3, 3) = -1;
  MatrixGroup g{4, {r1, r2}, {}};
  return invariant_space(g);
}

}  // namespace

TEST_CASE("find_generic meets its contract") {
  SubspaceT t2 = full_space(2);
  auto [q2, d2] = find_generic(t2, 1);
  REQUIRE(q2.positive_definite());
  REQUIRE(t2.contains(q2.mat()));
  REQUIRE(secondary_cone(d2, t2).rigidity_index == 3);
  REQUIRE(d2.cells.size() == 2);

  SubspaceT diag = diagonal_subspace();
  auto [qd, dd] = find_generic(diag, 1);
  REQUIRE(qd.positive_definite());
  REQUIRE(qd.mat()(1, 0) == 0);
  REQUIRE(dd.cells.size() == 1);
  REQUIRE(dd.cells[0].verts.size() == 4);
  REQUIRE(secondary_cone(dd, diag).rigidity_index == 2);
}

TEST_CASE("find_generic is deterministic in the seed") {
  SubspaceT t = full_space(3);
  auto [qa, da] = find_generic(t, 9);
  auto [qb, db] = find_generic(t, 9);
  REQUIRE(qa.mat() == qb.mat());
  REQUIRE(da.canonical_key() == db.canonical_key());
  REQUIRE(secondary_cone(da, t).rigidity_index == 6);
}

TEST_CASE("find_generic error cases") {
  SubspaceT traceless(2, {sym2(1, 0, -1), sym2(0, 1, 0)});
  REQUIRE_THROWS_AS(find_generic(traceless, 1), std::runtime_error);

  SubspaceT line(2, {sym2(1, 0, 1)});
  REQUIRE_THROWS_AS(find_generic(line, 1), std::invalid_argument);

  REQUIRE_THROWS_AS(find_generic(full_space(2), 1, 0), std::runtime_error);
}

TEST_CASE("enumeration over the full plane of binary forms") {
  EnumerationReport rep = enumerate_cones(full_space(2));
  REQUIRE(rep.complete);
  REQUIRE(rep.representatives.size() == 1);
  REQUIRE(rep.dead_end_count == 0);
  REQUIRE(rep.crossings.size() == 3);
  for (const std::string &line : rep.crossings)
    REQUIRE(line.find("equivalent to cone 0") != std::string::npos);
  const ConeRepresentative &r = rep.representatives[0];
  REQUIRE(r.cone.rigidity_index == 3);
  REQUIRE(r.cone.cone.rays.size() == 3);
  REQUIRE(is_positive_definite(r.sample));
  REQUIRE(delone_subdivision(r.sample).canonical_key() == r.cone.D.canonical_key());
}

TEST_CASE("enumeration over the diagonal plane") {
  EnumerationReport rep = enumerate_cones(diagonal_subspace());
  REQUIRE(rep.complete);
  REQUIRE(rep.representatives.size() == 1);
  REQUIRE(rep.dead_end_count == 2);
  REQUIRE(rep.crossings.size() == 2);
}

TEST_CASE("enumeration over ternary forms finds the single class") {
  EnumerationReport rep = enumerate_cones(full_space(3));
  REQUIRE(rep.complete);
  REQUIRE(rep.representatives.size() == 1);
  REQUIRE(rep.dead_end_count == 0);
  REQUIRE(rep.crossings.size() == 6);
  REQUIRE(rep.representatives[0].cone.rigidity_index == 6);
  REQUIRE(rep.representatives[0].cone.D.cells.size() == 6);
}

TEST_CASE("enumeration over the doubled hexagonal plane") {
  SubspaceT t = doubled_hexagonal_subspace();
  REQUIRE(t.dim() == 2);
  REQUIRE(t.ambient() == 4);
  EnumerationReport rep = enumerate_cones(t);
  REQUIRE(rep.complete);
  REQUIRE(rep.representatives.size() == 1);
  REQUIRE(rep.dead_end_count == 2);
}

TEST_CASE("enumeration over quaternary forms finds the three classes") {
  EnumerationLimits lim;
  lim.max_cones = 64;
  EnumerationReport rep = enumerate_cones(full_space(4), lim);
  REQUIRE(rep.complete);
  REQUIRE(rep.representatives.size() == 3);
  REQUIRE(rep.dead_end_count == 0);
  for (const ConeRepresentative &r : rep.representatives) {
    REQUIRE(r.cone.rigidity_index == 10);
    REQUIRE(r.cone.D.cells.size() == 24);
  }
}

TEST_CASE("cone limit yields a partial report") {
  EnumerationLimits lim;
  lim.max_cones = 1;
  EnumerationReport rep = enumerate_cones(full_space(4), lim);
  REQUIRE(!rep.complete);
  REQUIRE(rep.representatives.size() == 1);
  REQUIRE(rep.crossings.back().find("cone limit reached") != std::string::npos);

  lim.max_cones = 0;
  REQUIRE_THROWS_AS(enumerate_cones(full_space(2), lim), std::invalid_argument);
}

TEST_CASE("closure: flipping every representative facet stays in the class list") {
  for (const SubspaceT &t : {full_space(2), full_space(3)}) {
    EnumerationReport rep = enumerate_cones(t);
    REQUIRE(rep.complete);
    for (const ConeRepresentative &r : rep.representatives) {
      for (size_t fi = 0; fi < r.cone.facet_records.size(); ++fi) {
        if (is_dead_end(r.cone, static_cast<int>(fi))) continue;
        DeloneSubdivision dn = flip(r.cone, static_cast<int>(fi), r.sample);
        SecondaryCone scn = secondary_cone(dn, t);
        bool matched = false;
        for (const ConeRepresentative &s : rep.representatives)
          if (t_equivalent(s.cone, scn, t)) matched = true;
        REQUIRE(matched);
      }
    }
  }
}

TEST_CASE("reports are deterministic and round-trip through text") {
  EnumerationLimits lim;
  lim.seed = 7;
  std::string a = format_enumeration_report(enumerate_cones(full_space(2), lim));
  std::string b = format_enumeration_report(enumerate_cones(full_space(2), lim));
  REQUIRE(a == b);

  EnumerationReport parsed = parse_enumeration_report(a);
  REQUIRE(format_enumeration_report(parsed) == a);
  REQUIRE(parsed.complete);
  REQUIRE(parsed.representatives.size() == 1);
  REQUIRE(parsed.dead_end_count == 0);

  REQUIRE_THROWS_AS(parse_enumeration_report("tcover happiness report"),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(parse_enumeration_report(a.substr(0, a.size() / 2)),
                    std::invalid_argument);
}
