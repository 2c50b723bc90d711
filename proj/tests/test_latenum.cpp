#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tcover/latenum.hpp"
#include "tcover/linalg.hpp"
#include "tcover/qform.hpp"

using namespace tcover;

namespace {

// Exhaustive oracle: the ellipsoid Q[x - c] <= r^2 lies inside the box
// |x_i - c_i| <= sqrt(r^2 (Q^{-1})_ii), so scanning that box and testing
// every integer point exactly reproduces the enumeration.
std::vector<LatticePoint> enumerate_by_box(const SymMat &q, const Vec &center,
                                           const Rat &radius_sq, bool strict) {
  const int d = q.dim;
  std::vector<LatticePoint> found;
  if (sgn(radius_sq) < 0) return found;
  Mat inv = *mat_inverse(q.to_mat());
  std::vector<Int> lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    Rat s2 = radius_sq * inv(i, i);
    Int bound = isqrt_floor(rat_ceil(s2)) + 1;
    lo[i] = rat_floor(center[i]) - bound;
    hi[i] = rat_ceil(center[i]) + bound;
  }
  VecZ v(d);
  auto scan = [&](auto &&self, int i) -> void {
    if (i == d) {
      Vec diff(d);
      for (int k = 0; k < d; ++k) diff[k] = Rat(v[k]) - center[k];
      Rat val = q.eval(diff);
      int cmp = sgn(val - radius_sq);
      if (cmp < 0 || (cmp == 0 && !strict)) found.push_back({v, val});
      return;
    }
    for (Int x = lo[i]; x <= hi[i]; ++x) {
      v[i] = x;
      self(self, i + 1);
    }
  };
  scan(scan, 0);
  std::sort(found.begin(), found.end(),
            [](const LatticePoint &a, const LatticePoint &b) { return a.v < b.v; });
  return found;
}

SymMat random_pd(std::mt19937_64 &rng, int d) {
  // G^t G + I is positive definite for any integer G.
  Mat g(d, d);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = entry(rng);
  SymMat q(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j <= i; ++j) {
      Rat sum(i == j ? 1 : 0);
      for (int r = 0; r < d; ++r) sum += g(r, i) * g(r, j);
      q(i, j) = sum;
    }
  return q;
}

}  // namespace

TEST_CASE("ellipsoid enumeration matches the box oracle", "[latenum]") {
  std::mt19937_64 rng(20240905);
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> den(1, 3);
  std::uniform_int_distribution<int> rad(0, 6);
  for (int trial = 0; trial < 40; ++trial) {
    int d = 1 + static_cast<int>(rng() % 4);
    SymMat q = random_pd(rng, d);
    Vec center(d);
    for (int i = 0; i < d; ++i) {
      center[i] = Rat(num(rng), den(rng));
      center[i].canonicalize();
    }
    Rat r2(rad(rng), den(rng));
    r2.canonicalize();
    bool strict = (trial % 2 == 0);
    auto got = enumerate_ellipsoid({q, center, r2, strict});
    auto want = enumerate_by_box(q, center, r2, strict);
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i) {
      REQUIRE(got[i].v == want[i].v);
      REQUIRE(got[i].value == want[i].value);
    }
  }
}

TEST_CASE("enumeration edge cases", "[latenum]") {
  SymMat q(2);
  q(0, 0) = 2;
  q(1, 0) = 1;
  q(1, 1) = 2;

  SECTION("zero radius at an integral center") {
    Vec c = {Rat(3), Rat(-1)};
    auto pts = enumerate_ellipsoid({q, c, Rat(0), false});
    REQUIRE(pts.size() == 1);
    REQUIRE(pts[0].v == VecZ{Int(3), Int(-1)});
    REQUIRE(pts[0].value == 0);
    REQUIRE(enumerate_ellipsoid({q, c, Rat(0), true}).empty());
  }

  SECTION("negative radius") {
    Vec c = {Rat(0), Rat(0)};
    REQUIRE(enumerate_ellipsoid({q, c, Rat(-1), false}).empty());
  }

  SECTION("non-PD forms are rejected") {
    SymMat bad(2);
    bad(0, 0) = 1;
    bad(1, 0) = 2;
    bad(1, 1) = 1;
    Vec c = {Rat(0), Rat(0)};
    REQUIRE_THROWS(enumerate_ellipsoid({bad, c, Rat(1), false}));
  }

  SECTION("reusing an enumerator across queries") {
    EllipsoidEnumerator en(q);
    Vec c = {Rat(1, 2), Rat(1, 2)};
    auto a = en.enumerate(c, Rat(3), false);
    auto b = enumerate_ellipsoid({q, c, Rat(3), false});
    REQUIRE(a.size() == b.size());
  }
}

TEST_CASE("shortest vectors", "[latenum]") {
  SECTION("identity form") {
    SymMat q(3);
    for (int i = 0; i < 3; ++i) q(i, i) = 1;
    ShortestVectors sv = shortest_vectors(q);
    REQUIRE(sv.lambda_sq == 1);
    REQUIRE(sv.vectors.size() == 6);
  }

  SECTION("hexagonal form") {
    SymMat q(2);
    q(0, 0) = 2;
    q(1, 0) = 1;
    q(1, 1) = 2;
    ShortestVectors sv = shortest_vectors(q);
    REQUIRE(sv.lambda_sq == 2);
    REQUIRE(sv.vectors.size() == 6);
    for (const VecZ &v : sv.vectors) REQUIRE(q.eval(v) == 2);
  }

  SECTION("random forms: minimum attained and no shorter point exists") {
    std::mt19937_64 rng(20240906);
    for (int trial = 0; trial < 15; ++trial) {
      int d = 2 + static_cast<int>(rng() % 3);
      SymMat q = random_pd(rng, d);
      ShortestVectors sv = shortest_vectors(q);
      REQUIRE_FALSE(sv.vectors.empty());
      for (const VecZ &v : sv.vectors) REQUIRE(q.eval(v) == sv.lambda_sq);
      Vec origin(d, Rat(0));
      auto inside = enumerate_ellipsoid({q, origin, sv.lambda_sq, true});
      REQUIRE(inside.size() == 1);  // only the origin
    }
  }
}
