#include "doctest.h"
#include "test_util.hpp"

#include "localsym/poly.hpp"

using namespace localsym;
using lt::q3z3;
using lt::qp;

TEST_CASE("newton polygon of a split polynomial") {
  auto Q3 = qp(3);
  // (x - 3)(x - 1) = x^2 - 4x + 3: slopes -1 and 0
  FPoly f{Q3, {Q3->from_int(3), Q3->from_int(-4), Q3->one()}};
  auto segs = newton_polygon(f);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].slope_num == -1);
  CHECK(segs[1].slope_num == 0);
}

TEST_CASE("roots in field: mixed valuations") {
  auto Q3 = qp(3);
  // roots 1, 3, 9
  auto mk = [&](long a) { return Q3->from_int(a); };
  FPoly f{Q3, {mk(-27), mk(39), mk(-13), mk(1)}};
  auto roots = roots_in_field(f);
  REQUIRE(roots.size() == 3);
  bool s1 = false, s3 = false, s9 = false;
  for (auto& r : roots) {
    if (Q3->eq(r, mk(1))) s1 = true;
    if (Q3->eq(r, mk(3))) s3 = true;
    if (Q3->eq(r, mk(9))) s9 = true;
  }
  CHECK(s1);
  CHECK(s3);
  CHECK(s9);
}

TEST_CASE("roots in field: clustered residues") {
  auto Q3 = qp(3);
  // (x-1)(x-4)(x-2): 1 and 4 share a residue class
  auto mk = [&](long a) { return Q3->from_int(a); };
  FPoly f{Q3, {mk(-8), mk(14), mk(-7), mk(1)}};
  auto roots = roots_in_field(f);
  CHECK(roots.size() == 3);
}

TEST_CASE("roots in field: no rational roots on fractional slopes") {
  auto Q3 = qp(3);
  // x^2 - 3: root valuation 1/2
  FPoly f{Q3, {Q3->from_int(-3), Q3->zero(), Q3->one()}};
  CHECK(roots_in_field(f).empty());
}

TEST_CASE("roots over an extension") {
  auto F = q3z3();
  // x^2 + x + 1 has the two primitive cube roots of unity in F
  FPoly f{F, {F->one(), F->one(), F->one()}};
  auto roots = roots_in_field(f);
  CHECK(roots.size() == 2);
  for (auto& r : roots) CHECK(F->eq(F->pow(r, 3L), F->one()));
}

TEST_CASE("determinant and char poly") {
  auto Q3 = qp(3);
  auto mk = [&](long a) { return Q3->from_int(a); };
  std::vector<std::vector<FieldElement>> M{{mk(2), mk(1)}, {mk(1), mk(2)}};
  CHECK(Q3->eq(fdet(Q3, M), mk(3)));
  FPoly cp = char_poly(Q3, M);
  // y^2 - 4y + 3
  REQUIRE(cp.deg() == 2);
  CHECK(Q3->eq(cp.c[0], mk(3)));
  CHECK(Q3->eq(cp.c[1], mk(-4)));
  CHECK(Q3->eq(cp.c[2], mk(1)));
}

TEST_CASE("quotient ring mult matrix matches the defining relation") {
  auto Q3 = qp(3);
  // F[t]/(t^2 - 2): mult by t has matrix [[0,2],[1,0]]
  FPoly m{Q3, {Q3->from_int(-2), Q3->zero(), Q3->one()}};
  FPoly t{Q3, {Q3->zero(), Q3->one()}};
  auto M = quotient_mult_matrix(m, t);
  CHECK(Q3->eq(M[0][1], Q3->from_int(2)));
  CHECK(Q3->eq(M[1][0], Q3->one()));
  CHECK(Q3->eq(fdet(Q3, M), Q3->from_int(-2)));
}

TEST_CASE("argument shift and scale") {
  auto Q3 = qp(3);
  std::mt19937_64 rng(5);
  FPoly f{Q3, {Q3->from_int(7), Q3->from_int(-2), Q3->from_int(5), Q3->one()}};
  FieldElement a = Q3->from_int(11);
  FPoly g = fpoly_shift_arg(f, a);
  FieldElement x = Q3->from_int(4);
  CHECK(Q3->eq(g.eval(x), f.eval(Q3->add(x, a))));
  FPoly h = fpoly_scale_arg(f, Q3->from_int(3));
  CHECK(Q3->eq(h.eval(x), f.eval(Q3->mul(x, Q3->from_int(3)))));
  (void)rng;
}
