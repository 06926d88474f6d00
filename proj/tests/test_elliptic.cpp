#include "doctest.h"
#include "test_util.hpp"

#include "localsym/elliptic.hpp"
#include "localsym/tate.hpp"

using namespace localsym;
using lt::qp;

namespace {

// fixture: full rational 3-torsion over Q_3(zeta_3), good ordinary
CurveModel prop_e_curve(const FieldPtr& F) {
  FieldElement a = F->add(F->one(), F->uniformizer());
  return make_curve(F, a, F->zero(), a, F->zero(), F->zero());
}

}  // namespace

TEST_CASE("reduction analysis over Q_5: ordinary and supersingular counts") {
  auto F = qp(5);
  CurveModel E1 = make_curve(F, F->zero(), F->zero(), F->zero(), F->one(), F->zero());
  ReductionData r1 = reduction_analysis(E1);
  CHECK(r1.type == RedType::Good);
  CHECK(r1.count == 4);
  CHECK(r1.a_q == 2);
  CHECK(r1.ordinary);

  CurveModel E2 = make_curve(F, F->zero(), F->zero(), F->zero(), F->zero(), F->one());
  ReductionData r2 = reduction_analysis(E2);
  CHECK(r2.count == 6);
  CHECK(r2.a_q == 0);
  CHECK(!r2.ordinary);
}

TEST_CASE("multiplicative reduction detection and split flag") {
  auto F = qp(5, -1, 3);
  CurveModel E = tate_curve_from_q(F, F->from_int(5));
  CHECK(F->val_exact(E.disc) == 1);
  CHECK(F->val_exact(E.c4) == 0);
  ReductionData rd = reduction_analysis(E);
  CHECK(rd.type == RedType::Multiplicative);
  CHECK(rd.split);
  CHECK(F->val_exact(E.j) == -1);
}

TEST_CASE("group law on the fixture curve") {
  auto F = lt::q3z3();
  CurveModel E = prop_e_curve(F);
  PointOnE T = make_point(E, F->zero(), F->zero());
  PointOnE O = point_at_infinity();
  CHECK(point_eq(E, point_add(E, T, O), T));
  CHECK(point_eq(E, point_add(E, T, point_neg(E, T)), O));
  // (0,0) is 3-torsion on y^2 + a1 xy + a3 y = x^3
  CHECK(point_eq(E, point_mul(E, 3, T), O));
  // n P = repeated addition
  std::mt19937_64 rng(5);
  PointOnE P = T;
  for (int t = 0; t < 30 && P.infinity; ++t) P = T;
  PointOnE acc = O;
  for (int n = 1; n <= 12; ++n) {
    acc = point_add(E, acc, T);
    CHECK(point_eq(E, point_mul(E, n, T), acc));
  }
}

TEST_CASE("lift and reduce round trip") {
  auto F = lt::q3z3();
  CurveModel E = prop_e_curve(F);
  auto pts = residue_points(E);
  CHECK((long)pts.size() == 3);
  for (const auto& pt : pts) {
    if (pt.infinity) continue;
    PointOnE P = lift_point(E, pt);
    CHECK(on_curve(E, P));
    CHECK(rpoint_eq(E, reduce_point(E, P), pt));
  }
}

TEST_CASE("division polynomial and full 3-torsion") {
  auto F = lt::q3z3();
  CurveModel E = prop_e_curve(F);
  FPoly psi = division_polynomial(E, 3);
  CHECK(psi.deg() == 4);
  // x = 0 carries the rational 3-torsion point (0, 0)
  CHECK(psi.eval(F->zero()).is_zero());
  CHECK(torsion_count(E, 3) == 9);
  // every root gives points of order 3
  for (const auto& r : roots_in_field(psi)) {
    for (const auto& P : points_with_x(E, r)) {
      CHECK(point_eq(E, point_mul(E, 3, P), point_at_infinity()));
      CHECK(!point_eq(E, P, point_at_infinity()));
    }
  }
}

TEST_CASE("torsion counting sees partial rationality") {
  // over Q_3 the wild fixture has only the trivial point rational in E[3]
  auto F = qp(3);
  CurveModel E = make_curve(F, F->one(), F->zero(), F->zero(), F->from_int(-2), F->from_int(-2));
  CHECK(torsion_count(E, 3) == 1);
}

TEST_CASE("points_with_x agrees with the curve equation") {
  auto F = lt::q3z3();
  CurveModel E = prop_e_curve(F);
  std::mt19937_64 rng(31);
  int got = 0;
  for (int t = 0; t < 40 && got < 10; ++t) {
    FieldElement x = lt::random_elt(F, rng);
    auto pts = points_with_x(E, x);
    for (const auto& P : pts) {
      CHECK(on_curve(E, P));
      ++got;
    }
  }
  CHECK(got >= 10);
}
