#include "doctest.h"
#include "test_util.hpp"

#include "localsym/formal.hpp"

using namespace localsym;
using lt::qp;

namespace {

CurveModel gm_fixture(const FieldPtr& F) {
  // y^2 = x^3 - 2x - 3 over Q_5: good ordinary with a_5 = 1
  return make_curve(F, F->zero(), F->zero(), F->zero(), F->from_int(-2), F->from_int(-3));
}

}  // namespace

TEST_CASE("formal group basics") {
  auto F = qp(5);
  CurveModel E = gm_fixture(F);
  FormalGroup FG = formal_group(E, 12);
  // w = z^3 + ...
  CHECK(F->eq(FG.w[3], F->one()));
  // F(z, 0) = z
  CHECK(F->eq(FG.law[1][0], F->one()));
  CHECK(F->eq(FG.law[0][1], F->one()));
  CHECK(FG.law[0][0].is_zero());
  // log starts at z
  CHECK(F->eq(FG.log[1], F->one()));
}

TEST_CASE("formal law matches the group law on points") {
  auto F = qp(5);
  CurveModel E = gm_fixture(F);
  FormalGroup FG = formal_group(E, 14);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 5; ++t) {
    FieldElement z1 = F->shift(lt::random_unit(F, rng), 1 + (t % 2));
    FieldElement z2 = F->shift(lt::random_unit(F, rng), 1);
    PointOnE P = formal_point(FG, z1);
    PointOnE Q = formal_point(FG, z2);
    CHECK(on_curve(E, P));
    PointOnE S = point_add(E, P, Q);
    FieldElement z3 = law_eval(FG, z1, z2);
    PointOnE S2 = formal_point(FG, z3);
    CHECK(point_eq(E, S, S2));
  }
}

TEST_CASE("multiplication-by-n series agrees with point multiplication") {
  auto F = qp(5);
  CurveModel E = gm_fixture(F);
  FormalGroup FG = formal_group(E, 14);
  Series m5 = formal_mult(FG, 5);
  CHECK(F->eq(m5[1], F->from_int(5)));
  std::mt19937_64 rng(11);
  FieldElement z = F->shift(lt::random_unit(F, rng), 1);
  FieldElement z5 = cap_prec(series_eval(m5, z), (FG.order + 1) * 1);
  PointOnE P = formal_point(FG, z);
  PointOnE P5 = point_mul(E, 5, P);
  PointOnE Q5 = formal_point(FG, z5);
  CHECK(point_eq(E, P5, Q5));
}

TEST_CASE("gm isomorphism: integrality and the intertwining identities") {
  auto F = qp(5);
  CurveModel E = gm_fixture(F);
  int order = 16;  // 2p + 6
  GmIso iso = gm_isomorphism(E, order, order);
  CHECK(iso.valid_order == order);
  for (int i = 0; i <= iso.valid_order; ++i) CHECK(iso.h[i].denom() == 0);
  CHECK(F->val_exact(iso.h[1]) == 0);  // h'(0) is a unit
  CHECK(iso.h[0].is_zero());

  FormalGroup FG = formal_group(E, order);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 4; ++t) {
    FieldElement z1 = F->shift(lt::random_unit(F, rng), 1);
    FieldElement z2 = F->shift(lt::random_unit(F, rng), 1);
    // h(F(z1,z2)) = h(z1) + h(z2) + h(z1) h(z2)
    FieldElement lhs = series_eval(iso.h, law_eval(FG, z1, z2));
    FieldElement h1 = series_eval(iso.h, z1), h2 = series_eval(iso.h, z2);
    FieldElement rhs = F->add(F->add(h1, h2), F->mul(h1, h2));
    FieldElement diff = F->sub(lhs, rhs);
    auto v = F->valuation(diff);
    CHECK((!v || *v >= order));  // equality to the truncation order
    // h([p] z) = (1 + h(z))^p - 1
    FieldElement zp = cap_prec(series_eval(formal_mult(FG, 5), z1), order + 1);
    FieldElement lhs2 = series_eval(iso.h, zp);
    FieldElement rhs2 = F->sub(F->pow(F->add(F->one(), h1), 5L), F->one());
    auto v2 = F->valuation(F->sub(lhs2, rhs2));
    CHECK((!v2 || *v2 >= order));
  }
}

TEST_CASE("gm isomorphism over the cyclotomic base reaches the coordinate order") {
  auto F = lt::q3z3();
  FieldElement a = F->add(F->one(), F->uniformizer());
  CurveModel E = make_curve(F, a, F->zero(), a, F->zero(), F->zero());
  // i_max = 3: coordinates need validity past level 3
  GmIso iso = gm_isomorphism(E, 12, 5);
  CHECK(iso.valid_order >= 5);
  std::mt19937_64 rng(17);
  // 1 + h(z) is a principal unit for formal parameters
  FieldElement z = F->shift(lt::random_unit(F, rng), 1);
  FieldElement u = gm_unit(iso, z);
  CHECK(F->val_exact(F->sub(u, F->one())) >= 1);
}
