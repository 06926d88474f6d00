#include "doctest.h"
#include "test_util.hpp"

#include "localsym/kummer.hpp"
#include "localsym/tate.hpp"

using namespace localsym;
using lt::qp;

namespace {

struct TFix {
  FieldPtr F;
  CurveModel E;
  TateCurve tc;
  TFix() : F(qp(7, -1, 3)), E(tate_curve_from_q(F, F->from_int(343))), tc(tate_parameter(E)) {}
};

TFix& tfix() {
  static TFix f;
  return f;
}

}  // namespace

TEST_CASE("tate parameter round trip and valuation match") {
  auto& f = tfix();
  CHECK(f.F->val_exact(f.tc.q_param) == 3);
  CHECK(f.F->val_exact(f.E.j) == -3);
  CHECK(f.F->eq(f.tc.q_param, f.F->from_int(343)));
  // v(j) = -1 gives v(q) = 1
  CurveModel E1 = tate_curve_from_q(f.F, f.F->from_int(7));
  TateCurve t1 = tate_parameter(E1);
  CHECK(f.F->val_exact(t1.q_param) == 1);
}

TEST_CASE("good reduction input is refused") {
  auto F = qp(7, -1, 3);
  CurveModel E = make_curve(F, F->zero(), F->zero(), F->zero(), F->one(), F->one());
  CHECK_THROWS_AS(tate_parameter(E), Error);
}

TEST_CASE("parametrization round trips through the uniformizer parameter") {
  auto& f = tfix();
  for (long w0 : {3L, 21L, 10L}) {
    FieldElement w = f.F->from_int(w0);
    PointOnE P = tate_point(f.tc, w);
    FieldElement wr = tate_uniformizer_parameter(P, f.tc);
    CHECK(f.F->eq(cap_prec(wr, 20), cap_prec(w, 20)));
  }
}

TEST_CASE("uniformizer classes: q-coset and cube invariance") {
  auto& f = tfix();
  // phi(w^3) has trivial class
  PointOnE P = tate_point(f.tc, f.F->from_int(27));
  auto c = uniformizer_class(P, f.tc, 3);
  CHECK(c.zero);
  // the identity (w in q^Z) at class level: decompose(q) is trivial here
  auto B = fstar_basis(f.F, 3);
  CHECK(B->decompose(f.tc.q_param).is_zero());
  // generic point: nonzero class; multiplying w by q or by cubes preserves it
  PointOnE Q1 = tate_point(f.tc, f.F->from_int(3));
  auto c1 = uniformizer_class(Q1, f.tc, 3);
  CHECK(!c1.zero);
  PointOnE Q2 = tate_point(f.tc, f.F->mul(f.F->from_int(3), f.tc.q_param));
  auto c2 = uniformizer_class(Q2, f.tc, 3);
  CHECK(c1.c == c2.c);
  PointOnE Q3 = tate_point(f.tc, f.F->from_int(3 * 8));
  auto c3 = uniformizer_class(Q3, f.tc, 3);
  CHECK(c1.c == c3.c);
}

TEST_CASE("tate symbol: skew, well-defined, nonzero on the fixture") {
  auto& f = tfix();
  PointOnE P = tate_point(f.tc, f.F->from_int(21));
  PointOnE Q = tate_point(f.tc, f.F->from_int(3));
  CHECK(tate_symbol(P, P, f.tc, 3).zero());
  SymbolValue v = tate_symbol(P, Q, f.tc, 3);
  CHECK(!v.zero());
  CHECK(v.v == 2);  // frozen fixture value
  // agrees with the tame formula on the parameters themselves
  CHECK(v.v == tame_symbol(f.F->from_int(21), f.F->from_int(3), 3).v);
  // skew across the pair
  SymbolValue vr = tate_symbol(Q, P, f.tc, 3);
  CHECK(fp::norm(v.v + vr.v, 3) == 0);
  // well-definedness under w -> w q^k and w -> w u^3
  PointOnE P2 = tate_point(f.tc, f.F->mul(f.F->from_int(21), f.tc.q_param));
  CHECK(tate_symbol(P2, Q, f.tc, 3).v == v.v);
  PointOnE P3 = tate_point(f.tc, f.F->from_int(21 * 8));
  CHECK(tate_symbol(P3, Q, f.tc, 3).v == v.v);
  // norm-membership cross-check: 3 is not a norm from Q_7(21^(1/3))
  auto ext = kummer_extension(f.F, f.F->from_int(21), 3);
  auto ns = norm_subgroup(ext);
  CHECK(!ns.contains(ext.base_fstar->decompose(f.F->from_int(3))));
}

TEST_CASE("refusals: wild prime and missing mu_ell") {
  auto& f = tfix();
  PointOnE P = tate_point(f.tc, f.F->from_int(3));
  CHECK_THROWS_AS(tate_symbol(P, P, f.tc, 7), Error);
  auto F5 = qp(5, -1, 3);
  CurveModel E5 = tate_curve_from_q(F5, F5->from_int(5));
  TateCurve t5 = tate_parameter(E5);
  PointOnE P5 = tate_point(t5, F5->from_int(2));
  try {
    tate_symbol(P5, P5, t5, 3);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::MuNotInField);
  }
}

TEST_CASE("degenerate q-class collapses the value group") {
  // v(q) = 1: [q] is nonzero in F*/3, so all values vanish
  auto F = qp(7, -1, 3);
  CurveModel E = tate_curve_from_q(F, F->from_int(7));
  TateCurve tc = tate_parameter(E);
  PointOnE P = tate_point(tc, F->from_int(3));
  PointOnE Q = tate_point(tc, F->from_int(5));
  CHECK(tate_symbol(P, Q, tc, 3).zero());
}
