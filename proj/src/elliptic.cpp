#include "localsym/elliptic.hpp"

namespace localsym {

CurveModel make_curve(const FieldPtr& F, FieldElement a1, FieldElement a2, FieldElement a3,
                      FieldElement a4, FieldElement a6) {
  for (const FieldElement* a : {&a1, &a2, &a3, &a4, &a6}) {
    if (a->field() != F) fail(ErrKind::MixedFields, "curve coefficients from another field");
    auto v = F->valuation(*a);
    if (v && *v < 0) fail(ErrKind::BadReduction, "non-integral Weierstrass coefficient");
  }
  CurveModel E;
  E.F = F;
  E.a1 = a1; E.a2 = a2; E.a3 = a3; E.a4 = a4; E.a6 = a6;
  auto M = [&](const FieldElement& a, const FieldElement& b) { return F->mul(a, b); };
  FieldElement a1s = M(a1, a1), a3s = M(a3, a3);
  E.b2 = F->add(a1s, F->mul(a2, F->from_int(4)));
  E.b4 = F->add(M(a1, a3), F->mul(a4, F->from_int(2)));
  E.b6 = F->add(a3s, F->mul(a6, F->from_int(4)));
  E.b8 = F->add(F->add(M(a1s, a6), F->mul(M(a2, a6), F->from_int(4))),
                F->sub(F->add(F->neg(M(M(a1, a3), a4)), M(a2, a3s)), M(a4, a4)));
  E.c4 = F->sub(M(E.b2, E.b2), F->mul(E.b4, F->from_int(24)));
  E.c6 = F->add(F->sub(F->mul(M(M(E.b2, E.b2), E.b2), F->from_int(-1)),
                       F->mul(M(E.b2, E.b4), F->from_int(-36))),
                F->mul(E.b6, F->from_int(-216)));
  // disc = -b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6
  FieldElement t1 = F->mul(M(M(E.b2, E.b2), E.b8), F->from_int(-1));
  FieldElement t2 = F->mul(M(M(E.b4, E.b4), E.b4), F->from_int(-8));
  FieldElement t3 = F->mul(M(E.b6, E.b6), F->from_int(-27));
  FieldElement t4 = F->mul(M(M(E.b2, E.b4), E.b6), F->from_int(9));
  E.disc = F->add(F->add(t1, t2), F->add(t3, t4));
  if (E.disc.is_zero()) fail(ErrKind::BadReduction, "singular model (discriminant 0)");
  E.j = F->div(F->pow(E.c4, 3L), E.disc);
  return E;
}

CurveModel curve_embed(const CurveModel& E, const FieldPtr& K) {
  return make_curve(K, K->embed(E.a1), K->embed(E.a2), K->embed(E.a3), K->embed(E.a4),
                    K->embed(E.a6));
}

PointOnE point_at_infinity() { return PointOnE{}; }

bool on_curve(const CurveModel& E, const PointOnE& P) {
  if (P.infinity) return true;
  const FieldPtr& F = E.F;
  FieldElement lhs = F->add(F->mul(P.y, P.y),
                            F->add(F->mul(F->mul(E.a1, P.x), P.y), F->mul(E.a3, P.y)));
  FieldElement x2 = F->mul(P.x, P.x);
  FieldElement rhs = F->add(F->add(F->mul(x2, P.x), F->mul(E.a2, x2)),
                            F->add(F->mul(E.a4, P.x), E.a6));
  return F->eq(lhs, rhs);
}

PointOnE make_point(const CurveModel& E, const FieldElement& x, const FieldElement& y) {
  PointOnE P{false, x, y};
  if (!on_curve(E, P)) fail(ErrKind::BadReduction, "point does not satisfy the Weierstrass equation");
  return P;
}

bool point_eq(const CurveModel& E, const PointOnE& P, const PointOnE& Q) {
  if (P.infinity || Q.infinity) return P.infinity == Q.infinity;
  return E.F->eq(P.x, Q.x) && E.F->eq(P.y, Q.y);
}

PointOnE point_neg(const CurveModel& E, const PointOnE& P) {
  if (P.infinity) return P;
  const FieldPtr& F = E.F;
  return PointOnE{false, P.x, F->neg(F->add(P.y, F->add(F->mul(E.a1, P.x), E.a3)))};
}

PointOnE point_add(const CurveModel& E, const PointOnE& P, const PointOnE& Q) {
  const FieldPtr& F = E.F;
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  FieldElement lam = F->zero();
  if (F->eq(P.x, Q.x)) {
    if (!F->eq(P.y, Q.y)) return point_at_infinity();  // Q = -P
    FieldElement den = F->add(F->mul(F->from_int(2), P.y), F->add(F->mul(E.a1, P.x), E.a3));
    if (den.is_zero()) return point_at_infinity();  // 2-torsion
    FieldElement num = F->add(F->add(F->mul(F->from_int(3), F->mul(P.x, P.x)),
                                     F->mul(F->from_int(2), F->mul(E.a2, P.x))),
                              F->sub(E.a4, F->mul(E.a1, P.y)));
    lam = F->div(num, den);
  } else {
    lam = F->div(F->sub(Q.y, P.y), F->sub(Q.x, P.x));
  }
  FieldElement nu = F->sub(P.y, F->mul(lam, P.x));
  FieldElement x3 = F->sub(F->sub(F->add(F->mul(lam, lam), F->mul(E.a1, lam)), E.a2),
                           F->add(P.x, Q.x));
  FieldElement y3 = F->neg(F->add(F->add(F->mul(lam, x3), nu),
                                  F->add(F->mul(E.a1, x3), E.a3)));
  return PointOnE{false, x3, y3};
}

PointOnE point_mul(const CurveModel& E, const Int& n, const PointOnE& P) {
  Int m = n;
  PointOnE base = P;
  if (m < 0) {
    m = -m;
    base = point_neg(E, P);
  }
  PointOnE acc = point_at_infinity();
  while (m > 0) {
    if (mpz_odd_p(m.get_mpz_t())) acc = point_add(E, acc, base);
    m >>= 1;
    if (m > 0) base = point_add(E, base, base);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// reduction
// ---------------------------------------------------------------------------

namespace {

bool res_is_square(const FieldDescriptor& F, const RElt& a, RElt* root = nullptr) {
  if (F.res_is_zero(a)) {
    if (root) *root = F.res_zero();
    return true;
  }
  if (!F.res_eq(F.res_pow(a, (F.res_card() - 1) / 2), F.res_one())) return false;
  if (root) {
    for (Int i = 1; i < F.res_card(); ++i) {
      RElt c = F.res_by_index(i);
      if (F.res_eq(F.res_mul(c, c), a)) { *root = c; return true; }
    }
    fail(ErrKind::Internal, "square root scan failed");
  }
  return true;
}

}  // namespace

ReductionData reduction_analysis(const CurveModel& E) {
  const FieldPtr& F = E.F;
  ReductionData rd;
  auto vd = F->valuation(E.disc);
  auto vc4 = F->valuation(E.c4);
  if (!vd) fail(ErrKind::PrecisionExhausted, "discriminant valuation undecidable");
  if (*vd >= 12 && (!vc4 || *vc4 >= 4)) rd.nonminimal = true;
  if (*vd == 0) {
    rd.type = RedType::Good;
    if (F->res_card() > 10000) fail(ErrKind::ResidueFieldTooLarge, "point-count cap is q <= 10^4");
    Int cnt = 1;  // infinity
    for (Int i = 0; i < F->res_card(); ++i) {
      RElt x = F->res_by_index(i);
      // disc of the y-quadratic: (a1 x + a3)^2 + 4 f(x)
      RElt l = F->res_add(F->res_mul(F->residue(E.a1), x), F->residue(E.a3));
      RElt fx = F->res_add(
          F->res_add(F->res_mul(F->res_mul(x, x), x),
                     F->res_mul(F->residue(E.a2), F->res_mul(x, x))),
          F->res_add(F->res_mul(F->residue(E.a4), x), F->residue(E.a6)));
      RElt d = F->res_add(F->res_mul(l, l), F->res_mul(F->res_from_int(4), fx));
      if (F->res_is_zero(d)) cnt += 1;
      else if (res_is_square(*F, d)) cnt += 2;
    }
    rd.count = cnt;
    rd.a_q = F->res_card() + 1 - cnt;
    Int am = rd.a_q % F->p();
    rd.ordinary = (am != 0);
    return rd;
  }
  if (vc4 && *vc4 == 0) {
    rd.type = RedType::Multiplicative;
    // complete the square: y'^2 = g(x) = x^3 + (b2/4) x^2 + (b4/2) x + b6/4
    RElt b2r = F->residue(E.b2), b4r = F->residue(E.b4), b6r = F->residue(E.b6);
    RElt inv4 = F->res_inv(F->res_from_int(4));
    RElt c2 = F->res_mul(b2r, inv4);
    RElt c1 = F->res_mul(b4r, F->res_inv(F->res_from_int(2)));
    RElt c0 = F->res_mul(b6r, inv4);
    // double root x0 of g mod pi: g(x0) = g'(x0) = 0
    RElt x0;
    bool found = false;
    for (Int i = 0; i < F->res_card() && !found; ++i) {
      RElt x = F->res_by_index(i);
      RElt g = F->res_add(F->res_add(F->res_mul(F->res_mul(x, x), x), F->res_mul(c2, F->res_mul(x, x))),
                          F->res_add(F->res_mul(c1, x), c0));
      RElt gp = F->res_add(F->res_add(F->res_mul(F->res_from_int(3), F->res_mul(x, x)),
                                      F->res_mul(F->res_from_int(2), F->res_mul(c2, x))),
                           c1);
      if (F->res_is_zero(g) && F->res_is_zero(gp)) { x0 = x; found = true; }
    }
    if (!found) fail(ErrKind::Internal, "multiplicative reduction without a double root");
    // x0 + x0 + x1 = -c2
    RElt x1 = F->res_sub(F->res_neg(c2), F->res_add(x0, x0));
    rd.split = res_is_square(*F, F->res_sub(x0, x1));
    return rd;
  }
  rd.type = RedType::Other;
  return rd;
}

// ---------------------------------------------------------------------------
// residue curve
// ---------------------------------------------------------------------------

std::vector<RPoint> residue_points(const CurveModel& E) {
  const FieldPtr& F = E.F;
  if (F->res_card() > 10000) fail(ErrKind::ResidueFieldTooLarge, "enumeration cap is q <= 10^4");
  std::vector<RPoint> pts;
  pts.push_back(RPoint{});
  RElt a1 = F->residue(E.a1), a2 = F->residue(E.a2), a3 = F->residue(E.a3),
       a4 = F->residue(E.a4), a6 = F->residue(E.a6);
  for (Int i = 0; i < F->res_card(); ++i) {
    RElt x = F->res_by_index(i);
    RElt l = F->res_add(F->res_mul(a1, x), a3);
    RElt fx = F->res_add(F->res_add(F->res_mul(F->res_mul(x, x), x), F->res_mul(a2, F->res_mul(x, x))),
                         F->res_add(F->res_mul(a4, x), a6));
    RElt d = F->res_add(F->res_mul(l, l), F->res_mul(F->res_from_int(4), fx));
    RElt sq;
    if (!res_is_square(*F, d, &sq)) continue;
    RElt inv2 = F->res_inv(F->res_from_int(2));
    if (F->res_is_zero(d)) {
      pts.push_back(RPoint{false, x, F->res_mul(F->res_neg(l), inv2)});
    } else {
      pts.push_back(RPoint{false, x, F->res_mul(F->res_sub(sq, l), inv2)});
      pts.push_back(RPoint{false, x, F->res_mul(F->res_sub(F->res_neg(sq), l), inv2)});
    }
  }
  return pts;
}

bool rpoint_eq(const CurveModel& E, const RPoint& a, const RPoint& b) {
  if (a.infinity || b.infinity) return a.infinity == b.infinity;
  return E.F->res_eq(a.x, b.x) && E.F->res_eq(a.y, b.y);
}

RPoint rpoint_neg(const CurveModel& E, const RPoint& a) {
  if (a.infinity) return a;
  const FieldPtr& F = E.F;
  RElt my = F->res_neg(F->res_add(a.y, F->res_add(F->res_mul(F->residue(E.a1), a.x), F->residue(E.a3))));
  return RPoint{false, a.x, my};
}

RPoint rpoint_add(const CurveModel& E, const RPoint& a, const RPoint& b) {
  const FieldPtr& F = E.F;
  if (a.infinity) return b;
  if (b.infinity) return a;
  RElt a1 = F->residue(E.a1), a2 = F->residue(E.a2), a3 = F->residue(E.a3),
       a4 = F->residue(E.a4);
  RElt lam;
  if (F->res_eq(a.x, b.x)) {
    if (!F->res_eq(a.y, b.y)) return RPoint{};
    RElt den = F->res_add(F->res_add(a.y, a.y), F->res_add(F->res_mul(a1, a.x), a3));
    if (F->res_is_zero(den)) return RPoint{};
    RElt num = F->res_add(
        F->res_add(F->res_mul(F->res_from_int(3), F->res_mul(a.x, a.x)),
                   F->res_mul(F->res_from_int(2), F->res_mul(a2, a.x))),
        F->res_sub(a4, F->res_mul(a1, a.y)));
    lam = F->res_mul(num, F->res_inv(den));
  } else {
    lam = F->res_mul(F->res_sub(b.y, a.y), F->res_inv(F->res_sub(b.x, a.x)));
  }
  RElt nu = F->res_sub(a.y, F->res_mul(lam, a.x));
  RElt x3 = F->res_sub(F->res_sub(F->res_add(F->res_mul(lam, lam), F->res_mul(a1, lam)), a2),
                       F->res_add(a.x, b.x));
  RElt y3 = F->res_neg(F->res_add(F->res_add(F->res_mul(lam, x3), nu),
                                  F->res_add(F->res_mul(a1, x3), a3)));
  return RPoint{false, x3, y3};
}

RPoint rpoint_mul(const CurveModel& E, const Int& n, const RPoint& a) {
  Int m = n;
  RPoint base = a;
  if (m < 0) {
    m = -m;
    base = rpoint_neg(E, a);
  }
  RPoint acc{};
  while (m > 0) {
    if (mpz_odd_p(m.get_mpz_t())) acc = rpoint_add(E, acc, base);
    m >>= 1;
    if (m > 0) base = rpoint_add(E, base, base);
  }
  return acc;
}

RPoint reduce_point(const CurveModel& E, const PointOnE& P) {
  if (P.infinity) return RPoint{};
  const FieldPtr& F = E.F;
  auto vx = F->valuation(P.x);
  if (vx && *vx < 0) return RPoint{};
  return RPoint{false, F->residue(P.x), F->residue(P.y)};
}

PointOnE lift_point(const CurveModel& E, const RPoint& a) {
  if (a.infinity) return point_at_infinity();
  const FieldPtr& F = E.F;
  // fix x = lift(a.x), Newton on y; fall back to Newton on x when the point is
  // 2-torsion on the reduction
  FieldElement x0 = F->lift(a.x), y0 = F->lift(a.y);
  FieldElement dy = F->add(F->add(y0, y0), F->add(F->mul(E.a1, x0), E.a3));
  if (F->valuation(dy) && *F->valuation(dy) == 0) {
    // f(y) = y^2 + (a1 x0 + a3) y - (x0^3 + a2 x0^2 + a4 x0 + a6)
    FieldElement l = F->add(F->mul(E.a1, x0), E.a3);
    FieldElement x2 = F->mul(x0, x0);
    FieldElement c = F->add(F->add(F->mul(x2, x0), F->mul(E.a2, x2)),
                            F->add(F->mul(E.a4, x0), E.a6));
    FPoly f{F, {F->neg(c), l, F->one()}};
    return PointOnE{false, x0, newton_lift(f, y0)};
  }
  // Newton on x with y fixed:
  // f(x) = x^3 + a2 x^2 + (a4 - a1 y0) x + (a6 - y0^2 - a3 y0)
  FieldElement c0 = F->sub(E.a6, F->add(F->mul(y0, y0), F->mul(E.a3, y0)));
  FieldElement c1 = F->sub(E.a4, F->mul(E.a1, y0));
  FPoly f{F, {c0, c1, E.a2, F->one()}};
  FieldElement xr = newton_lift(f, x0);
  return make_point(E, xr, y0);
}

std::vector<PointOnE> points_with_x(const CurveModel& E, const FieldElement& x) {
  const FieldPtr& F = E.F;
  // y^2 + l y = c with l = a1 x + a3
  FieldElement l = F->add(F->mul(E.a1, x), E.a3);
  FieldElement x2 = F->mul(x, x);
  FieldElement c = F->add(F->add(F->mul(x2, x), F->mul(E.a2, x2)), F->add(F->mul(E.a4, x), E.a6));
  // (2y + l)^2 = l^2 + 4c
  FieldElement d = F->add(F->mul(l, l), F->mul(c, F->from_int(4)));
  std::vector<PointOnE> out;
  FieldElement inv2 = F->inv(F->from_int(2));
  if (d.is_zero()) {
    out.push_back(PointOnE{false, x, F->mul(F->neg(l), inv2)});
    return out;
  }
  auto r = F->is_pth_power(d, 2);
  if (!r) return out;
  out.push_back(PointOnE{false, x, F->mul(F->sub(*r, l), inv2)});
  out.push_back(PointOnE{false, x, F->mul(F->sub(F->neg(*r), l), inv2)});
  return out;
}

FPoly division_polynomial(const CurveModel& E, long p) {
  const FieldPtr& F = E.F;
  auto C = [&](long n) { return F->from_int(n); };
  if (p == 3) {
    // 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8
    return FPoly{F, {E.b8, F->mul(E.b6, C(3)), F->mul(E.b4, C(3)), E.b2, C(3)}};
  }
  if (p == 5) {
    FPoly psi3{F, {E.b8, F->mul(E.b6, C(3)), F->mul(E.b4, C(3)), E.b2, C(3)}};
    FPoly B{F, {E.b6, F->mul(E.b4, C(2)), E.b2, C(4)}};  // psi_2^2
    // psi_4 / psi_2
    FieldElement d0 = F->sub(F->mul(E.b4, E.b8), F->mul(E.b6, E.b6));
    FieldElement d1 = F->sub(F->mul(E.b2, E.b8), F->mul(E.b4, E.b6));
    FPoly g4{F, {d0, d1, F->mul(E.b8, C(10)), F->mul(E.b6, C(10)), F->mul(E.b4, C(5)), E.b2, C(2)}};
    // psi_5 = g4 B^2 - psi_3^3
    FPoly res = fpoly_mul(g4, fpoly_mul(B, B));
    FPoly cube = fpoly_mul(psi3, fpoly_mul(psi3, psi3));
    for (auto& c : cube.c) c = F->neg(c);
    return fpoly_add(res, cube);
  }
  fail(ErrKind::Internal, "division polynomial implemented for p in {3, 5}");
}

Int torsion_count(const CurveModel& E, long p) {
  FPoly psi = division_polynomial(E, p);
  auto roots = roots_in_field(psi);
  Int cnt = 1;
  for (const auto& r : roots) cnt += (long)points_with_x(E, r).size();
  return cnt;
}

}  // namespace localsym
