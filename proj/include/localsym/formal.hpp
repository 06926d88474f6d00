#pragma once

#include "localsym/elliptic.hpp"

namespace localsym {

/// Truncated power series in the formal parameter z = -x/y, coefficients
/// indexed from z^0; all series share one truncation order.
using Series = std::vector<FieldElement>;
using BiSeries = std::vector<std::vector<FieldElement>>;  // [i][j] z1^i z2^j, i+j <= order

Series series_zero(const FieldPtr& F, int order);
Series series_mul(const Series& a, const Series& b);
Series series_add(const Series& a, const Series& b);
FieldElement series_eval(const Series& s, const FieldElement& z);
/// Compositional inverse of s (s[0] = 0, s[1] a unit).
Series series_reversion(const Series& s);
/// f(g) for g with g[0] = 0.
Series series_compose(const Series& f, const Series& g);

struct FormalGroup {
  CurveModel E;
  int order = 0;
  Series w;        // w(z) = z^3 + ..., the curve branch at the origin
  Series s;        // w = z^3 s(z), s(0) = 1
  Series omega;    // invariant differential coefficients
  Series log;      // formal logarithm, log[1] = 1
  BiSeries law;    // group law F(z1, z2)
};

FormalGroup formal_group(const CurveModel& E, int order, bool with_law = true);

/// [n](z) by repeated group-law substitution (integral coefficients).
Series formal_mult(const FormalGroup& FG, long n);

/// Evaluate the bivariate law at series arguments (z1 <- a(z), z2 <- b(z)).
Series law_compose(const FormalGroup& FG, const Series& a, const Series& b);

/// Evaluate the law at two formal parameters (v >= 1); precision capped by
/// the truncation order.
FieldElement law_eval(const FormalGroup& FG, const FieldElement& z1, const FieldElement& z2);

/// z-coordinate of a formal point from its (x, y); z = -x/y.
FieldElement formal_z(const CurveModel& E, const PointOnE& P);
/// Point from a formal parameter with v(z) >= 1: x = z / w(z), y = -1 / w(z).
PointOnE formal_point(const FormalGroup& FG, const FieldElement& z);

/// The multiplicative-coordinate map h(z) = exp_Gm(c * log_E(z)) with c in
/// Z_p* chosen digit-by-digit so that all coefficients up to `order` are
/// integral; valid_order reports how far integrality held (NoIntegralScaling
/// when it cannot reach min_order).
struct GmIso {
  FieldPtr F;
  FieldElement c;
  Series h;  // h[0] = 0, h[1] = c
  int valid_order = 0;
};

GmIso gm_isomorphism(const CurveModel& E, int order, int min_order);

/// h evaluated at the formal parameter of a point: the unit 1 + h(z).
FieldElement gm_unit(const GmIso& iso, const FieldElement& z);

}  // namespace localsym
