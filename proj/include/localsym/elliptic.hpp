#pragma once

#include "localsym/poly.hpp"

namespace localsym {

/// Integral Weierstrass model over a tower field, assumed minimal as given.
struct CurveModel {
  FieldPtr F;
  FieldElement a1, a2, a3, a4, a6;
  FieldElement b2, b4, b6, b8, c4, c6, disc, j;
};

CurveModel make_curve(const FieldPtr& F, FieldElement a1, FieldElement a2, FieldElement a3,
                      FieldElement a4, FieldElement a6);

/// Base change along a tower extension.
CurveModel curve_embed(const CurveModel& E, const FieldPtr& K);

struct PointOnE {
  bool infinity = true;
  FieldElement x, y;
};

PointOnE point_at_infinity();
PointOnE make_point(const CurveModel& E, const FieldElement& x, const FieldElement& y);
bool on_curve(const CurveModel& E, const PointOnE& P);
bool point_eq(const CurveModel& E, const PointOnE& P, const PointOnE& Q);
PointOnE point_neg(const CurveModel& E, const PointOnE& P);
PointOnE point_add(const CurveModel& E, const PointOnE& P, const PointOnE& Q);
PointOnE point_mul(const CurveModel& E, const Int& n, const PointOnE& P);

enum class RedType { Good, Multiplicative, Other };

struct ReductionData {
  RedType type = RedType::Other;
  bool ordinary = false;  // good case
  Int count;              // #E~(k), good case
  Int a_q;
  bool split = false;          // multiplicative case
  bool nonminimal = false;     // v(disc) >= 12 and v(c4) >= 4: reported, not repaired
};

ReductionData reduction_analysis(const CurveModel& E);

// ---- residue curve -------------------------------------------------------

struct RPoint {
  bool infinity = true;
  RElt x, y;
};

/// All points of the reduced curve over k (enumeration; small q only).
std::vector<RPoint> residue_points(const CurveModel& E);
bool rpoint_eq(const CurveModel& E, const RPoint& a, const RPoint& b);
RPoint rpoint_neg(const CurveModel& E, const RPoint& a);
RPoint rpoint_add(const CurveModel& E, const RPoint& a, const RPoint& b);
RPoint rpoint_mul(const CurveModel& E, const Int& n, const RPoint& a);
/// Reduction map; good reduction assumed.  v(x) < 0 lands at infinity.
RPoint reduce_point(const CurveModel& E, const PointOnE& P);
/// Hensel lift of a smooth residue point.
PointOnE lift_point(const CurveModel& E, const RPoint& a);

/// y-solutions over F for a given x: 0, 1 or 2 points.
std::vector<PointOnE> points_with_x(const CurveModel& E, const FieldElement& x);

/// p-division polynomial in x (p = 3 or 5 at desk scale).
FPoly division_polynomial(const CurveModel& E, long p);

/// #E[p](F) via division-polynomial roots and y-rationality.
Int torsion_count(const CurveModel& E, long p);

}  // namespace localsym
