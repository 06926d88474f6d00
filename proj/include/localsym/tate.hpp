#pragma once

#include "localsym/elliptic.hpp"
#include "localsym/hilbert.hpp"

namespace localsym {

/// Rigid-analytic data of a split multiplicative curve: E(F) = F*/q^Z.
struct TateCurve {
  FieldPtr F;
  FieldElement q_param;
  CurveModel E;
  bool split = true;
};

/// Invert the j-expansion: q with j(q) = j(E), v(q) = -v(j).
/// pre: v(j) < 0 and the reduction is split multiplicative.
TateCurve tate_parameter(const CurveModel& E);

/// The standard Tate model y^2 + xy = x^3 + a4(q) x + a6(q) for a given
/// parameter (used to build fixtures).
CurveModel tate_curve_from_q(const FieldPtr& F, const FieldElement& q);

/// Evaluate the parametrization at w (0 <= v(w) < v(q), w not 1 mod high
/// precision unless the point is meant to be the origin's branch).
PointOnE tate_point(const TateCurve& tc, const FieldElement& w);

/// Recover w with phi(w) = P by Newton against the parametrization series.
FieldElement tate_uniformizer_parameter(const PointOnE& P, const TateCurve& tc);

/// The class of P in F*/((F*)^ell q^Z): fstar coordinates reduced modulo the
/// line of [q].
struct UniformizerClass {
  UnitBasisPtr basis;
  std::vector<long> c;        // representative coordinates after reduction
  std::vector<long> q_class;  // coordinates of [q] (the quotient direction)
  bool zero = false;
};

UniformizerClass uniformizer_class(const PointOnE& P, const TateCurve& tc, long ell);

/// Symbol value via the tame pairing of uniformizer parameters.  When [q] is
/// nonzero in F*/ell the pushforward collapses and every value is 0.
SymbolValue tate_symbol(const PointOnE& P, const PointOnE& Q, const TateCurve& tc, long ell);

}  // namespace localsym
