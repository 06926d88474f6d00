#pragma once

#include <vector>

#include "localsym/padic.hpp"

namespace localsym {

/// Dense polynomial over a tower field, low coefficients first.
struct FPoly {
  FieldPtr F;
  std::vector<FieldElement> c;

  long deg() const { return (long)c.size() - 1; }
  FieldElement eval(const FieldElement& x) const;
  FPoly derivative() const;
};

FPoly fpoly(const FieldPtr& F, std::vector<FieldElement> coeffs);
FPoly fpoly_trim(FPoly f);                       // drop zero-to-precision leading coeffs
FPoly fpoly_mul(const FPoly& a, const FPoly& b);
FPoly fpoly_add(const FPoly& a, const FPoly& b);
FPoly fpoly_scale(const FPoly& a, const FieldElement& s);
/// f(x + a)
FPoly fpoly_shift_arg(const FPoly& f, const FieldElement& a);
/// f(s x)
FPoly fpoly_scale_arg(const FPoly& f, const FieldElement& s);
/// Embed coefficients into an extension field.
FPoly fpoly_embed(const FPoly& f, const FieldPtr& K);
/// a mod m (monic m) in K[x]
FPoly fpoly_mod(FPoly a, const FPoly& m);

struct NPSegment {
  long i0, i1;          // coefficient index range
  long slope_num;       // slope = slope_num / slope_den (reduced, den > 0)
  long slope_den;
  // roots on this segment have valuation -slope
};

/// Lower Newton polygon segments (zero-to-precision coefficients skipped).
std::vector<NPSegment> newton_polygon(const FPoly& f);

/// All roots of f in F (each reported once; simple-root Hensel lifting plus
/// recursive segment shifts for clustered residue roots).
std::vector<FieldElement> roots_in_field(const FPoly& f);

/// Newton iteration from x0; pre: v(f(x0)) > 2 v(f'(x0)).
FieldElement newton_lift(const FPoly& f, const FieldElement& x0);

/// Determinant by Gaussian elimination with min-valuation pivoting.
FieldElement fdet(const FieldPtr& F, std::vector<std::vector<FieldElement>> M);

/// Characteristic polynomial of a square matrix over F (permanent-style
/// expansion of det(yI - M); sizes here are <= 6).
FPoly char_poly(const FieldPtr& F, const std::vector<std::vector<FieldElement>>& M);

/// Multiplication matrix of x in the quotient ring F[t]/(m), m monic.
std::vector<std::vector<FieldElement>> quotient_mult_matrix(const FPoly& m, const FPoly& x);

}  // namespace localsym
