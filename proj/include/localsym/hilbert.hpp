#pragma once

#include <string>

#include "localsym/kummer.hpp"

namespace localsym {

/// The degree-ell Hilbert pairing on F*/ell as a skew-symmetric matrix over
/// F_ell in fstar-basis coordinates, pinned up to one global scalar by a
/// normalization convention recorded in `tag`.
struct SymbolForm {
  FieldPtr F;
  long ell = 0;
  UnitBasisPtr basis;  // F*/ell coordinates
  fp::Mat mat;
  std::string tag;
};

/// A value in Br_F[ell] = F_ell; only comparable within one normalization tag.
struct SymbolValue {
  long v = 0;
  std::string tag;

  bool operator==(const SymbolValue& o) const { return v == o.v && tag == o.tag; }
  bool zero() const { return v == 0; }
};

/// Reconstruct the pairing from norm subgroups: each basis row is the
/// functional cutting out the norm hyperplane of F(e_i^(1/ell)); relative
/// scalars are fixed by the product extensions F((e_1 e_j)^(1/ell)) and the
/// global scalar by B(pi, e*) = 1 at the first non-orthogonal basis unit.
SymbolForm build_symbol_form(const FieldPtr& F, long ell);

SymbolValue eval_symbol(const FieldElement& u, const FieldElement& v, const SymbolForm& form);

/// Pairing on coordinate vectors; vectors of size dim-1 are padded with a
/// zero uniformizer coordinate (unit classes inside F*/ell).
SymbolValue eval_symbol_classes(const std::vector<long>& a, const std::vector<long>& b,
                                const SymbolForm& form);

/// Closed-form tame symbol for ell != p: discrete log of
/// omega((-1)^{v(u)v(v)} u^{v(v)} v^{-v(u)})^((q-1)/ell) against zeta_ell(k).
/// Agrees with build_symbol_form up to the global scalar.
SymbolValue tame_symbol(const FieldElement& u, const FieldElement& v, long ell);

}  // namespace localsym
