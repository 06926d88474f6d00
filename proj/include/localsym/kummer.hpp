#pragma once

#include "localsym/units.hpp"

namespace localsym {

enum class KummerClass { Trivial, Unramified, Ramified };

/// K = F(u^(1/ell)) with its ramification classification.  K is always either
/// F itself (Trivial) or exactly one tower step above F, so the one-step norm
/// applies.  `root` satisfies root^ell = u in K.
struct KummerExtension {
  FieldPtr F;
  FieldElement u;
  long ell = 0;
  KummerClass cls = KummerClass::Trivial;
  FieldPtr K;
  FieldElement root;
  UnitBasisPtr base_fstar;  // F*/ell coordinates shared by norm_subgroup
};

/// pre: mu_ell in F, u != 0.  `base` (optional) fixes the F*/ell coordinate
/// system; a fresh one is built when absent.
KummerExtension kummer_extension(const FieldPtr& F, const FieldElement& u, long ell,
                                 UnitBasisPtr base = nullptr);

/// The image of N_{K/F} on K*/ell inside F*/ell, spanned by the norms of an
/// fstar basis of K.  Codimension is exactly 1 for nontrivial extensions.
struct NormSubgroup {
  UnitBasisPtr basis;
  fp::Mat rows;

  int codim() const;
  bool contains(const UnitClassVector& v) const;
};

NormSubgroup norm_subgroup(const KummerExtension& ext);

/// Linear independence of the two classes in F*/ell.
bool disjointness(const FieldPtr& F, const FieldElement& u, const FieldElement& v, long ell);

}  // namespace localsym
