#pragma once

#include <random>

#include "localsym/formal.hpp"
#include "localsym/galmod.hpp"
#include "localsym/hilbert.hpp"

namespace localsym {

/// A point class in E(F)/p: unit part in O_F*/p and etale part in F_p.
struct PointCoordinates {
  UnitClassVector ubar;
  long nbar = 0;
};

/// Coordinate machinery for E(F)/p over a fixed curve: requires good ordinary
/// reduction, mu_p in F and E[p] rational over F.  The etale anchor G is
/// normalized so that its unit part vanishes in the canonical splitting: G is
/// chosen p-divisible over the unramified degree-p extension.
struct SymbolContext {
  CurveModel E;
  SymbolForm form;      // Hilbert pairing on F*/p
  UnitBasisPtr ubasis;  // O_F*/p
  GmIso iso;
  FormalGroup fg;
  Series hinv;  // compositional inverse of iso.h
  // etale side
  std::vector<RPoint> pts;  // reduced points
  Int count;
  Int m_coprime;  // count = p^s * m
  int s_pow = 0;
  RPoint sylow_gen;
  PointOnE G;           // Hensel lift of the Sylow generator, n-coordinate 1
  UnitClassVector g0;   // canonical unit class of G (the splitting shear)
};

SymbolContext make_symbol_context(const CurveModel& E);
SymbolContext make_symbol_context(const CurveModel& E, const SymbolForm& form);

PointCoordinates point_coordinates(const SymbolContext& ctx, const PointOnE& P);

/// The formal point with coordinates (class of u, 0): h^(-1)(u - 1).
PointOnE formal_point_from_unit(const SymbolContext& ctx, const FieldElement& u);

/// Divide the etale part of PK over K and return the gm-class of the formal
/// remainder in O_K*/p coordinates; nullopt when the reduction is not
/// p-divisible.  The class vanishes iff PK lies in p E(K).
std::optional<UnitClassVector> formal_obstruction(const CurveModel& EK, const GmIso& isoK,
                                                  const UnitBasisPtr& BK, const PointOnE& PK);

SymbolValue galois_symbol(const SymbolContext& ctx, const PointOnE& P, const PointOnE& Q);

struct SymbolSearchResult {
  PointOnE P, Q;
  SymbolValue value;
  int tried = 0;
};

/// Randomized point search for a pair with nonzero symbol.  Refuses with
/// ClassifierSaysZero when the descriptor predicts a zero image.
SymbolSearchResult find_nontrivial_symbol(const CurveModel& E, unsigned long seed, int budget);

struct DivisionFieldPrediction {
  FieldPtr K;
  bool has_ramified_part = false;    // K1 = F(u_Q^(1/p)) nontrivial
  bool has_unramified_part = false;  // K2 = the unramified degree-p extension
  int degree = 1;
  KummerClass k1_class = KummerClass::Trivial;
};

/// The field of (1/p)Q predicted from the coordinates of Q.
DivisionFieldPrediction division_field_prediction(const SymbolContext& ctx, const PointOnE& Q);

struct DivisionFieldCheck {
  bool divided = false;      // found R over K with pR = Q
  int orbit_degree = 0;      // [F(R) : F] from the Galois orbit
  bool matches = false;      // orbit_degree == predicted degree
};

/// Divide Q by p directly over the predicted field and confirm the point
/// generates exactly the predicted extension.
DivisionFieldCheck verify_division_field(const SymbolContext& ctx, const PointOnE& Q,
                                         const DivisionFieldPrediction& pred);

/// All F-algebra automorphisms of K fixing the subfield F (K must be a tower
/// over F whose added steps split completely in K).
std::vector<std::vector<FieldElement>> tower_automorphisms(const FieldPtr& K, const FieldPtr& F);
FieldElement apply_automorphism(const FieldPtr& K, const std::vector<FieldElement>& images,
                                const FieldElement& x);

}  // namespace localsym
