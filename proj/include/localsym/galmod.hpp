#pragma once

#include <optional>

#include "localsym/elliptic.hpp"
#include "localsym/kummer.hpp"

namespace localsym {

enum class ReductionType { GoodOrdinary, MultiplicativeSplit, MultiplicativeNonsplit };

/// Shape of the Galois module E[ell]: triangular with an unramified quotient
/// character nu; wildness tracks the pro-p inertia action.
struct ModuleDescriptor {
  long ell = 0;
  ReductionType reduction_type = ReductionType::GoodOrdinary;
  int nu_order = 1;
  long nu_frob = 1;  // value of nu on Frobenius, in [1, ell)
  bool is_semisimple = false;
  bool is_wild = false;
  /// Unit class e with F(e^(1/ell)) = F(E[ell]); present in the
  /// non-semisimple case with nu = 1 and mu_ell in F.
  std::optional<UnitClassVector> x_generator;
};

enum class ClassCase { Wild, Semisimple, UnramifiedNonSemisimple };

/// Splitting-field data at descriptor level (chi-part normalized away, so the
/// degrees quote the nu- and wild-parts only).
struct ClassificationCase {
  ClassCase c = ClassCase::Semisimple;
  int splitting_degree = 1;
  bool ramified = false;
};

/// The good-ordinary trichotomy.  pre: reduction_type = GoodOrdinary.
ClassificationCase classify(const ModuleDescriptor& d);

/// Dimension of the symbol image: 1 iff not wild, nu^2 = 1 and mu_ell in F
/// (good ordinary); 1 iff mu_ell in F (multiplicative).
int im_sp_dimension(const ModuleDescriptor& d, const FieldPtr& F);

/// Upper bound from the diagonal-character computation: 1 iff mu_ell in F and
/// nu^2 = 1.  Always >= im_sp_dimension.
int h2_c2_dimension(const ModuleDescriptor& d, const FieldPtr& F);

/// Extract the descriptor from a curve: nu from the unit root of the Frobenius
/// polynomial mod ell, wildness/semisimplicity from division-polynomial
/// rationality over the cyclotomic-unramified auxiliary towers.
ModuleDescriptor descriptor_from_curve(const CurveModel& E, long ell);

void validate_descriptor(const ModuleDescriptor& d);

}  // namespace localsym
