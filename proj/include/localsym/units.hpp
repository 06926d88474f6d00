#pragma once

#include <memory>
#include <string>
#include <vector>

#include "localsym/fplinalg.hpp"
#include "localsym/padic.hpp"

namespace localsym {

class UnitBasis;
using UnitBasisPtr = std::shared_ptr<const UnitBasis>;

/// An element of O_F*/ell (or F*/ell) in the coordinates of a fixed basis.
struct UnitClassVector {
  UnitBasisPtr basis;
  std::vector<long> c;

  bool is_zero() const;
  UnitClassVector operator+(const UnitClassVector& o) const;
  UnitClassVector operator-() const;
  UnitClassVector operator*(long n) const;
  bool operator==(const UnitClassVector& o) const;
};

enum class GenProvenance { MuPart, Principal, Uniformizer };

struct BasisGen {
  FieldElement rep;
  GenProvenance prov;
  long level = 0;  // filtration level, Principal only
};

/// Basis of the F_ell-vector space O_F*/ell, optionally extended by the
/// uniformizer class (the F*/ell variant).  Coordinates are computed by a
/// digit-by-digit reduction through the principal-unit filtration.
class UnitBasis : public std::enable_shared_from_this<UnitBasis> {
 public:
  const FieldPtr& field() const { return F_; }
  long ell() const { return ell_; }
  bool with_uniformizer() const { return with_pi_; }
  int dim() const { return (int)gens_.size(); }
  const std::vector<BasisGen>& gens() const { return gens_; }

  /// Coordinates of u.  Unit variant: u must be a unit (NotAUnit otherwise);
  /// F*/ell variant: any nonzero element.
  UnitClassVector decompose(const FieldElement& u) const;

  /// A representative of the class: product of basis powers.
  FieldElement rep_of(const UnitClassVector& v) const;

  std::string provenance_label(int i) const;

 private:
  friend struct UnitBasisBuilder;
  UnitBasis() = default;

  FieldPtr F_;
  long ell_ = 0;
  bool with_pi_ = false;
  std::vector<BasisGen> gens_;
  fp::Mat Tinv_;  // unit-part coordinates: inverse of the walk-coordinate matrix
  int walk_dim_ = 0;
};

UnitBasisPtr unit_basis(const FieldPtr& F, long ell);
UnitBasisPtr fstar_basis(const FieldPtr& F, long ell);

namespace detail {

/// Filtration data for the ell = p walk.
struct Filtration {
  FieldPtr F;
  long ell = 0;
  bool ell_is_p = false;
  long imax = 0;  // p*e/(p-1) when integral, else 0
  bool has_extra = false;
  std::vector<long> coord_levels;  // p does not divide i, i < p e/(p-1)
  RElt lambda;                     // res(p * pi^-e)
  int extra_mono = -1;             // residue-basis index outside im(x -> x^p + lambda x)
  int slots = 0;                   // e*f (+1 with extra) for ell = p; 0/1 otherwise

  int slot_of(long level, int j) const;
};

Filtration make_filtration(const FieldPtr& F, long ell);

struct WalkResult {
  bool is_power = false;             // class trivial after removing recorded coordinates
  std::vector<long> coords;          // size filt.slots (coordinate mode)
  std::optional<FieldElement> root;  // set in root mode when is_power
};

/// Reduce the unit u through the filtration.  coordinate_mode: record digits
/// against the positional generators; otherwise any obstruction means
/// "not an ell-th power".
WalkResult unit_walk(const Filtration& filt, const FieldElement& u, bool coordinate_mode,
                     bool want_root);

}  // namespace detail
}  // namespace localsym
