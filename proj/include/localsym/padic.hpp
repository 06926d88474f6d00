#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "localsym/errors.hpp"

namespace localsym {

using Int = mpz_class;

class FieldDescriptor;
using FieldPtr = std::shared_ptr<const FieldDescriptor>;

enum class StepKind { Unramified, Eisenstein, Cyclotomic };

/// One extension step as requested by the caller.  Unramified steps carry the
/// residue polynomial (coefficient literals over the subfield, taken mod pi);
/// Eisenstein steps carry the full monic defining polynomial over the subfield.
struct StepSpec {
  StepKind kind = StepKind::Cyclotomic;
  int degree = 0;                           // ignored for Cyclotomic (always p-1)
  std::vector<std::string> coeff_literals;  // low -> high, length degree+1
};

/// Residue-field element: coordinates over the unramified monomial basis,
/// entries in [0, p).  Size = residue degree f.
using RElt = std::vector<long>;

/// An element of a tower field.  Value = coords / p^denom, where coords is an
/// integral coordinate vector (absolute monomial basis) known mod p^known.
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldPtr F, std::vector<Int> coords, int denom, int known);

  const FieldPtr& field() const { return F_; }
  const std::vector<Int>& coords() const { return c_; }
  int denom() const { return denom_; }
  int known() const { return known_; }

  /// Absolute precision in pi-digits: the value is known mod pi^abs_prec().
  int abs_prec() const;

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator*(long n) const;
  FieldElement operator*(const Int& n) const;

  bool is_zero() const;  // zero to working precision

 private:
  friend class FieldDescriptor;
  FieldPtr F_;
  std::vector<Int> c_;
  int denom_ = 0;
  int known_ = 0;
  void normalize();
};

struct TowerStep {
  StepKind kind = StepKind::Cyclotomic;
  int degree = 0;
  // Monic defining polynomial: degree+1 coefficient blocks, each a flat
  // coordinate vector over the subfield (the leading block is 1).
  std::vector<std::vector<Int>> def;
  // Unramified steps: residue polynomial over the subfield's residue basis.
  std::vector<RElt> residue_poly;
};

class FieldDescriptor : public std::enable_shared_from_this<FieldDescriptor> {
 public:
  long p() const { return p_; }
  int degree() const { return d_; }      // [F : Q_p]
  int ram_index() const { return e_; }   // e
  int res_degree() const { return f_; }  // f, q = p^f
  const Int& res_card() const { return q_; }
  int precision() const { return e_ * Mw_; }  // pi-digits
  int bottom_digits() const { return Mw_; }   // coords live mod p^Mw
  const Int& bottom_modulus() const { return pM_; }
  long ell_hint() const { return ell_hint_; }

  const FieldPtr& parent() const { return parent_; }  // null for Q_p
  const TowerStep& top_step() const { return step_; }
  bool is_base() const { return !parent_; }
  int depth() const { return depth_; }
  const std::vector<int>& step_degrees() const { return step_deg_; }
  const std::vector<StepKind>& step_kinds() const { return step_kind_; }

  const FieldElement& uniformizer() const { return pi_; }
  const FieldElement& uniformizer_inv() const { return pi_inv_; }

  // ---- element constructors ----
  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_int(const Int& n) const;
  FieldElement from_coords(std::vector<Int> coords, int denom = 0) const;
  FieldElement gen(int level) const;  // generator of step `level` (0-based)
  /// Embed an element of an ancestor field into this field.
  FieldElement embed(const FieldElement& x) const;
  /// Project onto the parent; fails unless the top-generator coordinates vanish.
  FieldElement project_to_parent(const FieldElement& x) const;

  // ---- arithmetic ----
  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement neg(const FieldElement& a) const;
  FieldElement inv(const FieldElement& a) const;
  FieldElement div(const FieldElement& a, const FieldElement& b) const;
  FieldElement pow(const FieldElement& a, const Int& n) const;
  FieldElement pow(const FieldElement& a, long n) const;

  /// Exact valuation in pi-units; nullopt when the element is indistinguishable
  /// from 0 at working precision.
  std::optional<long> valuation(const FieldElement& x) const;
  long val_exact(const FieldElement& x) const;  // raises PrecisionExhausted

  bool eq(const FieldElement& a, const FieldElement& b) const;

  FieldElement unit_part(const FieldElement& x, long* v_out = nullptr) const;
  FieldElement shift(const FieldElement& x, long k) const;  // x * pi^k

  // ---- residue field (elements: RElt over the unramified monomial basis) ----
  RElt residue(const FieldElement& x) const;  // pre: integral
  FieldElement lift(const RElt& r) const;
  RElt res_add(const RElt& a, const RElt& b) const;
  RElt res_sub(const RElt& a, const RElt& b) const;
  RElt res_neg(const RElt& a) const;
  RElt res_mul(const RElt& a, const RElt& b) const;
  RElt res_inv(const RElt& a) const;
  RElt res_pow(const RElt& a, const Int& n) const;
  RElt res_zero() const { return RElt(f_, 0); }
  RElt res_one() const;
  RElt res_from_int(long n) const;
  bool res_is_zero(const RElt& a) const;
  bool res_eq(const RElt& a, const RElt& b) const;
  RElt res_by_index(const Int& i) const;  // base-p digits of i
  Int res_index(const RElt& a) const;
  RElt res_pth_root(const RElt& a) const;  // Frobenius is bijective
  RElt res_generator() const;              // fixed generator of k*
  long res_dlog_mu_ell(const RElt& a, long ell) const;

  /// Digit of x at pi-level i: residue(x * pi^-i).  pre: val(x) >= i.
  RElt digit(const FieldElement& x, long i) const;

  FieldElement teichmuller(const RElt& r) const;

  // ---- mu and zeta ----
  bool mu_ell_in_F(long ell) const;
  FieldElement zeta(long ell) const;  // pre: mu_ell_in_F(ell)

  // ---- analytic ----
  FieldElement padic_log(const FieldElement& u) const;  // v(u-1) >= 1
  FieldElement padic_exp(const FieldElement& x) const;  // v(x) > e/(p-1)

  /// ell-th power test with root extraction (implemented with the unit
  /// filtration machinery; see units.cpp).
  std::optional<FieldElement> is_pth_power(const FieldElement& u, long ell) const;

  // ---- printing / parsing ----
  std::string print(const FieldElement& x) const;
  FieldElement parse(const std::string& literal) const;
  std::string gen_name(int level) const;

 private:
  friend struct FieldBuilder;
  friend class FieldElement;
  FieldDescriptor() = default;

  long p_ = 0;
  int d_ = 1, e_ = 1, f_ = 1;
  Int q_;
  int Mw_ = 0;
  Int pM_;
  int depth_ = 0;
  long ell_hint_ = 0;
  FieldPtr parent_;
  TowerStep step_;  // meaningless when is_base()

  FieldElement pi_, pi_inv_;
  std::vector<int> unram_monomials_;
  std::vector<int> step_deg_;
  std::vector<StepKind> step_kind_;
  int uniformizer_level_ = -1;  // -1: pi = p

  std::vector<int> res_deg_;
  std::vector<std::vector<RElt>> res_def_;

  mutable std::optional<bool> mu_p_cache_;
  mutable std::optional<FieldElement> zeta_p_cache_;

  void mul_rec(int level, const Int* a, const Int* b, Int* out) const;
  void reduce_block(int level, Int* t, Int* out) const;
  void res_mul_rec(int level, const long* a, const long* b, long* out) const;
  FieldElement inv_unit(const FieldElement& u) const;
  void canonicalize(std::vector<Int>& c, int known) const;
};

/// Build a tower over Q_p.  precision: working pi-digit precision, default
/// max(60, 10*ceil(ell*e/(ell-1))) with ell = ell_hint (or p).
FieldPtr make_field(long p, const std::vector<StepSpec>& steps, int precision = -1,
                    long ell_hint = 0);

/// One-step extensions of an existing field.
FieldPtr extend_unramified(const FieldPtr& F, const std::vector<RElt>& residue_poly);
FieldPtr extend_eisenstein(const FieldPtr& F, const std::vector<FieldElement>& monic_def);

/// Canonical unramified extension of degree n (first irreducible residue
/// polynomial in a deterministic scan).
FieldPtr extend_unramified_canonical(const FieldPtr& F, int n);
std::vector<RElt> canonical_residue_poly(const FieldPtr& F, int n);

/// Norm / trace to the parent field through the top tower step.
FieldElement norm_to_subfield(const FieldElement& x);
FieldElement trace_to_subfield(const FieldElement& x);

/// Cap the certified absolute precision to n pi-digits (used when a value
/// carries truncation error the coefficient bookkeeping cannot see, e.g.
/// evaluations of truncated power series).
FieldElement cap_prec(const FieldElement& x, long n);

}  // namespace localsym
