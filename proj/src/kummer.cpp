#include "localsym/kummer.hpp"

#include "localsym/poly.hpp"

namespace localsym {

namespace {

// Totally ramified degree-p extension K = F[x]/(x^p - u) for a wild unit
// class u: locate a uniformizer of K by successive Ore refinements of
// xi = u^(1/p) - t and rebuild K as an Eisenstein step from its minimal
// polynomial.
FieldPtr build_wild_unit_extension(const FieldPtr& F, const FieldElement& u, long p) {
  FPoly f{F, {F->neg(u), F->zero()}};
  f.c.resize(p + 1, F->zero());
  f.c[p] = F->one();

  RElt t0 = F->res_pth_root(F->residue(u));
  FPoly xi{F, {F->neg(F->lift(t0)), F->one()}};

  for (int it = 0; it < 4 * F->ram_index() * (int)p + 32; ++it) {
    auto M = quotient_mult_matrix(f, xi);
    FPoly g = char_poly(F, M);
    auto segs = newton_polygon(g);
    if (segs.size() != 1)
      fail(ErrKind::Internal, "minimal polynomial of a generator is not pure-sloped");
    long vK;  // valuation of xi in K-uniformizer units
    if (segs[0].slope_den == p)
      vK = -segs[0].slope_num;
    else if (segs[0].slope_den == 1)
      vK = -segs[0].slope_num * p;
    else
      fail(ErrKind::Internal, "unexpected slope denominator");
    if (vK % p != 0) {
      // eta = xi^a pi^b with a vK + b p = 1
      long a = fp::inv_mod(fp::norm(vK, p), p);
      long b = (1 - a * vK) / p;
      FPoly eta{F, {F->one()}};
      for (long i = 0; i < a; ++i) eta = fpoly_mod(fpoly_mul(eta, xi), f);
      FieldElement scale = b >= 0 ? F->pow(F->uniformizer(), b) : F->pow(F->uniformizer_inv(), -b);
      eta = fpoly_scale(eta, scale);
      FPoly mp = char_poly(F, quotient_mult_matrix(f, eta));
      return extend_eisenstein(F, mp.c);
    }
    // integral slope s = vK/p: subtract the residue of xi * pi^-s
    long s = vK / p;
    FieldElement c0 = F->shift(g.c[0], -vK);
    RElt cbar = F->res_pth_root(F->res_neg(F->residue(c0)));
    xi.c[0] = F->sub(xi.c[0], F->shift(F->lift(cbar), s));
  }
  fail(ErrKind::PrecisionExhausted, "uniformizer refinement did not terminate");
}

}  // namespace

KummerExtension kummer_extension(const FieldPtr& F, const FieldElement& u, long ell,
                                 UnitBasisPtr base) {
  if (!F->mu_ell_in_F(ell)) fail(ErrKind::MuNotInField, "Kummer theory needs mu_ell in F");
  if (!base) base = fstar_basis(F, ell);

  KummerExtension ext;
  ext.F = F;
  ext.u = u;
  ext.ell = ell;
  ext.base_fstar = base;

  auto triv = F->is_pth_power(u, ell);
  if (triv) {
    ext.cls = KummerClass::Trivial;
    ext.K = F;
    ext.root = *triv;
    return ext;
  }

  UnitClassVector cls = base->decompose(u);
  long vpi = cls.c.back();  // pi-coordinate

  if (vpi != 0) {
    // normalize the class to pi-exponent 1 and take x^ell - w Eisenstein
    long a = fp::norm(vpi, ell);
    long ainv = fp::inv_mod(a, ell);
    UnitClassVector cn = cls * ainv;
    FieldElement w = base->rep_of(cn);
    if (F->val_exact(w) != 1) fail(ErrKind::Internal, "normalized representative not uniformizing");
    std::vector<FieldElement> def(ell + 1, F->zero());
    def[0] = F->neg(w);
    def[ell] = F->one();
    ext.K = extend_eisenstein(F, def);
    ext.cls = KummerClass::Ramified;
    // u * w^-a is an ell-th power in F already
    FieldElement s0 = F->mul(u, F->pow(F->inv(w), a));
    auto s = F->is_pth_power(s0, ell);
    if (!s) fail(ErrKind::Internal, "class normalization lost the Kummer relation");
    FieldElement theta = ext.K->gen(ext.K->depth() - 1);
    ext.root = ext.K->mul(ext.K->pow(theta, a), ext.K->embed(*s));
    return ext;
  }

  // unit class: unramified iff u becomes an ell-th power in the unramified
  // degree-ell extension
  FieldPtr Funr = extend_unramified_canonical(F, (int)ell);
  auto unr_root = Funr->is_pth_power(Funr->embed(u), ell);
  if (unr_root) {
    ext.cls = KummerClass::Unramified;
    ext.K = Funr;
    ext.root = *unr_root;
    return ext;
  }

  ext.cls = KummerClass::Ramified;
  if (ell != F->p())
    fail(ErrKind::Internal, "tame unit class cannot be ramified");
  ext.K = build_wild_unit_extension(F, u, ell);
  auto root = ext.K->is_pth_power(ext.K->embed(u), ell);
  if (!root) fail(ErrKind::Internal, "rebuilt extension does not contain u^(1/ell)");
  ext.root = *root;
  return ext;
}

int NormSubgroup::codim() const {
  fp::Mat R = rows;
  return basis->dim() - fp::rank(R, basis->ell());
}

bool NormSubgroup::contains(const UnitClassVector& v) const {
  if (v.basis != basis) fail(ErrKind::MixedFields, "class vector in a different basis");
  return fp::in_span(rows, fp::Vec(v.c.begin(), v.c.end()), basis->ell());
}

NormSubgroup norm_subgroup(const KummerExtension& ext) {
  NormSubgroup ns;
  ns.basis = ext.base_fstar;
  long ell = ext.ell;
  if (ext.cls == KummerClass::Trivial) {
    for (int i = 0; i < ns.basis->dim(); ++i) {
      fp::Vec row(ns.basis->dim(), 0);
      row[i] = 1;
      ns.rows.push_back(row);
    }
    return ns;
  }
  UnitBasisPtr BK = fstar_basis(ext.K, ell);
  for (const auto& g : BK->gens()) {
    FieldElement n = norm_to_subfield(g.rep);
    auto d = ns.basis->decompose(n);
    ns.rows.push_back(fp::Vec(d.c.begin(), d.c.end()));
  }
  if (ns.codim() != 1)
    fail(ErrKind::Internal, "norm subgroup of a degree-ell extension must have index ell");
  return ns;
}

bool disjointness(const FieldPtr& F, const FieldElement& u, const FieldElement& v, long ell) {
  auto B = fstar_basis(F, ell);
  auto du = B->decompose(u), dv = B->decompose(v);
  fp::Mat M{fp::Vec(du.c.begin(), du.c.end()), fp::Vec(dv.c.begin(), dv.c.end())};
  return fp::rank(M, ell) == 2;
}

}  // namespace localsym
