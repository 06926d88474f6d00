#include "localsym/galmod.hpp"

#include "localsym/tate.hpp"

namespace localsym {

void validate_descriptor(const ModuleDescriptor& d) {
  if (d.ell < 3) fail(ErrKind::InconsistentDescriptor, "ell must be an odd prime");
  if (d.is_wild && d.is_semisimple)
    fail(ErrKind::InconsistentDescriptor, "wild inertia action forces non-semisimplicity");
  if (d.nu_frob <= 0 || d.nu_frob >= d.ell)
    fail(ErrKind::InconsistentDescriptor, "nu(Frob) must lie in (Z/ell)*");
  long ord = 1, x = d.nu_frob;
  while (x != 1) {
    x = (x * d.nu_frob) % d.ell;
    ++ord;
    if (ord > d.ell) fail(ErrKind::InconsistentDescriptor, "nu_frob is not a unit");
  }
  if (ord != d.nu_order)
    fail(ErrKind::InconsistentDescriptor, "nu_order does not match the order of nu_frob");
  if (d.reduction_type == ReductionType::MultiplicativeSplit && d.nu_order != 1)
    fail(ErrKind::InconsistentDescriptor, "split multiplicative reduction has nu = 1");
  if (d.reduction_type == ReductionType::MultiplicativeNonsplit && d.nu_order != 2)
    fail(ErrKind::InconsistentDescriptor, "nonsplit multiplicative reduction has quadratic nu");
}

ClassificationCase classify(const ModuleDescriptor& d) {
  if (d.reduction_type != ReductionType::GoodOrdinary)
    fail(ErrKind::WrongReductionType, "classification applies to good ordinary reduction");
  validate_descriptor(d);
  ClassificationCase c;
  if (d.is_wild) {
    c.c = ClassCase::Wild;
    c.splitting_degree = (int)d.ell * d.nu_order;
    c.ramified = true;
  } else if (d.is_semisimple) {
    c.c = ClassCase::Semisimple;
    c.splitting_degree = d.nu_order;
    c.ramified = false;
  } else {
    c.c = ClassCase::UnramifiedNonSemisimple;
    c.splitting_degree = (int)d.ell;
    c.ramified = false;
  }
  return c;
}

int im_sp_dimension(const ModuleDescriptor& d, const FieldPtr& F) {
  validate_descriptor(d);
  bool mu = F->mu_ell_in_F(d.ell);
  if (d.reduction_type == ReductionType::GoodOrdinary)
    return (!d.is_wild && d.nu_order <= 2 && mu) ? 1 : 0;
  return mu ? 1 : 0;
}

int h2_c2_dimension(const ModuleDescriptor& d, const FieldPtr& F) {
  if (d.reduction_type != ReductionType::GoodOrdinary)
    fail(ErrKind::WrongReductionType, "bound computed in the good ordinary case");
  validate_descriptor(d);
  return (F->mu_ell_in_F(d.ell) && d.nu_order <= 2) ? 1 : 0;
}

namespace {

// F(mu_p) as a tower step; only the Eisenstein (totally ramified) case is
// supported, which covers every base with e prime to p-1 (in particular Q_p).
FieldPtr with_mu_p(const FieldPtr& F) {
  if (F->mu_ell_in_F(F->p())) return F;
  long p = F->p();
  std::vector<FieldElement> def;
  for (long k = 0; k <= p - 1; ++k) {
    Int c;
    mpz_bin_uiui(c.get_mpz_t(), (unsigned long)p, (unsigned long)(k + 1));
    def.push_back(F->from_int(c));
  }
  return extend_eisenstein(F, def);
}

}  // namespace

ModuleDescriptor descriptor_from_curve(const CurveModel& E, long ell) {
  const FieldPtr& F = E.F;
  ReductionData rd = reduction_analysis(E);
  ModuleDescriptor d;
  d.ell = ell;

  if (rd.type == RedType::Multiplicative) {
    d.reduction_type = rd.split ? ReductionType::MultiplicativeSplit
                                : ReductionType::MultiplicativeNonsplit;
    d.nu_order = rd.split ? 1 : 2;
    d.nu_frob = rd.split ? 1 : ell - 1;
    d.is_wild = false;
    d.is_semisimple = false;
    if (rd.split) {
      // the module splits iff the Tate parameter is an ell-th power
      TateCurve tc = tate_parameter(E);
      d.is_semisimple = F->is_pth_power(tc.q_param, ell).has_value();
    }
    return d;
  }
  if (rd.type != RedType::Good) fail(ErrKind::BadReduction, "additive reduction unsupported");
  if (ell != F->p())
    fail(ErrKind::WrongReductionType,
         "good reduction descriptors are computed at ell = p (image vanishes for ell != p)");
  if (!rd.ordinary) fail(ErrKind::SupersingularReduction, "a_q = 0 mod p");

  long p = F->p();
  d.reduction_type = ReductionType::GoodOrdinary;
  {
    Int am = rd.a_q % p;
    if (am < 0) am += p;
    d.nu_frob = am.get_si();
  }
  d.nu_order = 1;
  {
    long x = d.nu_frob;
    while (x != 1) {
      x = (x * d.nu_frob) % p;
      ++d.nu_order;
    }
  }

  // E[p] rational over L = F(mu_p, nu)  <=>  semisimple
  FieldPtr L = with_mu_p(F);
  if (d.nu_order > 1) L = extend_unramified_canonical(L, d.nu_order);
  CurveModel EL = L == F ? E : curve_embed(E, L);
  Int npts = torsion_count(EL, p);
  if (npts == p * p) {
    d.is_semisimple = true;
    d.is_wild = false;
  } else {
    d.is_semisimple = false;
    // wild iff E[p] stays irrational over the unramified p-extension of L
    FieldPtr L2 = extend_unramified_canonical(L, (int)p);
    Int npts2 = torsion_count(curve_embed(E, L2), p);
    d.is_wild = (npts2 != p * p);
  }

  // distinguished class: F(e^(1/p)) = F(E[p]) in the non-semisimple case with
  // nu = 1 and mu_p rational
  if (!d.is_semisimple && d.nu_order == 1 && F->mu_ell_in_F(p)) {
    auto B = unit_basis(F, p);
    auto BF = fstar_basis(F, p);
    int n = B->dim();
    Int lines = 1;
    for (int i = 0; i < n; ++i) lines *= p;
    bool found = false;
    for (Int code = 1; code < lines && !found; ++code) {
      std::vector<long> c(n, 0);
      Int t = code;
      for (int i = 0; i < n; ++i) {
        Int dg = t % p;
        t /= p;
        c[i] = dg.get_si();
      }
      // one representative per line: first nonzero coordinate = 1
      int lead = -1;
      for (int i = 0; i < n; ++i)
        if (c[i]) { lead = i; break; }
      if (lead < 0 || c[lead] != 1) continue;
      UnitClassVector v{B, c};
      FieldElement u = B->rep_of(v);
      auto ext = kummer_extension(F, u, p, BF);
      if (ext.cls == KummerClass::Trivial) continue;
      if (torsion_count(curve_embed(E, ext.K), p) == p * p) {
        d.x_generator = v;
        found = true;
      }
    }
    if (!found)
      fail(ErrKind::InconsistentDescriptor,
           "no unit class generates the division field although E[p] is non-semisimple");
  }
  return d;
}

}  // namespace localsym
