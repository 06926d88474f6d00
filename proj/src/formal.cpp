#include "localsym/formal.hpp"

namespace localsym {

Series series_zero(const FieldPtr& F, int order) { return Series(order + 1, F->zero()); }

Series series_add(const Series& a, const Series& b) {
  const FieldPtr& F = a[0].field();
  Series r(std::max(a.size(), b.size()), F->zero());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F->add(r[i], a[i]);
  for (size_t i = 0; i < b.size(); ++i) r[i] = F->add(r[i], b[i]);
  return r;
}

Series series_mul(const Series& a, const Series& b) {
  const FieldPtr& F = a[0].field();
  size_t n = std::min(a.size(), b.size());  // shared truncation order
  Series r(n, F->zero());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j + i < n && j < b.size(); ++j)
      r[i + j] = F->add(r[i + j], F->mul(a[i], b[j]));
  }
  return r;
}

FieldElement series_eval(const Series& s, const FieldElement& z) {
  const FieldPtr& F = z.field();
  FieldElement acc = F->zero();
  for (long i = (long)s.size() - 1; i >= 0; --i) acc = F->add(F->mul(acc, z), s[i]);
  return acc;
}

Series series_compose(const Series& f, const Series& g) {
  const FieldPtr& F = f[0].field();
  if (!g.empty() && !g[0].is_zero()) fail(ErrKind::Internal, "composition needs g(0) = 0");
  Series r(f.size(), F->zero());
  Series gp(f.size(), F->zero());
  gp[0] = F->one();
  for (size_t k = 0; k < f.size(); ++k) {
    if (!f[k].is_zero())
      for (size_t i = 0; i < r.size(); ++i) r[i] = F->add(r[i], F->mul(f[k], gp[i]));
    if (k + 1 < f.size()) gp = series_mul(gp, g);
  }
  return r;
}

Series series_reversion(const Series& s) {
  const FieldPtr& F = s[0].field();
  int T = (int)s.size() - 1;
  if (!s[0].is_zero()) fail(ErrKind::Internal, "reversion needs s(0) = 0");
  FieldElement c1 = s[1];
  // Newton-free coefficientwise solve: r = sum r_k t^k with s(r(t)) = t
  Series r(T + 1, F->zero());
  r[1] = F->inv(c1);
  for (int k = 2; k <= T; ++k) {
    // coefficient of t^k in s(r(t)) with the current r (r_k = 0) must be
    // cancelled by c1 * r_k
    Series comp = series_compose(s, r);
    FieldElement delta = comp[k];
    r[k] = F->neg(F->div(delta, c1));
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

BiSeries bi_zero(const FieldPtr& F, int T) {
  BiSeries b(T + 1);
  for (int i = 0; i <= T; ++i) b[i].assign(T + 1 - i, F->zero());
  return b;
}

BiSeries bi_mul(const FieldPtr& F, const BiSeries& a, const BiSeries& b, int T) {
  BiSeries r = bi_zero(F, T);
  for (int i = 0; i < (int)a.size(); ++i)
    for (int j = 0; j < (int)a[i].size(); ++j) {
      if (a[i][j].is_zero()) continue;
      for (int k = 0; k + i <= T && k < (int)b.size(); ++k)
        for (int l = 0; l + j + k + i <= T && l < (int)b[k].size(); ++l)
          r[i + k][j + l] = F->add(r[i + k][j + l], F->mul(a[i][j], b[k][l]));
    }
  return r;
}

void bi_add_to(const FieldPtr& F, BiSeries& a, const BiSeries& b, const FieldElement& scale) {
  for (int i = 0; i < (int)b.size(); ++i)
    for (int j = 0; j < (int)b[i].size(); ++j)
      a[i][j] = F->add(a[i][j], F->mul(scale, b[i][j]));
}

// univariate f composed with a bivariate argument g (g(0,0) = 0)
BiSeries bi_compose(const FieldPtr& F, const Series& f, const BiSeries& g, int T) {
  BiSeries r = bi_zero(F, T);
  BiSeries gp = bi_zero(F, T);
  gp[0][0] = F->one();
  for (size_t k = 0; k < f.size(); ++k) {
    if (!f[k].is_zero()) bi_add_to(F, r, gp, f[k]);
    if (k + 1 < f.size()) gp = bi_mul(F, gp, g, T);
  }
  return r;
}

// invert a bivariate unit (constant term a unit)
BiSeries bi_inv(const FieldPtr& F, const BiSeries& a, int T) {
  BiSeries r = bi_zero(F, T);
  FieldElement c0 = F->inv(a[0][0]);
  r[0][0] = c0;
  // Newton: r <- r (2 - a r), doubling correct total degree
  for (int it = 0; it < 8 && (1 << it) <= 2 * T; ++it) {
    BiSeries ar = bi_mul(F, a, r, T);
    // 2 - ar
    BiSeries two = bi_zero(F, T);
    two[0][0] = F->from_int(2);
    for (int i = 0; i < (int)ar.size(); ++i)
      for (int j = 0; j < (int)ar[i].size(); ++j) two[i][j] = F->sub(two[i][j], ar[i][j]);
    r = bi_mul(F, r, two, T);
  }
  return r;
}

}  // namespace

FormalGroup formal_group(const CurveModel& E, int order, bool with_law) {
  const FieldPtr& F = E.F;
  int T = order;
  FormalGroup FG;
  FG.E = E;
  FG.order = T;

  // w(z) = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3, solved by
  // iteration to order z^(T+3); we keep w to index T+3 and s = w / z^3 to T
  int WT = T + 3;
  Series w(WT + 1, F->zero());
  w[3] = F->one();
  for (int it = 0; it < WT + 2; ++it) {
    Series w2(WT + 1, F->zero()), w3(WT + 1, F->zero());
    {
      Series t = series_mul(w, w);
      for (int i = 0; i <= WT && i < (int)t.size(); ++i) w2[i] = t[i];
      t = series_mul(w2, w);
      for (int i = 0; i <= WT && i < (int)t.size(); ++i) w3[i] = t[i];
    }
    Series nw(WT + 1, F->zero());
    nw[3] = F->one();
    for (int i = 0; i + 1 <= WT; ++i) {
      // a1 z w + a2 z^2 w
      if (i + 1 <= WT) nw[i + 1] = F->add(nw[i + 1], F->mul(E.a1, w[i]));
      if (i + 2 <= WT) nw[i + 2] = F->add(nw[i + 2], F->mul(E.a2, w[i]));
    }
    for (int i = 0; i <= WT; ++i) {
      nw[i] = F->add(nw[i], F->mul(E.a3, w2[i]));
      if (i + 1 <= WT) nw[i + 1] = F->add(nw[i + 1], F->mul(E.a4, w2[i]));
      nw[i] = F->add(nw[i], F->mul(E.a6, w3[i]));
    }
    w = std::move(nw);
  }
  FG.w = w;
  FG.s = Series(T + 1, F->zero());
  for (int i = 0; i <= T; ++i) FG.s[i] = w[i + 3];

  // omega(z) = (2 s + z s') / (s (2 - a1 z - a3 z^3 s))
  Series num(T + 1, F->zero()), den(T + 1, F->zero());
  for (int i = 0; i <= T; ++i) {
    num[i] = F->mul(FG.s[i], F->from_int(i + 2));  // 2 s_i + i s_i
    den[i] = F->zero();
  }
  {
    den[0] = F->from_int(2);
    if (T >= 1) den[1] = F->neg(E.a1);
    Series a3z3s(T + 1, F->zero());
    for (int i = 0; i + 3 <= T; ++i) a3z3s[i + 3] = F->mul(E.a3, FG.s[i]);
    for (int i = 0; i <= T; ++i) den[i] = F->sub(den[i], a3z3s[i]);
    den = series_mul(FG.s, den);
  }
  // series inverse of den (den[0] = 2, a unit)
  Series deninv(T + 1, F->zero());
  deninv[0] = F->inv(den[0]);
  for (int k = 1; k <= T; ++k) {
    FieldElement acc = F->zero();
    for (int j = 1; j <= k; ++j) acc = F->add(acc, F->mul(den[j], deninv[k - j]));
    deninv[k] = F->neg(F->mul(acc, deninv[0]));
  }
  FG.omega = series_mul(num, deninv);
  if (!F->eq(FG.omega[0], F->one()))
    fail(ErrKind::Internal, "invariant differential not normalized");

  // log = integral of omega
  FG.log = Series(T + 1, F->zero());
  for (int i = 0; i + 1 <= T; ++i) {
    // omega_i / (i+1)
    long k = i + 1;
    long a = 0, kk = k;
    while (kk % F->p() == 0) { kk /= F->p(); ++a; }
    FieldElement c = F->mul(FG.omega[i], F->inv(F->from_int(kk)));
    if (a) c = FieldElement(F, c.coords(), c.denom() + a, c.known());
    FG.log[i + 1] = c;
  }

  if (!with_law) return FG;

  // group law: third intersection then inversion
  // A = divided difference of w, nu = w(z1) - A z1
  BiSeries A = bi_zero(F, T), nu = bi_zero(F, T);
  for (int n = 0; n <= WT; ++n) {
    if (FG.w[n].is_zero()) continue;
    // (z2^n - z1^n)/(z2 - z1) = sum_{i+j=n-1} z1^i z2^j
    for (int i = 0; i + 1 <= n; ++i) {
      int j = n - 1 - i;
      if (i + j <= T) A[i][j] = F->add(A[i][j], FG.w[n]);
    }
    if (n <= T) nu[n][0] = F->add(nu[n][0], FG.w[n]);
  }
  {
    // nu = w(z1) - A z1: subtract shifted A
    for (int i = 0; i + 1 <= T; ++i)
      for (int j = 0; j + i + 1 <= T; ++j) nu[i + 1][j] = F->sub(nu[i + 1][j], A[i][j]);
  }
  BiSeries A2 = bi_mul(F, A, A, T);
  BiSeries A3 = bi_mul(F, A2, A, T);
  BiSeries Anu = bi_mul(F, A, nu, T);
  BiSeries A2nu = bi_mul(F, A2, nu, T);
  // numerator: a1 A + a2 nu + a3 A^2 + 2 a4 A nu + 3 a6 A^2 nu
  BiSeries numb = bi_zero(F, T);
  bi_add_to(F, numb, A, E.a1);
  bi_add_to(F, numb, nu, E.a2);
  bi_add_to(F, numb, A2, E.a3);
  bi_add_to(F, numb, Anu, F->mul(E.a4, F->from_int(2)));
  bi_add_to(F, numb, A2nu, F->mul(E.a6, F->from_int(3)));
  // denominator: 1 + a2 A + a4 A^2 + a6 A^3
  BiSeries denb = bi_zero(F, T);
  denb[0][0] = F->one();
  bi_add_to(F, denb, A, E.a2);
  bi_add_to(F, denb, A2, E.a4);
  bi_add_to(F, denb, A3, E.a6);
  BiSeries z3 = bi_mul(F, numb, bi_inv(F, denb, T), T);
  // z3 = -z1 - z2 - num/den
  for (int i = 0; i < (int)z3.size(); ++i)
    for (int j = 0; j < (int)z3[i].size(); ++j) z3[i][j] = F->neg(z3[i][j]);
  z3[1][0] = F->sub(z3[1][0], F->one());
  z3[0][1] = F->sub(z3[0][1], F->one());

  // inversion series i(z) = -z / (1 - a1 z - a3 z^3 s)
  Series invden(T + 1, F->zero());
  invden[0] = F->one();
  if (T >= 1) invden[1] = F->neg(E.a1);
  for (int i = 0; i + 3 <= T; ++i) invden[i + 3] = F->sub(invden[i + 3], F->mul(E.a3, FG.s[i]));
  Series invdeninv(T + 1, F->zero());
  invdeninv[0] = F->one();
  for (int k = 1; k <= T; ++k) {
    FieldElement acc = F->zero();
    for (int j = 1; j <= k; ++j) acc = F->add(acc, F->mul(invden[j], invdeninv[k - j]));
    invdeninv[k] = F->neg(acc);
  }
  Series iser(T + 1, F->zero());
  for (int i = 0; i + 1 <= T; ++i) iser[i + 1] = F->neg(invdeninv[i]);

  FG.law = bi_compose(F, iser, z3, T);
  return FG;
}

Series law_compose(const FormalGroup& FG, const Series& a, const Series& b) {
  const FieldPtr& F = FG.E.F;
  if (FG.law.empty()) fail(ErrKind::Internal, "formal group built without its law");
  int T = FG.order;
  // evaluate sum law[i][j] a^i b^j with truncated powers
  std::vector<Series> ap(T + 1), bp(T + 1);
  ap[0] = Series(T + 1, F->zero());
  ap[0][0] = F->one();
  bp[0] = ap[0];
  for (int i = 1; i <= T; ++i) {
    ap[i] = series_mul(ap[i - 1], a);
    bp[i] = series_mul(bp[i - 1], b);
  }
  Series r(T + 1, F->zero());
  for (int i = 0; i < (int)FG.law.size(); ++i)
    for (int j = 0; j < (int)FG.law[i].size(); ++j) {
      if (FG.law[i][j].is_zero()) continue;
      Series t = series_mul(ap[i], bp[j]);
      for (int k = 0; k <= T; ++k) r[k] = F->add(r[k], F->mul(FG.law[i][j], t[k]));
    }
  return r;
}

FieldElement law_eval(const FormalGroup& FG, const FieldElement& z1, const FieldElement& z2) {
  const FieldPtr& F = FG.E.F;
  if (FG.law.empty()) fail(ErrKind::Internal, "formal group built without its law");
  long v = std::min(F->val_exact(z1), F->val_exact(z2));
  std::vector<FieldElement> p1{F->one()}, p2{F->one()};
  for (int i = 1; i <= FG.order; ++i) {
    p1.push_back(F->mul(p1.back(), z1));
    p2.push_back(F->mul(p2.back(), z2));
  }
  FieldElement acc = F->zero();
  for (int i = 0; i < (int)FG.law.size(); ++i)
    for (int j = 0; j < (int)FG.law[i].size(); ++j) {
      if (FG.law[i][j].is_zero()) continue;
      acc = F->add(acc, F->mul(FG.law[i][j], F->mul(p1[i], p2[j])));
    }
  return cap_prec(acc, (FG.order + 1) * v);
}

Series formal_mult(const FormalGroup& FG, long n) {
  const FieldPtr& F = FG.E.F;
  int T = FG.order;
  Series id(T + 1, F->zero());
  id[1] = F->one();
  Series acc = id;
  for (long k = 2; k <= n; ++k) acc = law_compose(FG, acc, id);
  if (n == 0) return Series(T + 1, F->zero());
  return acc;
}

FieldElement formal_z(const CurveModel& E, const PointOnE& P) {
  if (P.infinity) return E.F->zero();
  return E.F->neg(E.F->div(P.x, P.y));
}

PointOnE formal_point(const FormalGroup& FG, const FieldElement& z) {
  const FieldPtr& F = FG.E.F;
  if (z.is_zero()) return point_at_infinity();
  long vz = F->val_exact(z);
  // x = z^-2 / s(z), y = -z^-3 / s(z); the unit series s keeps the truncation
  // error away from the negative powers
  FieldElement sv = series_eval(FG.s, z);
  FieldElement si = F->inv(sv);
  FieldElement zi = F->inv(z);
  FieldElement zi2 = F->mul(zi, zi);
  FieldElement x = F->mul(zi2, si);
  FieldElement y = F->neg(F->mul(F->mul(zi2, zi), si));
  long tail = (FG.order + 1) * vz;  // first dropped s-coefficient
  x = cap_prec(x, tail - 2 * vz);
  y = cap_prec(y, tail - 3 * vz);
  PointOnE P{false, x, y};
  if (!on_curve(FG.E, P)) fail(ErrKind::Internal, "formal point fails the curve equation");
  return P;
}

// ---------------------------------------------------------------------------
// Gm isomorphism
// ---------------------------------------------------------------------------

namespace {

// h = exp(c log) - 1 as a series to order T; integrality checked coefficientwise
Series exp_c_log(const FormalGroup& FG, const FieldElement& c, int T) {
  const FieldPtr& F = FG.E.F;
  Series cl(T + 1, F->zero());
  for (int i = 1; i <= T; ++i) cl[i] = F->mul(c, FG.log[i]);
  Series acc(T + 1, F->zero());
  Series pw(T + 1, F->zero());
  pw[0] = F->one();
  for (int k = 1; k <= T; ++k) {
    pw = series_mul(pw, cl);
    // divide by k!: accumulate 1/k each step
    long kk = k;
    long a = 0;
    while (kk % F->p() == 0) { kk /= F->p(); ++a; }
    Series term = pw;
    FieldElement ik = F->inv(F->from_int(kk));
    for (auto& t : term) {
      t = F->mul(t, ik);
      if (a) t = FieldElement(F, t.coords(), t.denom() + a, t.known());
    }
    pw = term;  // pw now holds (c log)^k / k!
    acc = series_add(acc, term);
  }
  return acc;
}

bool coeffs_integral(const Series& h, int upto) {
  for (int i = 0; i <= upto && i < (int)h.size(); ++i)
    if (h[i].denom() != 0) return false;
  return true;
}

}  // namespace

GmIso gm_isomorphism(const CurveModel& E, int order, int min_order) {
  const FieldPtr& F = E.F;
  long p = F->p();
  FormalGroup FG = formal_group(E, order, /*with_law=*/false);

  // Digit-by-digit beam over the scaling unit c.  Over ramified bases the
  // integrality conditions involve the pi-digits of c, so candidates range
  // over O_F* (pi-adic digits over the residue basis), not just Z_p*.
  int max_depth = (order / (int)(p - 1) + 2) * F->ram_index();
  std::vector<FieldElement> digit_set;  // residue-monomial lifts, including 0
  for (Int i = 0; i < F->res_card(); ++i) digit_set.push_back(F->lift(F->res_by_index(i)));

  std::vector<FieldElement> cands;
  for (Int i = 1; i < F->res_card(); ++i) cands.push_back(F->lift(F->res_by_index(i)));
  int depth = 1;

  int reached = 1;
  std::vector<FieldElement> best = cands;
  for (int j = 2; j <= order;) {
    std::vector<FieldElement> surviving;
    for (const auto& cv : cands) {
      Series h = exp_c_log(FG, cv, j);
      if (coeffs_integral(h, j)) surviving.push_back(cv);
    }
    if (!surviving.empty()) {
      cands = std::move(surviving);
      best = cands;
      reached = j;
      ++j;
      continue;
    }
    if (depth < max_depth && cands.size() < 256) {
      std::vector<FieldElement> ext;
      FieldElement pik = F->pow(F->uniformizer(), (long)depth);
      for (const auto& cv : cands)
        for (const auto& d : digit_set) ext.push_back(F->add(cv, F->mul(d, pik)));
      cands = std::move(ext);
      ++depth;
      continue;
    }
    break;
  }
  if (reached < min_order)
    fail(ErrKind::NoIntegralScaling,
         "no unit scaling makes the multiplicative coordinate integral to order " +
             std::to_string(min_order) + " (reached " + std::to_string(reached) + ")");
  GmIso iso;
  iso.F = F;
  iso.c = best.front();
  iso.h = exp_c_log(FG, iso.c, reached);
  iso.h.resize(reached + 1, F->zero());
  iso.valid_order = reached;
  return iso;
}

FieldElement gm_unit(const GmIso& iso, const FieldElement& z) {
  const FieldPtr& F = iso.F;
  return F->add(F->one(), series_eval(iso.h, z));
}

}  // namespace localsym
