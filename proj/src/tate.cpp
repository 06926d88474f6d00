#include "localsym/tate.hpp"

namespace localsym {

namespace {

// exact integer q-expansions, truncated at T+1 terms
using IPoly = std::vector<Int>;

IPoly imul(const IPoly& a, const IPoly& b, int T) {
  IPoly r(T + 1, Int(0));
  for (int i = 0; i <= T && i < (int)a.size(); ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; i + j <= T && j < (int)b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

// inverse of a series with constant term 1
IPoly iinv(const IPoly& a, int T) {
  IPoly r(T + 1, Int(0));
  r[0] = 1;
  for (int k = 1; k <= T; ++k) {
    Int acc = 0;
    for (int j = 1; j <= k && j < (int)a.size(); ++j) acc += a[j] * r[k - j];
    r[k] = -acc;
  }
  return r;
}

IPoly icompose(const IPoly& f, const IPoly& g, int T) {
  IPoly r(T + 1, Int(0));
  IPoly gp(T + 1, Int(0));
  gp[0] = 1;
  for (int k = 0; k <= T && k < (int)f.size(); ++k) {
    if (f[k] != 0)
      for (int i = 0; i <= T; ++i) r[i] += f[k] * gp[i];
    if (k + 1 <= T) gp = imul(gp, g, T);
  }
  return r;
}

// 1/j = Delta / E4^3 as a q-series (integral, starts at q)
IPoly jinv_series(int T) {
  IPoly e4(T + 1, Int(0));
  e4[0] = 1;
  for (int n = 1; n <= T; ++n) {
    Int s3 = 0;
    for (int d = 1; d <= n; ++d)
      if (n % d == 0) s3 += Int(d) * d * d;
    e4[n] = 240 * s3;
  }
  IPoly delta(T + 1, Int(0));
  delta[1] = 1;  // q * prod (1-q^n)^24
  for (int n = 1; n <= T; ++n) {
    IPoly base(T + 1, Int(0));
    base[0] = 1;
    if (n <= T) base[n] = -1;
    IPoly pw(T + 1, Int(0));
    pw[0] = 1;
    int e = 24;
    IPoly cur = base;
    while (e) {
      if (e & 1) pw = imul(pw, cur, T);
      e >>= 1;
      if (e) cur = imul(cur, cur, T);
    }
    delta = imul(delta, pw, T);
  }
  IPoly e43 = imul(imul(e4, e4, T), e4, T);
  return imul(delta, iinv(e43, T), T);
}

// reversion of s (s[0] = 0, s[1] = 1) over Z
IPoly ireversion(const IPoly& s, int T) {
  IPoly r(T + 1, Int(0));
  r[1] = 1;
  for (int k = 2; k <= T; ++k) {
    IPoly comp = icompose(s, r, T);
    r[k] = -comp[k];
  }
  return r;
}

FieldElement eval_ipoly(const FieldPtr& F, const IPoly& s, const FieldElement& t) {
  FieldElement acc = F->zero();
  for (long i = (long)s.size() - 1; i >= 0; --i)
    acc = F->add(F->mul(acc, t), F->from_int(s[i]));
  return acc;
}

// s_k(q) = sum n^k q^n / (1 - q^n)
FieldElement sk_series(const FieldPtr& F, const FieldElement& q, int k) {
  long vq = F->val_exact(q);
  long N = F->precision();
  FieldElement acc = F->zero();
  FieldElement qn = F->one();
  for (long n = 1; n * vq <= N + vq; ++n) {
    qn = F->mul(qn, q);
    Int nk(n);
    for (int i = 1; i < k; ++i) nk *= n;
    FieldElement term = F->mul(F->from_int(nk), F->div(qn, F->sub(F->one(), qn)));
    acc = F->add(acc, term);
  }
  return acc;
}

}  // namespace

CurveModel tate_curve_from_q(const FieldPtr& F, const FieldElement& q) {
  if (F->val_exact(q) < 1) fail(ErrKind::NotMultiplicative, "Tate parameter needs v(q) >= 1");
  FieldElement s3 = sk_series(F, q, 3);
  FieldElement s5 = sk_series(F, q, 5);
  FieldElement a4 = F->neg(F->mul(s3, F->from_int(5)));
  FieldElement a6 = F->neg(F->div(F->add(F->mul(s3, F->from_int(5)), F->mul(s5, F->from_int(7))),
                                  F->from_int(12)));
  return make_curve(F, F->one(), F->zero(), F->zero(), a4, a6);
}

TateCurve tate_parameter(const CurveModel& E) {
  const FieldPtr& F = E.F;
  auto vj = F->valuation(E.j);
  if (!vj || *vj >= 0) fail(ErrKind::NotMultiplicative, "v(j) >= 0: not a Tate curve");
  ReductionData rd = reduction_analysis(E);
  if (rd.type != RedType::Multiplicative)
    fail(ErrKind::NotMultiplicative, "reduction is not multiplicative");
  if (!rd.split)
    fail(ErrKind::NonSplit, "nonsplit multiplicative reduction: twist by the unramified "
                            "quadratic character to reach the split case");
  long vq = -*vj;
  FieldElement t = F->inv(E.j);
  int T = (int)(F->precision() / vq) + 2;
  IPoly rev = ireversion(jinv_series(T), T);
  FieldElement q = cap_prec(eval_ipoly(F, rev, t), (long)(T + 1) * vq);
  if (F->val_exact(q) != vq) fail(ErrKind::Internal, "inverted parameter has the wrong valuation");
  TateCurve tc;
  tc.F = F;
  tc.q_param = q;
  tc.E = E;
  tc.split = true;
  return tc;
}

namespace {

// X, Y and dX/dw of the parametrization at w, summed until the tail falls
// below the working precision; *err receives the first dropped valuation
struct TateEval {
  FieldElement X, Y, dX;
  long err;
};

TateEval tate_eval(const TateCurve& tc, const FieldElement& w) {
  const FieldPtr& F = tc.F;
  long vq = F->val_exact(tc.q_param);
  long vw = F->val_exact(w);
  if (vw < 0 || vw >= vq) fail(ErrKind::Internal, "normalize v(w) into [0, v(q)) first");
  long N = F->precision();
  auto one = F->one();
  auto t_term = [&](const FieldElement& t, FieldElement& x, FieldElement& y2, FieldElement& dx) {
    // x += t/(1-t)^2 ; y2 += t^2/(1-t)^3 ; dx += (1+t)/(1-t)^3 * (dt-factor applied by caller)
    FieldElement om = F->sub(one, t);
    FieldElement om2 = F->mul(om, om);
    FieldElement om3 = F->mul(om2, om);
    x = F->add(x, F->div(t, om2));
    y2 = F->add(y2, F->div(F->mul(t, t), om3));
    dx = F->add(dx, F->div(F->add(one, t), om3));
  };
  FieldElement X = F->zero(), Y = F->zero(), dX = F->zero();
  // n = 0 term (only when w is not principal-unit-like handled by caller)
  {
    FieldElement om = F->sub(one, w);
    FieldElement om2 = F->mul(om, om);
    FieldElement om3 = F->mul(om2, om);
    X = F->div(w, om2);
    Y = F->div(F->mul(w, w), om3);
    dX = F->div(F->add(one, w), om3);
  }
  FieldElement qn = F->one();
  long n = 1;
  for (;; ++n) {
    qn = F->mul(qn, tc.q_param);
    long tail = std::min(n * vq + vw, n * vq - vw);
    if (tail > N + vq) break;
    // positive direction t = q^n w
    {
      FieldElement t = F->mul(qn, w);
      FieldElement om = F->sub(one, t);
      FieldElement om2 = F->mul(om, om);
      FieldElement om3 = F->mul(om2, om);
      X = F->add(X, F->div(t, om2));
      Y = F->add(Y, F->div(F->mul(t, t), om3));
      dX = F->add(dX, F->mul(qn, F->div(F->add(one, t), om3)));
    }
    // negative direction tau = q^n / w
    {
      FieldElement tau = F->div(qn, w);
      FieldElement om = F->sub(one, tau);
      FieldElement om2 = F->mul(om, om);
      FieldElement om3 = F->mul(om2, om);
      X = F->add(X, F->div(tau, om2));
      Y = F->sub(Y, F->div(tau, om3));
      // d(tau)/dw = -tau/w; d/dtau [tau/(1-tau)^2] = (1+tau)/(1-tau)^3
      dX = F->sub(dX, F->mul(F->div(tau, w), F->div(F->add(one, tau), om3)));
    }
    // correction terms
    {
      FieldElement om = F->sub(one, qn);
      FieldElement om2 = F->mul(om, om);
      X = F->sub(X, F->mul(F->from_int(2), F->div(qn, om2)));
      Y = F->add(Y, F->div(qn, om2));
    }
    if (n > 4 * N + 16) fail(ErrKind::Internal, "Tate series failed to converge");
  }
  long err = std::min((n + 1) * vq + vw, (n + 1) * vq - vw);
  return TateEval{cap_prec(X, err), cap_prec(Y, err), cap_prec(dX, err), err};
}

}  // namespace

PointOnE tate_point(const TateCurve& tc, const FieldElement& w) {
  const FieldPtr& F = tc.F;
  // normalize into the fundamental domain 0 <= v(w) < v(q)
  long vq = F->val_exact(tc.q_param);
  long vw = F->val_exact(w);
  FieldElement wn = w;
  long k = vw >= 0 ? vw / vq : (vw - vq + 1) / vq;
  if (k != 0) wn = F->mul(w, F->pow(F->inv(tc.q_param), k));
  auto ev = tate_eval(tc, wn);
  // the model is y^2 + xy = x^3 + a4 x + a6 with (X, Y) as above
  PointOnE P{false, ev.X, ev.Y};
  if (!on_curve(tc.E, P)) fail(ErrKind::Internal, "Tate point fails the curve equation");
  return P;
}

FieldElement tate_uniformizer_parameter(const PointOnE& P, const TateCurve& tc) {
  const FieldPtr& F = tc.F;
  if (P.infinity) fail(ErrKind::Internal, "the origin has no uniformizer parameter");
  long vq = F->val_exact(tc.q_param);
  auto vx = F->valuation(P.x);

  std::vector<FieldElement> starts;
  if (vx && *vx > 0) {
    // node-reducing point: either X ~ w (v(w) = v(x)) or X ~ q/w
    FieldElement lead = F->mul(F->lift(F->digit(P.x, *vx)), F->pow(F->uniformizer(), *vx));
    if (*vx < vq) starts.push_back(lead);
    long vw2 = vq - *vx;
    if (vw2 > 0 && vw2 < vq) starts.push_back(F->div(tc.q_param, lead));
  } else if (vx && *vx == 0) {
    // smooth non-identity reduction: w = y/(x+y) mod pi on the reduced model
    FieldElement s = F->add(P.x, P.y);
    if (s.is_zero() || F->val_exact(s) != 0)
      fail(ErrKind::PrecisionExhausted, "degenerate reduction parameter");
    starts.push_back(F->lift(F->residue(F->div(P.y, s))));
  } else {
    // kernel of reduction: w = 1 - r with r^2 ~ 1/x
    FieldElement xinv = F->inv(P.x);
    auto r = F->is_pth_power(xinv, 2);
    if (!r) fail(ErrKind::Internal, "kernel-of-reduction point with non-square 1/x");
    starts.push_back(F->sub(F->one(), *r));
    starts.push_back(F->add(F->one(), *r));
  }

  for (const auto& w0 : starts) {
    FieldElement w = w0;
    bool ok = false;
    for (int it = 0; it < 80; ++it) {
      auto ev = tate_eval(tc, w);
      FieldElement fx = F->sub(ev.X, P.x);
      if (fx.is_zero()) {
        ok = true;
        break;
      }
      auto vf = F->valuation(fx);
      auto vd = F->valuation(ev.dX);
      if (!vf || (vd && *vf <= 2 * *vd)) break;  // not converging from this start
      w = F->sub(w, F->div(fx, ev.dX));
    }
    if (!ok) continue;
    // disambiguate P from -P via the Y coordinate
    auto ev = tate_eval(tc, w);
    if (F->eq(ev.Y, P.y)) return w;
  }
  fail(ErrKind::PrecisionExhausted, "could not invert the Tate parametrization");
}

UniformizerClass uniformizer_class(const PointOnE& P, const TateCurve& tc, long ell) {
  const FieldPtr& F = tc.F;
  if (ell == F->p()) fail(ErrKind::WildPrime, "uniformizer classes are tame only");
  if (!F->mu_ell_in_F(ell)) fail(ErrKind::MuNotInField, "needs mu_ell in F");
  UniformizerClass out;
  out.basis = fstar_basis(F, ell);
  auto dq = out.basis->decompose(tc.q_param);
  out.q_class.assign(dq.c.begin(), dq.c.end());
  if (P.infinity) {
    out.c.assign(out.basis->dim(), 0);
    out.zero = true;
    return out;
  }
  FieldElement w = tate_uniformizer_parameter(P, tc);
  auto dw = out.basis->decompose(w);
  out.c.assign(dw.c.begin(), dw.c.end());
  // reduce modulo the line of [q]: eliminate at the pivot coordinate
  int pivot = -1;
  for (int i = 0; i < (int)out.q_class.size(); ++i)
    if (out.q_class[i]) { pivot = i; break; }
  if (pivot >= 0 && out.c[pivot]) {
    long f = fp::norm(out.c[pivot] * fp::inv_mod(out.q_class[pivot], ell), ell);
    for (int i = 0; i < (int)out.c.size(); ++i)
      out.c[i] = fp::norm(out.c[i] - f * out.q_class[i], ell);
  }
  out.zero = true;
  for (long x : out.c)
    if (x) out.zero = false;
  return out;
}

SymbolValue tate_symbol(const PointOnE& P, const PointOnE& Q, const TateCurve& tc, long ell) {
  const FieldPtr& F = tc.F;
  if (ell == F->p()) fail(ErrKind::WildPrime, "wild multiplicative symbols out of scope");
  if (!F->mu_ell_in_F(ell)) fail(ErrKind::MuNotInField, "Im(s_ell) = 0 when mu_ell is absent");
  if (!tc.split) fail(ErrKind::NonSplit, "split multiplicative case only");
  std::string tag = "tate;ell=" + std::to_string(ell);
  if (P.infinity || Q.infinity) return SymbolValue{0, tag};
  // when [q] != 0 the value group collapses: every symbol vanishes
  auto B = fstar_basis(F, ell);
  if (!B->decompose(tc.q_param).is_zero()) return SymbolValue{0, tag};
  FieldElement wP = tate_uniformizer_parameter(P, tc);
  FieldElement wQ = tate_uniformizer_parameter(Q, tc);
  SymbolValue v = tame_symbol(wP, wQ, ell);
  return SymbolValue{v.v, tag};
}

}  // namespace localsym
