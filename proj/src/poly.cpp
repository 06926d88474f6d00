#include "localsym/poly.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace localsym {

FPoly fpoly(const FieldPtr& F, std::vector<FieldElement> coeffs) {
  return FPoly{F, std::move(coeffs)};
}

FPoly fpoly_trim(FPoly f) {
  while (!f.c.empty() && f.c.back().is_zero()) f.c.pop_back();
  return f;
}

FieldElement FPoly::eval(const FieldElement& x) const {
  FieldElement acc = F->zero();
  for (long i = deg(); i >= 0; --i) acc = F->add(F->mul(acc, x), c[i]);
  return acc;
}

FPoly FPoly::derivative() const {
  FPoly d{F, {}};
  for (long i = 1; i <= deg(); ++i) d.c.push_back(F->mul(c[i], F->from_int(Int(i))));
  return d;
}

FPoly fpoly_mul(const FPoly& a, const FPoly& b) {
  const FieldPtr& F = a.F;
  if (a.c.empty() || b.c.empty()) return {F, {}};
  std::vector<FieldElement> r(a.c.size() + b.c.size() - 1, F->zero());
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r[i + j] = F->add(r[i + j], F->mul(a.c[i], b.c[j]));
  return {F, std::move(r)};
}

FPoly fpoly_add(const FPoly& a, const FPoly& b) {
  const FieldPtr& F = a.F;
  std::vector<FieldElement> r(std::max(a.c.size(), b.c.size()), F->zero());
  for (size_t i = 0; i < a.c.size(); ++i) r[i] = F->add(r[i], a.c[i]);
  for (size_t i = 0; i < b.c.size(); ++i) r[i] = F->add(r[i], b.c[i]);
  return {F, std::move(r)};
}

FPoly fpoly_scale(const FPoly& a, const FieldElement& s) {
  FPoly r = a;
  for (auto& x : r.c) x = a.F->mul(x, s);
  return r;
}

FPoly fpoly_shift_arg(const FPoly& f, const FieldElement& a) {
  // classical in-place Taylor scheme
  const FieldPtr& F = f.F;
  std::vector<FieldElement> c = f.c;
  long n = (long)c.size();
  for (long k = 0; k < n; ++k)
    for (long i = n - 2; i >= k; --i) c[i] = F->add(c[i], F->mul(a, c[i + 1]));
  return {F, std::move(c)};
}

FPoly fpoly_scale_arg(const FPoly& f, const FieldElement& s) {
  const FieldPtr& F = f.F;
  std::vector<FieldElement> c = f.c;
  FieldElement pw = F->one();
  for (size_t i = 0; i < c.size(); ++i) {
    c[i] = F->mul(c[i], pw);
    pw = F->mul(pw, s);
  }
  return {F, std::move(c)};
}

FPoly fpoly_embed(const FPoly& f, const FieldPtr& K) {
  std::vector<FieldElement> c;
  c.reserve(f.c.size());
  for (const auto& x : f.c) c.push_back(K->embed(x));
  return {K, std::move(c)};
}

FPoly fpoly_mod(FPoly a, const FPoly& m) {
  const FieldPtr& F = a.F;
  long dm = m.deg();
  while ((long)a.c.size() - 1 >= dm) {
    FieldElement lead = a.c.back();
    long sh = (long)a.c.size() - 1 - dm;
    if (!lead.is_zero())
      for (long i = 0; i <= dm; ++i)
        a.c[sh + i] = F->sub(a.c[sh + i], F->mul(lead, m.c[i]));
    a.c.pop_back();
  }
  return a;
}

std::vector<NPSegment> newton_polygon(const FPoly& f) {
  const FieldPtr& F = f.F;
  std::vector<std::pair<long, long>> pts;  // (i, val)
  for (long i = 0; i <= f.deg(); ++i) {
    auto v = F->valuation(f.c[i]);
    if (v) pts.push_back({i, *v});
  }
  if (pts.size() < 2) return {};
  // lower convex hull, left to right
  std::vector<std::pair<long, long>> hull;
  for (auto& pt : pts) {
    while (hull.size() >= 2) {
      auto& a = hull[hull.size() - 2];
      auto& b = hull[hull.size() - 1];
      // drop b if it lies above segment a-pt
      if ((__int128)(b.second - a.second) * (pt.first - a.first) >=
          (__int128)(pt.second - a.second) * (b.first - a.first))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }
  std::vector<NPSegment> segs;
  for (size_t t = 0; t + 1 < hull.size(); ++t) {
    long di = hull[t + 1].first - hull[t].first;
    long dv = hull[t + 1].second - hull[t].second;
    long g = std::gcd(std::abs(dv), di);
    if (g == 0) g = 1;
    segs.push_back({hull[t].first, hull[t + 1].first, dv / g, di / g});
  }
  return segs;
}

FieldElement newton_lift(const FPoly& f, const FieldElement& x0) {
  const FieldPtr& F = f.F;
  FPoly df = f.derivative();
  FieldElement x = x0;
  for (int it = 0; it < 64; ++it) {
    FieldElement fx = f.eval(x);
    if (fx.is_zero()) return x;
    x = F->sub(x, F->div(fx, df.eval(x)));
  }
  if (!f.eval(x).is_zero()) fail(ErrKind::PrecisionExhausted, "newton iteration stalled");
  return x;
}

namespace {

void roots_core(const FPoly& fin, long min_val, int depth, std::vector<FieldElement>& out) {
  const FieldPtr& F = fin.F;
  if (depth > 64) fail(ErrKind::PrecisionExhausted, "root clustering beyond recursion cap");
  FPoly f = fpoly_trim(fin);
  if (f.deg() < 1) return;
  // strip x = 0 roots
  bool zero_root = false;
  while (!f.c.empty() && f.c.front().is_zero()) {
    zero_root = true;
    f.c.erase(f.c.begin());
  }
  if (zero_root) out.push_back(F->zero());
  f = fpoly_trim(f);
  if (f.deg() < 1) return;

  for (const auto& seg : newton_polygon(f)) {
    if (seg.slope_den != 1) continue;  // fractional valuation: no roots in F
    long s = -seg.slope_num;           // root valuation on this segment
    if (s < min_val) continue;
    // substitute x = pi^s w and normalize to a unit-root polynomial
    FPoly g = fpoly_scale_arg(f, F->pow(s >= 0 ? F->uniformizer() : F->uniformizer_inv(),
                                        std::abs(s)));
    long vmin = 0;
    bool have = false;
    for (long i = 0; i <= g.deg(); ++i) {
      auto v = F->valuation(g.c[i]);
      if (v && (!have || *v < vmin)) { vmin = *v; have = true; }
    }
    if (!have) continue;
    for (auto& cc : g.c) cc = F->shift(cc, -vmin);
    // residue polynomial and its roots
    long p = F->p();
    std::vector<RElt> gres;
    for (long i = 0; i <= g.deg(); ++i) {
      auto v = F->valuation(g.c[i]);
      gres.push_back(v && *v == 0 ? F->residue(g.c[i]) : F->res_zero());
    }
    if (F->res_card() > 200000) fail(ErrKind::ResidueFieldTooLarge, "residue root scan cap");
    for (Int idx = 1; idx < F->res_card(); ++idx) {
      RElt r = F->res_by_index(idx);
      // evaluate gres at r
      RElt acc = F->res_zero();
      for (long i = (long)gres.size() - 1; i >= 0; --i)
        acc = F->res_add(F->res_mul(acc, r), gres[i]);
      if (!F->res_is_zero(acc)) continue;
      // multiplicity: simple iff derivative nonzero at r
      RElt dacc = F->res_zero();
      for (long i = (long)gres.size() - 1; i >= 1; --i)
        dacc = F->res_add(F->res_mul(dacc, r), F->res_mul(gres[i], F->res_from_int(i)));
      if (!F->res_is_zero(dacc)) {
        FieldElement w = newton_lift(g, F->teichmuller(r));
        out.push_back(F->shift(w, s));
      } else {
        // clustered residue root: shift and recurse on roots of positive valuation
        FPoly h = fpoly_shift_arg(g, F->lift(r));
        std::vector<FieldElement> sub;
        roots_core(h, 1, depth + 1, sub);
        for (const auto& y : sub) out.push_back(F->shift(F->add(F->lift(r), y), s));
      }
    }
  }
}

}  // namespace

std::vector<FieldElement> roots_in_field(const FPoly& f) {
  std::vector<FieldElement> out;
  roots_core(f, std::numeric_limits<long>::min() / 4, 0, out);
  const FieldPtr& F = f.F;
  // verify and deduplicate
  std::vector<FieldElement> ok;
  for (const auto& r : out) {
    if (!f.eval(r).is_zero()) continue;
    bool dup = false;
    for (const auto& s : ok)
      if (F->eq(r, s)) { dup = true; break; }
    if (!dup) ok.push_back(r);
  }
  return ok;
}

FieldElement fdet(const FieldPtr& F, std::vector<std::vector<FieldElement>> M) {
  int n = (int)M.size();
  FieldElement det = F->one();
  bool negate = false;
  for (int c = 0; c < n; ++c) {
    int sel = -1;
    long best = 0;
    for (int r = c; r < n; ++r) {
      auto v = F->valuation(M[r][c]);
      if (!v) continue;
      if (sel < 0 || *v < best) { sel = r; best = *v; }
    }
    if (sel < 0) return F->zero();
    if (sel != c) { std::swap(M[sel], M[c]); negate = !negate; }
    det = F->mul(det, M[c][c]);
    FieldElement pinv = F->inv(M[c][c]);
    for (int r = c + 1; r < n; ++r) {
      if (M[r][c].is_zero()) continue;
      FieldElement t = F->mul(M[r][c], pinv);
      for (int j = c; j < n; ++j) M[r][j] = F->sub(M[r][j], F->mul(t, M[c][j]));
    }
  }
  return negate ? F->neg(det) : det;
}

FPoly char_poly(const FieldPtr& F, const std::vector<std::vector<FieldElement>>& M) {
  int n = (int)M.size();
  // det(y I - M) by permutation expansion; entries are degree <= 1 in y
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<FieldElement> acc(n + 1, F->zero());
  do {
    int inv = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inv;
    // product over i of entry (i, perm[i]): (y*[i==perm_i] - M[i][perm_i])
    std::vector<FieldElement> prod{F->one()};
    for (int i = 0; i < n; ++i) {
      FieldElement c0 = F->neg(M[i][perm[i]]);
      bool has_y = (perm[i] == i);
      std::vector<FieldElement> next(prod.size() + (has_y ? 1 : 0), F->zero());
      for (size_t t = 0; t < prod.size(); ++t) {
        next[t] = F->add(next[t], F->mul(prod[t], c0));
        if (has_y) next[t + 1] = F->add(next[t + 1], prod[t]);
      }
      prod = std::move(next);
    }
    for (size_t t = 0; t < prod.size(); ++t) {
      FieldElement term = inv % 2 ? F->neg(prod[t]) : prod[t];
      acc[t] = F->add(acc[t], term);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {F, std::move(acc)};
}

std::vector<std::vector<FieldElement>> quotient_mult_matrix(const FPoly& m, const FPoly& x) {
  const FieldPtr& F = m.F;
  long n = m.deg();
  std::vector<std::vector<FieldElement>> M(n, std::vector<FieldElement>(n, F->zero()));
  FPoly cur{F, {F->one()}};
  for (long j = 0; j < n; ++j) {
    FPoly col = fpoly_mod(fpoly_mul(cur, x), m);
    for (long i = 0; i < n; ++i)
      M[i][j] = i < (long)col.c.size() ? col.c[i] : F->zero();
    // cur <- cur * t mod m
    FPoly t{F, {F->zero(), F->one()}};
    cur = fpoly_mod(fpoly_mul(cur, t), m);
  }
  return M;
}

// ---------------------------------------------------------------------------
// norms / traces through the top tower step
// ---------------------------------------------------------------------------

FieldElement norm_to_subfield(const FieldElement& x) {
  const FieldPtr& K = x.field();
  const FieldPtr& F = K->parent();
  if (!F) fail(ErrKind::MixedFields, "norm from the base field");
  int m = K->top_step().degree;
  long L = F->degree();
  // columns: x * theta^j expressed over the parent
  std::vector<std::vector<FieldElement>> M(m, std::vector<FieldElement>(m, F->zero()));
  FieldElement cur = x;
  FieldElement theta = K->gen(K->depth() - 1);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      std::vector<Int> blk(cur.coords().begin() + i * L, cur.coords().begin() + (i + 1) * L);
      M[i][j] = FieldElement(F, std::move(blk), cur.denom(), std::min(cur.known(), F->bottom_digits()));
    }
    if (j + 1 < m) cur = K->mul(cur, theta);
  }
  return fdet(F, std::move(M));
}

FieldElement trace_to_subfield(const FieldElement& x) {
  const FieldPtr& K = x.field();
  const FieldPtr& F = K->parent();
  if (!F) fail(ErrKind::MixedFields, "trace from the base field");
  int m = K->top_step().degree;
  long L = F->degree();
  FieldElement cur = x;
  FieldElement theta = K->gen(K->depth() - 1);
  FieldElement acc = F->zero();
  for (int j = 0; j < m; ++j) {
    std::vector<Int> blk(cur.coords().begin() + j * L, cur.coords().begin() + (j + 1) * L);
    acc = F->add(acc, FieldElement(F, std::move(blk), cur.denom(),
                                   std::min(cur.known(), F->bottom_digits())));
    if (j + 1 < m) cur = K->mul(cur, theta);
  }
  return acc;
}

}  // namespace localsym
