#include "localsym/coords.hpp"

namespace localsym {

namespace {

int imax_level(const FieldPtr& F) {
  long p = F->p(), e = F->ram_index();
  return (int)((p * e) / (p - 1));  // floor is enough for the order bound
}

}  // namespace

SymbolContext make_symbol_context(const CurveModel& E) {
  return make_symbol_context(E, build_symbol_form(E.F, E.F->p()));
}

SymbolContext make_symbol_context(const CurveModel& E, const SymbolForm& form) {
  const FieldPtr& F = E.F;
  long p = F->p();
  SymbolContext ctx;
  ctx.E = E;
  ctx.form = form;

  ReductionData rd = reduction_analysis(E);
  if (rd.type != RedType::Good || !rd.ordinary)
    fail(ErrKind::HypothesisViolated, "coordinates need good ordinary reduction");
  if (!F->mu_ell_in_F(p)) fail(ErrKind::HypothesisViolated, "coordinates need mu_p in F");
  if (torsion_count(E, p) != p * p)
    fail(ErrKind::HypothesisViolated, "coordinates need E[p] rational over F");

  ctx.ubasis = unit_basis(F, p);
  int order = (int)(2 * p + 6);
  ctx.iso = gm_isomorphism(E, order, imax_level(F) + 2);

  ctx.pts = residue_points(E);
  ctx.count = (long)ctx.pts.size();
  ctx.m_coprime = ctx.count;
  while (ctx.m_coprime % p == 0) {
    ctx.m_coprime /= p;
    ++ctx.s_pow;
  }
  if (ctx.s_pow == 0)
    fail(ErrKind::HypothesisViolated, "reduction has no rational p-torsion");
  // a generator of the (cyclic) p-Sylow subgroup
  Int best_ord = 1;
  RPoint gen{};
  for (const auto& pt : ctx.pts) {
    RPoint s = rpoint_mul(E, ctx.m_coprime, pt);
    Int ord = 1;
    RPoint cur = s;
    while (!cur.infinity) {
      cur = rpoint_mul(E, p, cur);
      ord *= p;
    }
    if (ord > best_ord) {
      best_ord = ord;
      gen = s;
    }
  }
  Int syl = 1;
  for (int i = 0; i < ctx.s_pow; ++i) syl *= p;
  if (best_ord != syl) fail(ErrKind::Internal, "p-Sylow of the reduction is not cyclic");
  ctx.sylow_gen = gen;
  ctx.fg = formal_group(E, order, /*with_law=*/false);
  ctx.hinv = series_reversion(ctx.iso.h);
  ctx.G = lift_point(E, gen);

  // Canonical splitting: the unit class of G is the class g0 with
  // res(g0) = (formal obstruction of G over the unramified degree-p
  // extension); coordinates are then sheared by nbar * g0.
  {
    FieldPtr Ku = extend_unramified_canonical(F, (int)p);
    CurveModel EKu = curve_embed(E, Ku);
    GmIso isoKu = gm_isomorphism(EKu, order, imax_level(Ku) + 2);
    UnitBasisPtr BKu = unit_basis(Ku, p);
    PointOnE GK{false, Ku->embed(ctx.G.x), Ku->embed(ctx.G.y)};
    auto w0 = formal_obstruction(EKu, isoKu, BKu, GK);
    if (!w0) fail(ErrKind::Internal, "etale Sylow generator not divisible residually");
    int nf = ctx.ubasis->dim(), nk = BKu->dim();
    fp::Mat A(nk, fp::Vec(nf, 0));
    for (int j = 0; j < nf; ++j) {
      auto col = BKu->decompose(Ku->embed(ctx.ubasis->gens()[j].rep));
      for (int i = 0; i < nk; ++i) A[i][j] = col.c[i];
    }
    auto sol = fp::solve(A, fp::Vec(w0->c.begin(), w0->c.end()), p);
    if (!sol) fail(ErrKind::Internal, "obstruction class outside the restriction image");
    ctx.g0 = UnitClassVector{ctx.ubasis, *sol};
  }
  return ctx;
}

PointOnE formal_point_from_unit(const SymbolContext& ctx, const FieldElement& u) {
  const FieldPtr& F = ctx.E.F;
  FieldElement t = F->sub(u, F->one());
  if (t.is_zero()) return point_at_infinity();
  long vt = F->val_exact(t);
  if (vt < 1) fail(ErrKind::OutsideConvergenceDomain, "unit must be principal");
  FieldElement z = cap_prec(series_eval(ctx.hinv, t), (ctx.iso.valid_order + 1) * vt);
  return formal_point(ctx.fg, z);
}

std::optional<UnitClassVector> formal_obstruction(const CurveModel& EK, const GmIso& isoK,
                                                  const UnitBasisPtr& BK, const PointOnE& PK) {
  const FieldPtr& K = EK.F;
  long p = K->p();
  RPoint qbar = reduce_point(EK, PK);
  PointOnE S = point_at_infinity();
  bool found = qbar.infinity;
  if (!found) {
    for (const auto& cand : residue_points(EK)) {
      if (rpoint_eq(EK, rpoint_mul(EK, Int(p), cand), qbar)) {
        S = lift_point(EK, cand);
        found = true;
        break;
      }
    }
  }
  if (!found) return std::nullopt;
  PointOnE D = point_add(EK, PK, point_mul(EK, Int(-p), S));
  if (!reduce_point(EK, D).infinity) fail(ErrKind::Internal, "division remainder not formal");
  FieldElement z0 = formal_z(EK, D);
  return BK->decompose(gm_unit(isoK, z0));
}

namespace {

// etale coordinate of a reduced point: class in E~(k)/p = Z/p via the Sylow
// generator
long etale_coordinate(const SymbolContext& ctx, const RPoint& pt) {
  const CurveModel& E = ctx.E;
  long p = E.F->p();
  RPoint target = rpoint_mul(E, ctx.m_coprime, pt);
  // m * pt = t * gen in the Sylow group: brute-force dlog
  RPoint cur{};
  Int syl = 1;
  for (int i = 0; i < ctx.s_pow; ++i) syl *= p;
  for (Int t = 0; t < syl; t += 1) {
    if (rpoint_eq(E, cur, target)) {
      Int minv_t = t;
      Int m_mod = ctx.m_coprime % p;
      long minv = fp::inv_mod(m_mod.get_si(), p);
      Int nb = (minv_t * minv) % p;
      return nb.get_si();
    }
    cur = rpoint_add(E, cur, ctx.sylow_gen);
  }
  fail(ErrKind::Internal, "reduced point not generated by the Sylow generator");
}

}  // namespace

PointCoordinates point_coordinates(const SymbolContext& ctx, const PointOnE& P) {
  const CurveModel& E = ctx.E;
  const FieldPtr& F = E.F;
  long p = F->p();
  if (!P.infinity && P.x.field() != F) fail(ErrKind::MixedFields, "point not over the base");

  PointCoordinates pc;
  pc.nbar = P.infinity ? 0 : etale_coordinate(ctx, reduce_point(E, P));
  PointOnE P1 = point_add(E, P, point_mul(E, Int(-pc.nbar), ctx.G));
  // shift the etale-trivial remainder into the formal group by p * S
  RPoint r1 = reduce_point(E, P1);
  PointOnE P2 = P1;
  if (!r1.infinity) {
    RPoint target = r1;
    bool found = false;
    for (const auto& cand : ctx.pts) {
      if (rpoint_eq(E, rpoint_mul(E, Int(p), cand), target)) {
        PointOnE S = lift_point(E, cand);
        P2 = point_add(E, P1, point_mul(E, Int(-p), S));
        found = true;
        break;
      }
    }
    if (!found) fail(ErrKind::Internal, "etale-trivial point does not reduce into p E~(k)");
  }
  if (!reduce_point(E, P2).infinity)
    fail(ErrKind::Internal, "formal shift failed to reach the kernel of reduction");
  FieldElement z = formal_z(E, P2);
  FieldElement u = gm_unit(ctx.iso, z);
  // canonical class: undo the shear introduced by the anchor G
  pc.ubar = ctx.ubasis->decompose(u) + ctx.g0 * pc.nbar;
  return pc;
}

SymbolValue galois_symbol(const SymbolContext& ctx, const PointOnE& P, const PointOnE& Q) {
  auto cp = point_coordinates(ctx, P);
  auto cq = point_coordinates(ctx, Q);
  return eval_symbol_classes(cp.ubar.c, cq.ubar.c, ctx.form);
}

SymbolSearchResult find_nontrivial_symbol(const CurveModel& E, unsigned long seed, int budget) {
  const FieldPtr& F = E.F;
  long p = F->p();
  ModuleDescriptor desc = descriptor_from_curve(E, p);
  if (im_sp_dimension(desc, F) == 0)
    fail(ErrKind::ClassifierSaysZero, "descriptor predicts a zero symbol image");
  SymbolContext ctx = make_symbol_context(E);

  std::mt19937_64 rng(seed);
  std::vector<PointOnE> found;
  std::vector<PointCoordinates> coords;
  SymbolSearchResult out;
  for (int tries = 0; tries < budget; ++tries) {
    std::vector<Int> c(F->degree());
    std::uniform_int_distribution<long> dist(0, 1 << 16);
    for (auto& x : c) x = dist(rng);
    FieldElement x = F->from_coords(std::move(c));
    auto pts = points_with_x(E, x);
    if (pts.empty()) continue;
    PointOnE P = pts.front();
    PointCoordinates pc = point_coordinates(ctx, P);
    for (size_t i = 0; i < found.size(); ++i) {
      SymbolValue v = eval_symbol_classes(coords[i].ubar.c, pc.ubar.c, ctx.form);
      if (!v.zero()) {
        out.P = found[i];
        out.Q = P;
        out.value = v;
        out.tried = tries + 1;
        return out;
      }
    }
    found.push_back(P);
    coords.push_back(pc);
  }
  fail(ErrKind::SearchBudgetExceeded, "no nonzero pair within the point-search budget");
}

DivisionFieldPrediction division_field_prediction(const SymbolContext& ctx, const PointOnE& Q) {
  const FieldPtr& F = ctx.E.F;
  long p = F->p();
  PointCoordinates pc = point_coordinates(ctx, Q);
  bool u_nonzero = !pc.ubar.is_zero();
  bool n_nonzero = pc.nbar != 0;
  if (!u_nonzero && !n_nonzero)
    fail(ErrKind::PointIsDivisible, "Q lies in p E(F); its division field is F itself");
  DivisionFieldPrediction pred;
  FieldPtr K = F;
  if (u_nonzero) {
    FieldElement u = ctx.ubasis->rep_of(pc.ubar);
    auto ext = kummer_extension(F, u, p, ctx.form.basis);
    if (ext.cls == KummerClass::Trivial)
      fail(ErrKind::Internal, "nonzero unit class produced a trivial extension");
    K = ext.K;
    pred.has_ramified_part = true;
    pred.k1_class = ext.cls;
  }
  if (n_nonzero) {
    K = extend_unramified_canonical(K, (int)p);
    pred.has_unramified_part = true;
  }
  pred.K = K;
  pred.degree = (int)(u_nonzero ? p : 1) * (int)(n_nonzero ? p : 1);
  return pred;
}

// ---------------------------------------------------------------------------
// automorphisms and direct division
// ---------------------------------------------------------------------------

std::vector<std::vector<FieldElement>> tower_automorphisms(const FieldPtr& K, const FieldPtr& F) {
  // identity images for the fixed part
  std::vector<FieldElement> base;
  for (int lvl = 0; lvl < K->depth(); ++lvl) base.push_back(K->gen(lvl));
  std::vector<std::vector<FieldElement>> result{base};
  // for each step above F, branch over the roots of its defining polynomial
  const FieldDescriptor* cur = K.get();
  std::vector<const FieldDescriptor*> chain;
  while (cur != F.get()) {
    chain.push_back(cur);
    cur = cur->parent().get();
    if (!cur) fail(ErrKind::MixedFields, "K is not a tower over F");
  }
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    int lvl = (*it)->depth() - 1;
    const TowerStep& st = (*it)->top_step();
    // defining polynomial as a polynomial over K
    std::vector<FieldElement> cf;
    for (const auto& blk : st.def) {
      FieldElement c((*it)->parent(), std::vector<Int>(blk), 0, (*it)->parent()->bottom_digits());
      cf.push_back(K->embed(c));
    }
    FPoly def{K, cf};
    auto roots = roots_in_field(def);
    if ((int)roots.size() != st.degree)
      fail(ErrKind::Internal, "tower step does not split completely in K");
    std::vector<std::vector<FieldElement>> next;
    for (const auto& hom : result)
      for (const auto& r : roots) {
        auto h2 = hom;
        h2[lvl] = r;
        next.push_back(h2);
      }
    result = std::move(next);
  }
  return result;
}

FieldElement apply_automorphism(const FieldPtr& K, const std::vector<FieldElement>& images,
                                const FieldElement& x) {
  // x = sum c_I prod gen^I  ->  sum c_I prod images^I
  int depth = K->depth();
  const auto& degs = K->step_degrees();
  // power tables
  std::vector<std::vector<FieldElement>> pw(depth);
  for (int lvl = 0; lvl < depth; ++lvl) {
    pw[lvl].push_back(K->one());
    for (int i = 1; i < degs[lvl]; ++i) pw[lvl].push_back(K->mul(pw[lvl][i - 1], images[lvl]));
  }
  FieldElement acc = K->zero();
  for (long idx = 0; idx < K->degree(); ++idx) {
    const Int& c = x.coords()[idx];
    if (c == 0) continue;
    FieldElement mono = K->from_int(c);
    long t = idx;
    for (int lvl = 0; lvl < depth; ++lvl) {
      int i = (int)(t % degs[lvl]);
      t /= degs[lvl];
      if (i) mono = K->mul(mono, pw[lvl][i]);
    }
    acc = K->add(acc, mono);
  }
  if (x.denom()) acc = FieldElement(K, acc.coords(), acc.denom() + x.denom(), acc.known());
  return acc;
}

DivisionFieldCheck verify_division_field(const SymbolContext& ctx, const PointOnE& Q,
                                         const DivisionFieldPrediction& pred) {
  const FieldPtr& F = ctx.E.F;
  const FieldPtr& K = pred.K;
  long p = F->p();
  DivisionFieldCheck chk;
  CurveModel EK = curve_embed(ctx.E, K);
  PointOnE QK{Q.infinity, K->embed(Q.x), K->embed(Q.y)};

  // etale part: divide the reduction and lift
  RPoint qbar = reduce_point(EK, QK);
  PointOnE S = point_at_infinity();
  {
    bool found = false;
    for (const auto& cand : residue_points(EK)) {
      if (rpoint_eq(EK, rpoint_mul(EK, Int(p), cand), qbar)) {
        S = lift_point(EK, cand);
        found = true;
        break;
      }
    }
    if (!found) return chk;  // not divisible over K even residually
  }
  PointOnE D = point_add(EK, QK, point_mul(EK, Int(-p), S));
  if (!reduce_point(EK, D).infinity) fail(ErrKind::Internal, "division remainder not formal");

  // formal part through the multiplicative coordinate; a generous series
  // order keeps the truncation error clear of the downstream comparisons
  int order = std::max((int)(2 * p + 6), 24);
  GmIso isoK = gm_isomorphism(EK, order, imax_level(K) + 2);
  FormalGroup FGK = formal_group(EK, order, /*with_law=*/false);
  FieldElement z0 = formal_z(EK, D);
  PointOnE Rf = point_at_infinity();
  if (!z0.is_zero()) {
    FieldElement u0 = gm_unit(isoK, z0);
    auto root = K->is_pth_power(u0, p);
    if (!root) return chk;  // formal obstruction: not divisible over K
    FieldElement t = K->sub(*root, K->one());
    Series hinv = series_reversion(isoK.h);
    long vt = K->val_exact(t);
    FieldElement zr = cap_prec(series_eval(hinv, t), (isoK.valid_order + 1) * vt);
    Rf = formal_point(FGK, zr);
  }
  PointOnE R = point_add(EK, Rf, S);
  if (!point_eq(EK, point_mul(EK, Int(p), R), QK))
    fail(ErrKind::Internal, "direct division failed the multiplication check");
  chk.divided = true;

  // Galois orbit of R measures [F(R):F]
  auto homs = tower_automorphisms(K, F);
  std::vector<PointOnE> orbit;
  for (const auto& hom : homs) {
    PointOnE img{R.infinity, apply_automorphism(K, hom, R.x), apply_automorphism(K, hom, R.y)};
    bool dup = false;
    for (const auto& o : orbit)
      if (point_eq(EK, o, img)) { dup = true; break; }
    if (!dup) orbit.push_back(img);
  }
  chk.orbit_degree = (int)orbit.size();
  chk.matches = (chk.orbit_degree == pred.degree);
  return chk;
}

}  // namespace localsym
