#include "localsym/units.hpp"

#include <algorithm>

namespace localsym {

bool UnitClassVector::is_zero() const {
  for (long x : c)
    if (x % basis->ell() != 0) return false;
  return true;
}

UnitClassVector UnitClassVector::operator+(const UnitClassVector& o) const {
  if (basis != o.basis) fail(ErrKind::MixedFields, "class vectors from different bases");
  UnitClassVector r{basis, c};
  for (size_t i = 0; i < c.size(); ++i) r.c[i] = fp::norm(c[i] + o.c[i], basis->ell());
  return r;
}

UnitClassVector UnitClassVector::operator-() const {
  UnitClassVector r{basis, c};
  for (auto& x : r.c) x = fp::norm(-x, basis->ell());
  return r;
}

UnitClassVector UnitClassVector::operator*(long n) const {
  UnitClassVector r{basis, c};
  for (auto& x : r.c) x = fp::norm(x * n, basis->ell());
  return r;
}

bool UnitClassVector::operator==(const UnitClassVector& o) const {
  if (basis != o.basis) return false;
  for (size_t i = 0; i < c.size(); ++i)
    if (fp::norm(c[i] - o.c[i], basis->ell()) != 0) return false;
  return true;
}

namespace detail {

int Filtration::slot_of(long level, int j) const {
  int f = F->res_degree();
  for (size_t t = 0; t < coord_levels.size(); ++t)
    if (coord_levels[t] == level) return (int)t * f + j;
  fail(ErrKind::Internal, "not a coordinate level");
}

namespace {

// x -> x^p + lambda x on the residue field, as F_p-linear map data
fp::Mat phi_matrix(const FieldDescriptor& F, const RElt& lambda) {
  int f = F.res_degree();
  fp::Mat A(f, fp::Vec(f, 0));
  for (int j = 0; j < f; ++j) {
    RElt mono(f, 0);
    mono[j] = 1;
    RElt img = F.res_add(F.res_pow(mono, F.p()), F.res_mul(lambda, mono));
    for (int i = 0; i < f; ++i) A[i][j] = img[i];
  }
  return A;
}

}  // namespace

Filtration make_filtration(const FieldPtr& F, long ell) {
  Filtration ft;
  ft.F = F;
  ft.ell = ell;
  ft.ell_is_p = (ell == F->p());
  if (!ft.ell_is_p) {
    ft.slots = F->mu_ell_in_F(ell) ? 1 : 0;
    return ft;
  }
  long p = F->p(), e = F->ram_index();
  // coordinate levels: p does not divide i, i*(p-1) < p*e
  for (long i = 1; i * (p - 1) < p * e; ++i)
    if (i % p != 0) ft.coord_levels.push_back(i);
  ft.lambda = F->residue(F->shift(F->from_int(Int(p)), -e));
  if ((p * e) % (p - 1) == 0) {
    ft.imax = p * e / (p - 1);
    if (e % (p - 1) == 0) {
      // extra generator present iff ker(phi) != 0, equivalently mu_p in F
      ft.has_extra = F->mu_ell_in_F(p);
      if (ft.has_extra) {
        fp::Mat A = phi_matrix(*F, ft.lambda);
        int f = F->res_degree();
        // transpose for row-span test: rows of A^T are images of monomials
        fp::Mat rows(f, fp::Vec(f));
        for (int i = 0; i < f; ++i)
          for (int j = 0; j < f; ++j) rows[j][i] = A[i][j];
        for (int j = 0; j < f; ++j) {
          fp::Vec mono(f, 0);
          mono[j] = 1;
          if (!fp::in_span(rows, mono, p)) { ft.extra_mono = j; break; }
        }
        if (ft.extra_mono < 0) fail(ErrKind::Internal, "phi image has no complement");
      }
    } else {
      ft.imax = 0;  // e/(p-1) not integral: the top level cannot occur
    }
  }
  ft.slots = (int)ft.coord_levels.size() * F->res_degree() + (ft.has_extra ? 1 : 0);
  return ft;
}

WalkResult unit_walk(const Filtration& ft, const FieldElement& u, bool coordinate_mode,
                     bool want_root) {
  const FieldPtr& F = ft.F;
  WalkResult out;
  out.coords.assign(ft.slots, 0);
  long p = F->p(), e = F->ram_index();

  if (!ft.ell_is_p) {
    long ell = ft.ell;
    RElt r = F->residue(u);
    if (F->res_is_zero(r)) fail(ErrKind::NotAUnit, "walk requires a unit");
    bool mu = ft.slots == 1;
    long dl = 0;
    if (mu) {
      RElt t = F->res_pow(r, (F->res_card() - 1) / ell);
      dl = F->res_dlog_mu_ell(t, ell);
      if (coordinate_mode) out.coords[0] = dl;
    }
    if (!coordinate_mode && dl != 0) return out;  // not a power
    out.is_power = true;
    if (want_root) {
      // Newton on X^ell - u from a residue ell-th root
      Int qm1 = F->res_card() - 1;
      Int m = 0;
      {
        RElt g = F->res_generator();
        RElt cur = F->res_one();
        while (!F->res_eq(cur, r)) {
          cur = F->res_mul(cur, g);
          m += 1;
          if (m > F->res_card()) fail(ErrKind::Internal, "residue dlog failed");
        }
      }
      if (m % ell != 0) fail(ErrKind::Internal, "root requested for a non-power");
      RElt s = F->res_pow(F->res_generator(), m / ell);
      FieldElement x = F->teichmuller(s);
      for (int it = 0; it < 64; ++it) {
        FieldElement fx = F->sub(F->pow(x, ell), u);
        if (fx.is_zero()) break;
        FieldElement dfx = F->mul(F->pow(x, ell - 1), F->from_int(Int(ell)));
        x = F->sub(x, F->div(fx, dfx));
      }
      out.root = x;
    }
    return out;
  }

  // ell = p: digit-by-digit reduction
  RElt r0 = F->residue(u);
  if (F->res_is_zero(r0)) fail(ErrKind::NotAUnit, "walk requires a unit");
  FieldElement u0 = F->mul(u, F->inv(F->teichmuller(r0)));
  FieldElement root_acc = want_root ? F->teichmuller(F->res_pth_root(r0)) : F->one();

  int guard = 0;
  while (true) {
    if (++guard > 4 * F->precision() + 32) fail(ErrKind::Internal, "unit walk did not terminate");
    FieldElement t = F->sub(u0, F->one());
    auto vo = F->valuation(t);
    if (!vo) break;  // u0 = 1 to precision
    long v = *vo;
    if (v <= 0) fail(ErrKind::Internal, "walk left the principal units");
    if (v * (p - 1) > p * e) break;  // inside the ell-th powers
    RElt a = F->digit(t, v);
    if (F->res_is_zero(a))
      fail(ErrKind::PrecisionExhausted, "unit digit unreadable at working precision");
    bool top = (v * (p - 1) == p * e);
    if (!top && v % p != 0) {
      // coordinate level
      if (!coordinate_mode) return out;  // obstruction: not a power
      for (int j = 0; j < F->res_degree(); ++j) {
        long aj = a[j];
        if (!aj) continue;
        out.coords[ft.slot_of(v, j)] = aj;
        RElt mono(F->res_degree(), 0);
        mono[j] = 1;
        FieldElement g = F->add(F->one(), F->mul(F->lift(mono), F->pow(F->uniformizer(), v)));
        u0 = F->mul(u0, F->pow(F->inv(g), aj));
      }
    } else if (!top) {
      // p | v: digit killed by an explicit p-th power, u0 <- u0 g^-p
      RElt x = F->res_pth_root(a);
      FieldElement g = F->add(F->one(), F->mul(F->lift(x), F->pow(F->uniformizer(), v / p)));
      u0 = F->mul(u0, F->inv(F->pow(g, p)));
      if (want_root) root_acc = F->mul(root_acc, g);
    } else {
      // top level: digit must fall in im(phi), up to the extra generator
      fp::Mat A = phi_matrix(*F, ft.lambda);
      int f = F->res_degree();
      fp::Vec b(f);
      for (int i = 0; i < f; ++i) b[i] = a[i];
      auto sol = fp::solve(A, b, p);
      if (!sol && !ft.has_extra) fail(ErrKind::Internal, "phi not surjective without mu_p");
      if (!sol) {
        if (!coordinate_mode) return out;  // not a power
        // a = t * mono* + phi(x): augmented solve
        fp::Mat Aug(f, fp::Vec(f + 1));
        for (int i = 0; i < f; ++i) {
          for (int j = 0; j < f; ++j) Aug[i][j] = A[i][j];
          Aug[i][f] = (i == ft.extra_mono) ? 1 : 0;
        }
        auto sol2 = fp::solve(Aug, b, p);
        if (!sol2) fail(ErrKind::Internal, "extra generator does not complete phi");
        long tcoef = (*sol2)[f];
        out.coords[ft.slots - 1] = fp::norm(out.coords[ft.slots - 1] + tcoef, p);
        RElt mono(f, 0);
        mono[ft.extra_mono] = 1;
        FieldElement bstar =
            F->add(F->one(), F->mul(F->lift(mono), F->pow(F->uniformizer(), ft.imax)));
        u0 = F->mul(u0, F->pow(F->inv(bstar), tcoef));
        continue;  // re-read the (now solvable) digit
      }
      RElt x(f, 0);
      for (int i = 0; i < f; ++i) x[i] = (*sol)[i];
      if (F->res_is_zero(x)) fail(ErrKind::Internal, "vanishing digit reappeared");
      FieldElement g =
          F->add(F->one(), F->mul(F->lift(x), F->pow(F->uniformizer(), ft.imax / p)));
      u0 = F->mul(u0, F->inv(F->pow(g, p)));
      if (want_root) root_acc = F->mul(root_acc, g);
    }
  }
  out.is_power = true;
  if (want_root) {
    // tail: v(u0-1) > pe/(p-1), root = exp(log(u0)/p)
    FieldElement lg = F->padic_log(u0);
    FieldElement tail =
        lg.is_zero() ? F->one()
                     : F->padic_exp(FieldElement(F, lg.coords(), lg.denom() + 1, lg.known()));
    out.root = F->mul(root_acc, tail);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// is_pth_power (declared on FieldDescriptor)
// ---------------------------------------------------------------------------

std::optional<FieldElement> FieldDescriptor::is_pth_power(const FieldElement& u, long ell) const {
  FieldPtr self = shared_from_this();
  long v = val_exact(u);
  if (v % ell != 0) return std::nullopt;
  FieldElement u0 = shift(u, -v);
  auto ft = detail::make_filtration(self, ell);
  auto res = detail::unit_walk(ft, u0, /*coordinate_mode=*/false, /*want_root=*/true);
  if (!res.is_power) return std::nullopt;
  FieldElement root = mul(*res.root, pow(pi_, v / ell));
  if (!eq(pow(root, ell), u)) fail(ErrKind::Internal, "extracted root fails verification");
  return root;
}

// ---------------------------------------------------------------------------
// UnitBasis
// ---------------------------------------------------------------------------

struct UnitBasisBuilder {
  static UnitBasisPtr build(const FieldPtr& F, long ell, bool with_pi);
};

UnitBasisPtr UnitBasisBuilder::build(const FieldPtr& F, long ell, bool with_pi) {
  auto B = std::shared_ptr<UnitBasis>(new UnitBasis());
  B->F_ = F;
  B->ell_ = ell;
  B->with_pi_ = with_pi;

  auto ft = detail::make_filtration(F, ell);
  B->walk_dim_ = ft.slots;

  long p = F->p();
  int f = F->res_degree();

  // expected unit-part dimension
  int dim_units;
  if (ell == p)
    dim_units = F->degree() + (F->mu_ell_in_F(p) ? 1 : 0);
  else
    dim_units = F->mu_ell_in_F(ell) ? 1 : 0;

  std::vector<BasisGen> cands;
  if (ell == p) {
    if (F->mu_ell_in_F(p)) cands.push_back({F->zeta(p), GenProvenance::MuPart, 0});
    for (long lvl : ft.coord_levels)
      for (int j = 0; j < f; ++j) {
        RElt mono(f, 0);
        mono[j] = 1;
        FieldElement g =
            F->add(F->one(), F->mul(F->lift(mono), F->pow(F->uniformizer(), lvl)));
        cands.push_back({g, GenProvenance::Principal, lvl});
      }
    if (ft.has_extra) {
      RElt mono(f, 0);
      mono[ft.extra_mono] = 1;
      FieldElement g =
          F->add(F->one(), F->mul(F->lift(mono), F->pow(F->uniformizer(), ft.imax)));
      cands.push_back({g, GenProvenance::Principal, ft.imax});
    }
  } else if (dim_units == 1) {
    cands.push_back({F->teichmuller(F->res_generator()), GenProvenance::MuPart, 0});
  }

  // greedy independent selection on walk coordinates
  fp::Mat selected_rows;
  std::vector<fp::Vec> cols;
  for (const auto& g : cands) {
    if ((int)B->gens_.size() == dim_units) break;
    auto w = detail::unit_walk(ft, g.rep, true, false);
    fp::Vec row(w.coords.begin(), w.coords.end());
    fp::Mat test = selected_rows;
    test.push_back(row);
    if (fp::rank(test, ell) != (int)test.size()) continue;  // dependent: prune
    selected_rows = std::move(test);
    cols.push_back(row);
    B->gens_.push_back(g);
  }
  if ((int)B->gens_.size() != dim_units)
    fail(ErrKind::Internal, "unit basis dimension mismatch with the counting formula");

  if (dim_units > 0) {
    // transform: columns are walk coordinates of the published generators
    fp::Mat T(ft.slots ? ft.slots : 1, fp::Vec(dim_units, 0));
    for (int j = 0; j < dim_units; ++j)
      for (int i = 0; i < (int)cols[j].size(); ++i) T[i][j] = cols[j][i];
    // T is slots x dim; the selected columns have full rank dim = slots
    if (ft.slots != dim_units) fail(ErrKind::Internal, "walk slot count mismatch");
    auto inv = fp::inverse(T, ell);
    if (!inv) fail(ErrKind::Internal, "unit basis transform is singular");
    B->Tinv_ = *inv;
  }

  if (with_pi) B->gens_.push_back({F->uniformizer(), GenProvenance::Uniformizer, 0});
  return B;
}

UnitBasisPtr unit_basis(const FieldPtr& F, long ell) {
  return UnitBasisBuilder::build(F, ell, false);
}
UnitBasisPtr fstar_basis(const FieldPtr& F, long ell) {
  return UnitBasisBuilder::build(F, ell, true);
}

UnitClassVector UnitBasis::decompose(const FieldElement& u) const {
  const FieldPtr& F = F_;
  long v = F->val_exact(u);
  if (!with_pi_ && v != 0) fail(ErrKind::NotAUnit, "decompose requires a unit");
  FieldElement u0 = v ? F->shift(u, -v) : u;
  auto ft = detail::make_filtration(F, ell_);
  auto w = detail::unit_walk(ft, u0, true, false);
  int du = dim() - (with_pi_ ? 1 : 0);
  UnitClassVector out{shared_from_this(), std::vector<long>(dim(), 0)};
  if (du > 0) {
    fp::Vec c = fp::matvec(Tinv_, fp::Vec(w.coords.begin(), w.coords.end()), ell_);
    for (int i = 0; i < du; ++i) out.c[i] = c[i];
  }
  if (with_pi_) out.c[dim() - 1] = fp::norm(v, ell_);
  return out;
}

FieldElement UnitBasis::rep_of(const UnitClassVector& v) const {
  FieldElement r = F_->one();
  for (int i = 0; i < dim(); ++i)
    if (v.c[i]) r = F_->mul(r, F_->pow(gens_[i].rep, v.c[i]));
  return r;
}

std::string UnitBasis::provenance_label(int i) const {
  const auto& g = gens_[i];
  switch (g.prov) {
    case GenProvenance::MuPart: return "mu-part";
    case GenProvenance::Uniformizer: return "uniformizer";
    case GenProvenance::Principal: return "principal(level " + std::to_string(g.level) + ")";
  }
  return "?";
}

}  // namespace localsym
