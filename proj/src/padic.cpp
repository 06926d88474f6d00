#include "localsym/padic.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace localsym {

const char* err_name(ErrKind k) {
  switch (k) {
    case ErrKind::EvenPrime: return "EvenPrime";
    case ErrKind::NotEisenstein: return "NotEisenstein";
    case ErrKind::ReducibleResiduePolynomial: return "ReducibleResiduePolynomial";
    case ErrKind::ConfigParseError: return "ConfigParseError";
    case ErrKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrKind::MixedFields: return "MixedFields";
    case ErrKind::OutsideConvergenceDomain: return "OutsideConvergenceDomain";
    case ErrKind::NotAUnit: return "NotAUnit";
    case ErrKind::MuNotInField: return "MuNotInField";
    case ErrKind::InconsistentScalars: return "InconsistentScalars";
    case ErrKind::DegenerateForm: return "DegenerateForm";
    case ErrKind::WildPrime: return "WildPrime";
    case ErrKind::WrongReductionType: return "WrongReductionType";
    case ErrKind::InconsistentDescriptor: return "InconsistentDescriptor";
    case ErrKind::SupersingularReduction: return "SupersingularReduction";
    case ErrKind::BadReduction: return "BadReduction";
    case ErrKind::ResidueFieldTooLarge: return "ResidueFieldTooLarge";
    case ErrKind::NonMinimalModel: return "NonMinimalModel";
    case ErrKind::NoIntegralScaling: return "NoIntegralScaling";
    case ErrKind::SeriesOrderTooLow: return "SeriesOrderTooLow";
    case ErrKind::HypothesisViolated: return "HypothesisViolated";
    case ErrKind::PointIsDivisible: return "PointIsDivisible";
    case ErrKind::ClassifierSaysZero: return "ClassifierSaysZero";
    case ErrKind::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrKind::NotMultiplicative: return "NotMultiplicative";
    case ErrKind::NonSplit: return "NonSplit";
    case ErrKind::Internal: return "Internal";
  }
  return "Unknown";
}

namespace {

Int int_pow(long b, long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), (unsigned long)b, (unsigned long)e);
  return r;
}

long ceil_div(long a, long b) { return (a + b - 1) / b; }

int default_precision(long ell, long e) {
  long thr = ceil_div(ell * e, ell - 1);
  return (int)std::max<long>(60, 10 * thr);
}

long vp_int(const Int& x, long p) {
  Int t = x;
  long v = 0;
  while (t % p == 0) {
    t /= p;
    ++v;
  }
  return v;
}

long level_len(const std::vector<int>& deg, int level) {
  long L = 1;
  for (int k = 0; k <= level; ++k) L *= deg[k];
  return L;
}

long ilog(long base, long x) {
  long r = 0;
  while (x >= base) {
    x /= base;
    ++r;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// FieldElement basics
// ---------------------------------------------------------------------------

FieldElement::FieldElement(FieldPtr F, std::vector<Int> coords, int denom, int known)
    : F_(std::move(F)), c_(std::move(coords)), denom_(denom), known_(known) {
  normalize();
}

void FieldElement::normalize() {
  if (!F_) return;
  if ((long)c_.size() != F_->degree()) c_.resize(F_->degree(), Int(0));
  F_->canonicalize(c_, known_);
  while (denom_ > 0) {
    bool all = true;
    for (const auto& x : c_)
      if (x % F_->p() != 0) { all = false; break; }
    if (!all) break;
    for (auto& x : c_) x /= F_->p();
    --denom_;
    --known_;
  }
  bool allz = true;
  for (const auto& x : c_)
    if (x != 0) { allz = false; break; }
  if (allz && denom_ > 0) {
    // zero representative: drop the denominator, keeping the (possibly
    // negative) certified bound known - denom
    known_ -= denom_;
    denom_ = 0;
  }
  if (known_ <= denom_) {
    // no certified digits: keep the bound, zero the representative
    for (auto& x : c_) x = 0;
    known_ -= denom_;
    denom_ = 0;
  }
}

int FieldElement::abs_prec() const { return F_->ram_index() * (known_ - denom_); }

FieldElement FieldElement::operator+(const FieldElement& o) const { return F_->add(*this, o); }
FieldElement FieldElement::operator-(const FieldElement& o) const { return F_->sub(*this, o); }
FieldElement FieldElement::operator-() const { return F_->neg(*this); }
FieldElement FieldElement::operator*(const FieldElement& o) const { return F_->mul(*this, o); }
FieldElement FieldElement::operator*(long n) const { return F_->mul(*this, F_->from_int(Int(n))); }
FieldElement FieldElement::operator*(const Int& n) const { return F_->mul(*this, F_->from_int(n)); }
bool FieldElement::is_zero() const { return !F_->valuation(*this).has_value(); }

// ---------------------------------------------------------------------------
// Residue polynomial helpers (dense, coefficients RElt)
// ---------------------------------------------------------------------------

namespace {

using RPoly = std::vector<RElt>;

RPoly rp_trim(const FieldDescriptor& K, RPoly a) {
  while (!a.empty() && K.res_is_zero(a.back())) a.pop_back();
  return a;
}

RPoly rp_mod(const FieldDescriptor& K, RPoly a, const RPoly& m) {
  a = rp_trim(K, std::move(a));
  long dm = (long)m.size() - 1;
  RElt lead_inv = K.res_inv(m.back());
  while ((long)a.size() - 1 >= dm) {
    RElt c = K.res_mul(a.back(), lead_inv);
    long shift = (long)a.size() - 1 - dm;
    for (long i = 0; i <= dm; ++i) a[shift + i] = K.res_sub(a[shift + i], K.res_mul(c, m[i]));
    a = rp_trim(K, std::move(a));
  }
  return a;
}

RPoly rp_mulmod(const FieldDescriptor& K, const RPoly& a, const RPoly& b, const RPoly& m) {
  if (a.empty() || b.empty()) return {};
  RPoly c(a.size() + b.size() - 1, K.res_zero());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = K.res_add(c[i + j], K.res_mul(a[i], b[j]));
  return rp_mod(K, std::move(c), m);
}

RPoly rp_powmod(const FieldDescriptor& K, RPoly base, Int e, const RPoly& m) {
  RPoly r{K.res_one()};
  base = rp_mod(K, std::move(base), m);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = rp_mulmod(K, r, base, m);
    base = rp_mulmod(K, base, base, m);
    e >>= 1;
  }
  return r;
}

RPoly rp_gcd(const FieldDescriptor& K, RPoly a, RPoly b) {
  a = rp_trim(K, std::move(a));
  b = rp_trim(K, std::move(b));
  while (!b.empty()) {
    RPoly r = rp_mod(K, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

bool rp_irreducible(const FieldDescriptor& K, const RPoly& m) {
  long n = (long)m.size() - 1;
  if (n <= 0) return false;
  if (n == 1) return true;
  if (K.res_is_zero(m[0])) return false;
  const Int& q = K.res_card();
  RPoly x{K.res_zero(), K.res_one()};
  RPoly fr = x;
  std::vector<RPoly> frob;  // x^(q^j) mod m, j = 1..n
  for (long j = 1; j <= n; ++j) {
    fr = rp_powmod(K, fr, q, m);
    frob.push_back(fr);
  }
  RPoly diff = frob[n - 1];
  if (diff.size() < 2) diff.resize(2, K.res_zero());
  diff[1] = K.res_sub(diff[1], K.res_one());
  if (!rp_trim(K, diff).empty()) return false;
  for (long j = 1; j < n; ++j) {
    if (n % j != 0) continue;
    RPoly d = frob[j - 1];
    if (d.size() < 2) d.resize(2, K.res_zero());
    d[1] = K.res_sub(d[1], K.res_one());
    if ((long)rp_gcd(K, m, d).size() - 1 > 0) return false;
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

struct FieldBuilder {
  static std::shared_ptr<FieldDescriptor> create() {
    return std::shared_ptr<FieldDescriptor>(new FieldDescriptor());
  }

  static FieldPtr make_base(long p, int Mw, long ell_hint) {
    auto D = create();
    D->p_ = p;
    D->Mw_ = Mw;
    D->ell_hint_ = ell_hint;
    D->depth_ = 0;
    finish(D);
    return D;
  }

  static FieldPtr make_unram(const FieldPtr& F, const std::vector<RElt>& residue_poly) {
    int n = (int)residue_poly.size() - 1;
    auto D = create();
    D->p_ = F->p();
    D->parent_ = F;
    D->depth_ = F->depth() + 1;
    D->Mw_ = F->bottom_digits();
    D->ell_hint_ = F->ell_hint();
    D->step_.kind = StepKind::Unramified;
    D->step_.degree = n;
    D->step_.residue_poly = residue_poly;
    D->step_.def.resize(n + 1);
    for (int i = 0; i <= n; ++i) D->step_.def[i] = F->lift(residue_poly[i]).coords();
    std::vector<Int> lead(F->degree(), 0);
    lead[0] = 1;
    D->step_.def[n] = lead;
    finish(D);
    return D;
  }

  static FieldPtr make_eis(const FieldPtr& F, const std::vector<FieldElement>& monic_def,
                           int Mw) {
    int n = (int)monic_def.size() - 1;
    auto D = create();
    D->p_ = F->p();
    D->parent_ = F;
    D->depth_ = F->depth() + 1;
    D->Mw_ = Mw;
    D->ell_hint_ = F->ell_hint();
    D->step_.kind = StepKind::Eisenstein;
    D->step_.degree = n;
    D->step_.def.resize(n + 1);
    for (int i = 0; i <= n; ++i) D->step_.def[i] = monic_def[i].coords();
    finish(D);
    return D;
  }

  // Fills derived data.  Pre: p_, Mw_, ell_hint_, parent_, step_, depth_ set.
  static void finish(std::shared_ptr<FieldDescriptor>& D) {
    FieldDescriptor& F = *D;
    if (F.parent_) {
      F.step_deg_ = F.parent_->step_deg_;
      F.step_kind_ = F.parent_->step_kind_;
      F.res_deg_ = F.parent_->res_deg_;
      F.res_def_ = F.parent_->res_def_;
      F.d_ = F.parent_->d_ * F.step_.degree;
      F.e_ = F.parent_->e_;
      F.f_ = F.parent_->f_;
      F.step_deg_.push_back(F.step_.degree);
      F.step_kind_.push_back(F.step_.kind);
      if (F.step_.kind == StepKind::Unramified) {
        F.f_ *= F.step_.degree;
        F.res_deg_.push_back(F.step_.degree);
        F.res_def_.push_back(F.step_.residue_poly);
      } else {
        F.e_ *= F.step_.degree;
      }
    } else {
      F.d_ = F.e_ = F.f_ = 1;
    }
    F.q_ = int_pow(F.p_, F.f_);
    F.pM_ = int_pow(F.p_, F.Mw_);

    F.uniformizer_level_ = -1;
    for (int k = (int)F.step_kind_.size() - 1; k >= 0; --k)
      if (F.step_kind_[k] != StepKind::Unramified) { F.uniformizer_level_ = k; break; }

    F.unram_monomials_.clear();
    {
      int depth = (int)F.step_deg_.size();
      for (long lin = 0; lin < F.d_; ++lin) {
        long t = lin;
        bool ok = true;
        for (int k = 0; k < depth; ++k) {
          int i = (int)(t % F.step_deg_[k]);
          t /= F.step_deg_[k];
          if (i != 0 && F.step_kind_[k] != StepKind::Unramified) { ok = false; break; }
        }
        if (ok) F.unram_monomials_.push_back((int)lin);
      }
    }

    if (F.uniformizer_level_ < 0) {
      F.pi_ = F.from_int(Int(F.p_));
      F.pi_inv_ = F.from_coords({Int(1)}, 1);
    } else {
      FieldElement pi = F.gen(F.uniformizer_level_);
      F.pi_ = pi;
      FieldElement pe = F.pow(pi, (long)F.e_);
      std::vector<Int> w = pe.coords();
      for (auto& x : w) {
        if (x % F.p_ != 0) fail(ErrKind::Internal, "pi^e not divisible by p");
        x /= F.p_;
      }
      FieldElement wu(D, std::move(w), 0, pe.known() - 1);
      FieldElement winv = F.inv_unit(wu);
      FieldElement prod = F.mul(F.pow(pi, (long)F.e_ - 1), winv);
      F.pi_inv_ = FieldElement(D, prod.coords(), prod.denom() + 1, prod.known());
    }
  }
};

namespace {

long tower_e(const std::vector<StepSpec>& steps, long p) {
  long e = 1;
  for (const auto& s : steps) {
    if (s.kind == StepKind::Eisenstein) e *= s.degree;
    if (s.kind == StepKind::Cyclotomic) e *= (p - 1);
  }
  return e;
}

}  // namespace

FieldPtr extend_unramified(const FieldPtr& F, const std::vector<RElt>& residue_poly) {
  int n = (int)residue_poly.size() - 1;
  if (n < 1) fail(ErrKind::ReducibleResiduePolynomial, "degree must be >= 1");
  if (!rp_irreducible(*F, residue_poly))
    fail(ErrKind::ReducibleResiduePolynomial, "residue polynomial is not irreducible");
  return FieldBuilder::make_unram(F, residue_poly);
}

FieldPtr extend_eisenstein(const FieldPtr& F, const std::vector<FieldElement>& monic_def) {
  int n = (int)monic_def.size() - 1;
  if (n < 1) fail(ErrKind::NotEisenstein, "degree must be >= 1");
  for (int i = 0; i <= n; ++i)
    if (monic_def[i].field() != F) fail(ErrKind::MixedFields, "coefficients must live in the base");
  for (int i = 0; i < n; ++i) {
    if (monic_def[i].denom() != 0) fail(ErrKind::NotEisenstein, "coefficients must be integral");
    auto v = F->valuation(monic_def[i]);
    if (i == 0) {
      if (!v || *v != 1)
        fail(ErrKind::NotEisenstein, "constant term must have valuation exactly 1");
    } else if (v && *v < 1) {
      fail(ErrKind::NotEisenstein, "coefficient valuation below 1");
    }
  }
  if (!F->eq(monic_def[n], F->one())) fail(ErrKind::NotEisenstein, "polynomial must be monic");

  long e2 = (long)F->ram_index() * n;
  int Mw = (int)std::min<long>(F->bottom_digits(),
                               ceil_div(default_precision(F->ell_hint(), e2), e2));
  return FieldBuilder::make_eis(F, monic_def, std::max(Mw, 2));
}

std::vector<RElt> canonical_residue_poly(const FieldPtr& F, int n) {
  const Int& q = F->res_card();
  auto mk = [&](const std::vector<std::pair<int, Int>>& coeffs) {
    std::vector<RElt> m(n + 1, F->res_zero());
    m[n] = F->res_one();
    for (auto& [pos, idx] : coeffs) m[pos] = F->res_by_index(idx);
    return m;
  };
  for (Int c = 1; c < q; ++c) {
    auto m = mk({{0, c}});
    if (rp_irreducible(*F, m)) return m;
  }
  for (Int c1 = 1; c1 < q; ++c1)
    for (Int c0 = 1; c0 < q; ++c0) {
      auto m = mk({{1, c1}, {0, c0}});
      if (rp_irreducible(*F, m)) return m;
    }
  Int total = 1;
  for (int i = 0; i < n; ++i) total *= q;
  for (Int code = 1; code < total; ++code) {
    Int t = code;
    std::vector<std::pair<int, Int>> coeffs;
    for (int i = 0; i < n; ++i) {
      Int dg = t % q;
      t /= q;
      if (dg != 0) coeffs.push_back({i, dg});
    }
    auto m = mk(coeffs);
    if (rp_irreducible(*F, m)) return m;
  }
  fail(ErrKind::Internal, "no irreducible polynomial found");
}

FieldPtr extend_unramified_canonical(const FieldPtr& F, int n) {
  return extend_unramified(F, canonical_residue_poly(F, n));
}

FieldPtr make_field(long p, const std::vector<StepSpec>& steps, int precision, long ell_hint) {
  if (p < 3 || p % 2 == 0) fail(ErrKind::EvenPrime, "p must be an odd prime >= 3");
  {
    Int pp(p);
    if (mpz_probab_prime_p(pp.get_mpz_t(), 30) == 0) fail(ErrKind::EvenPrime, "p must be prime");
  }
  long ell = ell_hint > 0 ? ell_hint : p;
  long e = tower_e(steps, p);
  int N = precision > 0 ? precision : default_precision(ell, e);
  int Mw = std::max(2, (int)ceil_div(N, e));

  FieldPtr F = FieldBuilder::make_base(p, Mw, ell);
  for (const auto& s : steps) {
    switch (s.kind) {
      case StepKind::Cyclotomic: {
        // minimal polynomial of zeta_p - 1: ((x+1)^p - 1)/x
        std::vector<FieldElement> def;
        for (long k = 0; k <= p - 1; ++k) {
          Int c;
          mpz_bin_uiui(c.get_mpz_t(), (unsigned long)p, (unsigned long)(k + 1));
          def.push_back(F->from_int(c));
        }
        F = extend_eisenstein(F, def);
        break;
      }
      case StepKind::Eisenstein: {
        if ((int)s.coeff_literals.size() != s.degree + 1)
          fail(ErrKind::NotEisenstein, "need degree+1 coefficients");
        std::vector<FieldElement> def;
        for (const auto& lit : s.coeff_literals) def.push_back(F->parse(lit));
        F = extend_eisenstein(F, def);
        break;
      }
      case StepKind::Unramified: {
        if ((int)s.coeff_literals.size() != s.degree + 1)
          fail(ErrKind::ReducibleResiduePolynomial, "need degree+1 residue coefficients");
        std::vector<RElt> rp;
        for (const auto& lit : s.coeff_literals) rp.push_back(F->residue(F->parse(lit)));
        F = extend_unramified(F, rp);
        break;
      }
    }
  }
  return F;
}

// ---------------------------------------------------------------------------
// Core arithmetic
// ---------------------------------------------------------------------------

void FieldDescriptor::canonicalize(std::vector<Int>& c, int known) const {
  if (known <= 0) {
    for (auto& x : c) x = 0;
    return;
  }
  Int m = known == Mw_ ? pM_ : int_pow(p_, known);
  for (auto& x : c) mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
}

void FieldDescriptor::mul_rec(int level, const Int* a, const Int* b, Int* out) const {
  if (level < 0) {
    out[0] = a[0] * b[0];
    return;
  }
  int m = step_deg_[level];
  long L = level_len(step_deg_, level - 1);
  std::vector<Int> t((2 * m - 1) * L);
  std::vector<Int> prod(L);
  auto block_zero = [&](const Int* x) {
    for (long i = 0; i < L; ++i)
      if (x[i] != 0) return false;
    return true;
  };
  for (int i = 0; i < m; ++i) {
    if (block_zero(a + i * L)) continue;
    for (int j = 0; j < m; ++j) {
      if (block_zero(b + j * L)) continue;
      mul_rec(level - 1, a + i * L, b + j * L, prod.data());
      for (long x = 0; x < L; ++x) t[(i + j) * L + x] += prod[x];
    }
  }
  reduce_block(level, t.data(), out);
}

void FieldDescriptor::reduce_block(int level, Int* t, Int* out) const {
  int m = step_deg_[level];
  long L = level_len(step_deg_, level - 1);
  const TowerStep* st;
  {
    const FieldDescriptor* cur = this;
    for (int k = (int)step_deg_.size() - 1; k > level; --k) cur = cur->parent_.get();
    st = &cur->step_;
  }
  std::vector<Int> prod(L);
  auto block_zero = [&](const Int* x) {
    for (long i = 0; i < L; ++i)
      if (x[i] != 0) return false;
    return true;
  };
  for (int hi = 2 * m - 2; hi >= m; --hi) {
    if (block_zero(t + hi * L)) continue;
    for (int j = 0; j < m; ++j) {
      if (block_zero(st->def[j].data())) continue;
      mul_rec(level - 1, t + hi * L, st->def[j].data(), prod.data());
      for (long x = 0; x < L; ++x) t[(hi - m + j) * L + x] -= prod[x];
    }
    for (long x = 0; x < L; ++x) t[hi * L + x] = 0;
  }
  for (long x = 0; x < (long)m * L; ++x) out[x] = t[x];
}

FieldElement FieldDescriptor::zero() const {
  return FieldElement(shared_from_this(), std::vector<Int>(d_, Int(0)), 0, Mw_);
}

FieldElement FieldDescriptor::one() const { return from_int(Int(1)); }

FieldElement FieldDescriptor::from_int(const Int& n) const {
  std::vector<Int> c(d_, Int(0));
  c[0] = n;
  return FieldElement(shared_from_this(), std::move(c), 0, Mw_);
}

FieldElement FieldDescriptor::from_coords(std::vector<Int> coords, int denom) const {
  coords.resize(d_, Int(0));
  return FieldElement(shared_from_this(), std::move(coords), denom, Mw_);
}

FieldElement FieldDescriptor::gen(int level) const {
  if (level < 0 || level >= (int)step_deg_.size()) fail(ErrKind::Internal, "bad generator level");
  std::vector<Int> c(d_, Int(0));
  c[level_len(step_deg_, level - 1)] = 1;
  return FieldElement(shared_from_this(), std::move(c), 0, Mw_);
}

FieldElement FieldDescriptor::embed(const FieldElement& x) const {
  if (x.field().get() == this) return x;
  const FieldDescriptor* cur = this;
  while (cur && cur != x.field().get()) cur = cur->parent_.get();
  if (!cur) fail(ErrKind::MixedFields, "embed: not a subfield of this tower");
  std::vector<Int> c(d_, Int(0));
  for (size_t i = 0; i < x.coords().size(); ++i) c[i] = x.coords()[i];
  return FieldElement(shared_from_this(), std::move(c), x.denom(), std::min(x.known(), Mw_));
}

FieldElement FieldDescriptor::project_to_parent(const FieldElement& x) const {
  if (!parent_) fail(ErrKind::MixedFields, "base field has no parent");
  long L = parent_->d_;
  for (long i = L; i < d_; ++i)
    if (x.coords()[i] != 0) fail(ErrKind::MixedFields, "element not in the subfield");
  std::vector<Int> c(x.coords().begin(), x.coords().begin() + L);
  return FieldElement(parent_, std::move(c), x.denom(), std::min(x.known(), parent_->Mw_));
}

FieldElement FieldDescriptor::add(const FieldElement& a, const FieldElement& b) const {
  if (a.field().get() != this || b.field().get() != this)
    fail(ErrKind::MixedFields, "operands from different fields");
  int s = std::max(a.denom(), b.denom());
  std::vector<Int> ca = a.coords(), cb = b.coords();
  int ka = a.known() + (s - a.denom()), kb = b.known() + (s - b.denom());
  if (s > a.denom()) {
    Int f = int_pow(p_, s - a.denom());
    for (auto& x : ca) x *= f;
  }
  if (s > b.denom()) {
    Int f = int_pow(p_, s - b.denom());
    for (auto& x : cb) x *= f;
  }
  for (long i = 0; i < d_; ++i) ca[i] += cb[i];
  return FieldElement(shared_from_this(), std::move(ca), s, std::min(ka, kb));
}

FieldElement FieldDescriptor::neg(const FieldElement& a) const {
  std::vector<Int> c = a.coords();
  for (auto& x : c) x = -x;
  return FieldElement(shared_from_this(), std::move(c), a.denom(), a.known());
}

FieldElement FieldDescriptor::sub(const FieldElement& a, const FieldElement& b) const {
  return add(a, neg(b));
}

FieldElement FieldDescriptor::mul(const FieldElement& a, const FieldElement& b) const {
  if (a.field().get() != this || b.field().get() != this)
    fail(ErrKind::MixedFields, "operands from different fields");
  std::vector<Int> out(d_);
  mul_rec((int)step_deg_.size() - 1, a.coords().data(), b.coords().data(), out.data());
  // absolute precision of a product: min(abs(a) + v(b), abs(b) + v(a)); the
  // valuation lower bound of a zero-to-precision factor is its own precision
  long abs_a = (long)e_ * (a.known() - a.denom());
  long abs_b = (long)e_ * (b.known() - b.denom());
  auto va = valuation(a), vb = valuation(b);
  long bound_a = va ? *va : abs_a;
  long bound_b = vb ? *vb : abs_b;
  long abs_prod = std::min(abs_a + bound_b, abs_b + bound_a);
  long known = a.denom() + b.denom() +
               (abs_prod >= 0 ? abs_prod / e_ : (abs_prod - e_ + 1) / e_);
  known = std::min<long>(known, a.denom() + b.denom() + Mw_);  // working cap
  return FieldElement(shared_from_this(), std::move(out), a.denom() + b.denom(), (int)known);
}

FieldElement FieldDescriptor::pow(const FieldElement& a, const Int& n) const {
  if (n < 0) return inv(pow(a, Int(-n)));
  FieldElement r = one(), base = a;
  Int e = n;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = mul(r, base);
    e >>= 1;
    if (e > 0) base = mul(base, base);
  }
  return r;
}

FieldElement FieldDescriptor::pow(const FieldElement& a, long n) const { return pow(a, Int(n)); }

namespace {

// valuation over the monomial basis; exact whenever any coordinate is nonzero
// (canonical coords lie in [0, p^known), so exact entries always beat the
// precision bound of the all-zero ones)
std::optional<long> val_go(const std::vector<int>& deg, const std::vector<StepKind>& kind, long p,
                           int level, const Int* x) {
  if (level < 0) {
    if (*x == 0) return std::nullopt;
    return vp_int(*x, p);
  }
  int m = deg[level];
  long L = level_len(deg, level - 1);
  bool eis = kind[level] != StepKind::Unramified;
  std::optional<long> best;
  for (int i = 0; i < m; ++i) {
    auto v = val_go(deg, kind, p, level - 1, x + i * L);
    if (!v) continue;
    long vv = eis ? (long)m * (*v) + i : *v;
    if (!best || vv < *best) best = vv;
  }
  return best;
}

}  // namespace

std::optional<long> FieldDescriptor::valuation(const FieldElement& x) const {
  if (x.known() <= 0) return std::nullopt;
  auto v = val_go(step_deg_, step_kind_, p_, (int)step_deg_.size() - 1, x.coords().data());
  if (!v) return std::nullopt;
  return *v - (long)x.denom() * e_;
}

long FieldDescriptor::val_exact(const FieldElement& x) const {
  auto v = valuation(x);
  if (!v)
    fail(ErrKind::PrecisionExhausted, "element indistinguishable from 0 at working precision");
  return *v;
}

bool FieldDescriptor::eq(const FieldElement& a, const FieldElement& b) const {
  return sub(a, b).is_zero();
}

FieldElement FieldDescriptor::inv_unit(const FieldElement& u) const {
  RElt r = residue(u);
  if (res_is_zero(r)) fail(ErrKind::NotAUnit, "inverse of a non-unit");
  FieldElement x = lift(res_inv(r));
  long target = (long)e_ * u.known();
  long got = 1;
  for (int it = 0; got < target && it < 64; ++it) {
    x = mul(x, sub(from_int(Int(2)), mul(u, x)));
    got *= 2;
  }
  return x;
}

FieldElement FieldDescriptor::unit_part(const FieldElement& x, long* v_out) const {
  long v = val_exact(x);
  if (v_out) *v_out = v;
  return shift(x, -v);
}

FieldElement FieldDescriptor::shift(const FieldElement& x, long k) const {
  if (k == 0) return x;
  return mul(x, k > 0 ? pow(pi_, k) : pow(pi_inv_, -k));
}

FieldElement FieldDescriptor::inv(const FieldElement& a) const {
  long v = val_exact(a);
  FieldElement u = shift(a, -v);
  if (u.denom() > 0) fail(ErrKind::Internal, "unit part retained a denominator");
  return shift(inv_unit(u), -v);
}

FieldElement FieldDescriptor::div(const FieldElement& a, const FieldElement& b) const {
  return mul(a, inv(b));
}

// ---------------------------------------------------------------------------
// Residue field
// ---------------------------------------------------------------------------

void FieldDescriptor::res_mul_rec(int level, const long* a, const long* b, long* out) const {
  if (level < 0) {
    out[0] = (a[0] * b[0]) % p_;
    return;
  }
  int m = res_deg_[level];
  long L = 1;
  for (int k = 0; k < level; ++k) L *= res_deg_[k];
  std::vector<long> t((2 * m - 1) * L, 0), prod(L);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      res_mul_rec(level - 1, a + i * L, b + j * L, prod.data());
      for (long x = 0; x < L; ++x) t[(i + j) * L + x] = (t[(i + j) * L + x] + prod[x]) % p_;
    }
  const std::vector<RElt>& def = res_def_[level];
  std::vector<long> dj(L);
  for (int hi = 2 * m - 2; hi >= m; --hi) {
    for (int j = 0; j < m; ++j) {
      for (long x = 0; x < L; ++x) dj[x] = x < (long)def[j].size() ? def[j][x] : 0;
      res_mul_rec(level - 1, t.data() + hi * L, dj.data(), prod.data());
      for (long x = 0; x < L; ++x) {
        long& c = t[(hi - m + j) * L + x];
        c = ((c - prod[x]) % p_ + p_) % p_;
      }
    }
    for (long x = 0; x < L; ++x) t[hi * L + x] = 0;
  }
  for (long x = 0; x < (long)m * L; ++x) out[x] = t[x];
}

RElt FieldDescriptor::res_add(const RElt& a, const RElt& b) const {
  RElt r(f_);
  for (int i = 0; i < f_; ++i) r[i] = (a[i] + b[i]) % p_;
  return r;
}

RElt FieldDescriptor::res_sub(const RElt& a, const RElt& b) const {
  RElt r(f_);
  for (int i = 0; i < f_; ++i) r[i] = ((a[i] - b[i]) % p_ + p_) % p_;
  return r;
}

RElt FieldDescriptor::res_neg(const RElt& a) const { return res_sub(res_zero(), a); }

RElt FieldDescriptor::res_mul(const RElt& a, const RElt& b) const {
  RElt r(f_, 0);
  res_mul_rec((int)res_deg_.size() - 1, a.data(), b.data(), r.data());
  return r;
}

RElt FieldDescriptor::res_pow(const RElt& a, const Int& n) const {
  if (res_is_zero(a)) return n == 0 ? res_one() : res_zero();
  Int e = n;
  Int qm1 = q_ - 1;
  mpz_fdiv_r(e.get_mpz_t(), e.get_mpz_t(), qm1.get_mpz_t());
  RElt r = res_one(), base = a;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = res_mul(r, base);
    base = res_mul(base, base);
    e >>= 1;
  }
  return r;
}

RElt FieldDescriptor::res_inv(const RElt& a) const {
  if (res_is_zero(a)) fail(ErrKind::NotAUnit, "residue inverse of zero");
  return res_pow(a, q_ - 2);
}

RElt FieldDescriptor::res_one() const { return res_from_int(1); }

RElt FieldDescriptor::res_from_int(long n) const {
  RElt r(f_, 0);
  r[0] = ((n % p_) + p_) % p_;
  return r;
}

bool FieldDescriptor::res_is_zero(const RElt& a) const {
  for (long x : a)
    if (x % p_ != 0) return false;
  return true;
}

bool FieldDescriptor::res_eq(const RElt& a, const RElt& b) const {
  return res_is_zero(res_sub(a, b));
}

RElt FieldDescriptor::res_by_index(const Int& i) const {
  RElt r(f_, 0);
  Int t = i;
  for (int k = 0; k < f_; ++k) {
    Int dg = t % p_;
    t /= p_;
    r[k] = dg.get_si();
  }
  return r;
}

Int FieldDescriptor::res_index(const RElt& a) const {
  Int r = 0;
  for (int k = f_ - 1; k >= 0; --k) r = r * p_ + a[k];
  return r;
}

RElt FieldDescriptor::res_pth_root(const RElt& a) const { return res_pow(a, q_ / p_); }

RElt FieldDescriptor::res_generator() const {
  Int n = q_ - 1;
  std::vector<Int> primes;
  Int m = n;
  for (Int t = 2; t * t <= m; t += 1) {
    if (m % t == 0) {
      primes.push_back(t);
      while (m % t == 0) m /= t;
    }
  }
  if (m > 1) primes.push_back(m);
  for (Int i = 1; i < q_; ++i) {
    RElt a = res_by_index(i);
    bool gen = true;
    for (const auto& r : primes)
      if (res_eq(res_pow(a, n / r), res_one())) { gen = false; break; }
    if (gen) return a;
  }
  fail(ErrKind::Internal, "no generator of k*");
}

long FieldDescriptor::res_dlog_mu_ell(const RElt& a, long ell) const {
  RElt z = res_pow(res_generator(), (q_ - 1) / ell);
  RElt cur = res_one();
  for (long i = 0; i < ell; ++i) {
    if (res_eq(cur, a)) return i;
    cur = res_mul(cur, z);
  }
  fail(ErrKind::Internal, "element not in mu_ell(k)");
}

RElt FieldDescriptor::residue(const FieldElement& x) const {
  if (x.denom() != 0) fail(ErrKind::NotAUnit, "residue of a non-integral element");
  RElt r(f_, 0);
  for (int j = 0; j < f_; ++j) {
    Int c = x.coords()[unram_monomials_[j]] % p_;
    if (c < 0) c += p_;
    r[j] = c.get_si();
  }
  return r;
}

FieldElement FieldDescriptor::lift(const RElt& r) const {
  std::vector<Int> c(d_, Int(0));
  for (int j = 0; j < f_; ++j) c[unram_monomials_[j]] = r[j];
  return FieldElement(shared_from_this(), std::move(c), 0, Mw_);
}

RElt FieldDescriptor::digit(const FieldElement& x, long i) const {
  FieldElement y = i == 0 ? x : shift(x, -i);
  if (y.denom() != 0)
    fail(ErrKind::Internal, "digit below the element's valuation");
  return residue(y);
}

FieldElement FieldDescriptor::teichmuller(const RElt& r) const {
  if (res_is_zero(r)) return zero();
  FieldElement x = lift(r);
  for (int it = 0; it < 4 * Mw_ * e_ + 8; ++it) {
    FieldElement nx = pow(x, q_);
    if (eq(nx, x)) return nx;
    x = nx;
  }
  fail(ErrKind::Internal, "teichmuller iteration did not stabilize");
}

// ---------------------------------------------------------------------------
// mu_ell and zeta
// ---------------------------------------------------------------------------

bool FieldDescriptor::mu_ell_in_F(long ell) const {
  if (ell == p_) {
    if (mu_p_cache_) return *mu_p_cache_;
    bool ans = false;
    if (e_ % (p_ - 1) == 0) {
      // x^(p-1) = -lambda solvable in k*, with lambda = res(p * pi^-e)
      RElt lam = residue(shift(from_int(Int(p_)), -e_));
      ans = res_eq(res_pow(res_neg(lam), (q_ - 1) / (p_ - 1)), res_one());
    }
    mu_p_cache_ = ans;
    return ans;
  }
  return (q_ - 1) % ell == 0;
}

FieldElement FieldDescriptor::zeta(long ell) const {
  if (!mu_ell_in_F(ell)) fail(ErrKind::MuNotInField, "mu_ell not contained in F");
  if (ell != p_) {
    return teichmuller(res_pow(res_generator(), (q_ - 1) / ell));
  }
  if (zeta_p_cache_) return *zeta_p_cache_;
  for (int k = 0; k < (int)step_kind_.size(); ++k) {
    if (step_kind_[k] == StepKind::Cyclotomic) {
      FieldElement z = add(one(), gen(k));
      zeta_p_cache_ = z;
      return z;
    }
  }
  // solve Phi_p(1 + pi^m s) = 0 for a unit s, m = e/(p-1)
  long m = e_ / (p_ - 1);
  std::vector<FieldElement> cf;
  for (long k = 0; k <= p_ - 1; ++k) {
    Int c;
    mpz_bin_uiui(c.get_mpz_t(), (unsigned long)p_, (unsigned long)(k + 1));
    cf.push_back(shift(mul(from_int(c), pow(pi_, m * k)), -e_));
  }
  RElt target = res_neg(residue(cf[0]));
  if (q_ > 100000) fail(ErrKind::ResidueFieldTooLarge, "residue scan cap exceeded");
  RElt root;
  bool found = false;
  for (Int i = 1; i < q_; ++i) {
    RElt cand = res_by_index(i);
    if (res_eq(res_pow(cand, p_ - 1), target)) { root = cand; found = true; break; }
  }
  if (!found) fail(ErrKind::Internal, "mu flag inconsistent with residue solve");
  FieldElement s = teichmuller(root);
  auto horner = [&](const FieldElement& x, bool deriv) {
    FieldElement acc = zero();
    for (int k = (int)cf.size() - 1; k >= (deriv ? 1 : 0); --k) {
      FieldElement c = deriv ? mul(cf[k], from_int(Int(k))) : cf[k];
      acc = add(mul(acc, x), c);
    }
    return acc;
  };
  for (int it = 0; it < 64; ++it) {
    FieldElement fv = horner(s, false);
    if (fv.is_zero()) break;
    s = sub(s, div(fv, horner(s, true)));
  }
  FieldElement z = add(one(), mul(pow(pi_, m), s));
  zeta_p_cache_ = z;
  return z;
}

// ---------------------------------------------------------------------------
// log / exp
// ---------------------------------------------------------------------------

// Series terms whose exact valuation k v - e v_p(k...) already exceeds the
// precision the accumulated sum can still deliver are skipped rather than
// added: adding them would only propagate their denominator-driven precision
// loss into the sum.

FieldElement FieldDescriptor::padic_log(const FieldElement& u) const {
  FieldElement x = sub(u, one());
  auto vx = valuation(x);
  if (!vx) return zero();
  long v = *vx;
  if (v < 1) fail(ErrKind::OutsideConvergenceDomain, "log requires v(u-1) >= 1");
  FieldElement acc = zero();
  FieldElement xp = x;
  for (long k = 1;; ++k) {
    long kk = k;
    int a = 0;
    while (kk % p_ == 0) { kk /= p_; ++a; }
    long deliver = (long)e_ * (acc.known() - acc.denom());
    long val_true = k * v - (long)e_ * a;
    if (val_true < deliver) {
      FieldElement t = kk == 1 ? xp : mul(xp, inv_unit(from_int(Int(kk))));
      if (a) t = FieldElement(shared_from_this(), t.coords(), t.denom() + a, t.known());
      if (k % 2 == 0) t = neg(t);
      acc = add(acc, t);
    }
    if (k >= e_ && k * v - e_ * (ilog(p_, k) + 1) >= deliver) break;
    if (k > 16 * e_ * Mw_ + 64) fail(ErrKind::Internal, "log series failed to terminate");
    xp = mul(xp, x);
  }
  return acc;
}

FieldElement FieldDescriptor::padic_exp(const FieldElement& x) const {
  auto vx = valuation(x);
  if (!vx) return one();
  long v = *vx;
  if (v * (p_ - 1) <= e_) fail(ErrKind::OutsideConvergenceDomain, "exp requires v(x) > e/(p-1)");
  FieldElement acc = one();
  FieldElement term = one();
  long vfact = 0;  // v_p(k!)
  for (long k = 1;; ++k) {
    long kk = k;
    int a = 0;
    while (kk % p_ == 0) { kk /= p_; ++a; }
    vfact += a;
    term = mul(term, x);
    if (kk != 1) term = mul(term, inv_unit(from_int(Int(kk))));
    if (a) term = FieldElement(shared_from_this(), term.coords(), term.denom() + a, term.known());
    long deliver = (long)e_ * (acc.known() - acc.denom());
    long val_true = k * v - (long)e_ * vfact;
    if (val_true < deliver) acc = add(acc, term);
    if (k * (v * (p_ - 1) - e_) >= deliver * (p_ - 1)) break;
    if (k > 16 * e_ * Mw_ + 64) fail(ErrKind::Internal, "exp series failed to terminate");
  }
  return acc;
}

// ---------------------------------------------------------------------------
// printing / parsing
// ---------------------------------------------------------------------------

FieldElement cap_prec(const FieldElement& x, long n) {
  const FieldPtr& F = x.field();
  long e = F->ram_index();
  int known_cap = (int)(x.denom() + (n >= 0 ? n / e : (n - e + 1) / e));
  return FieldElement(F, x.coords(), x.denom(), std::min(x.known(), known_cap));
}

std::string FieldDescriptor::gen_name(int level) const {
  int unram_rank = 0, ram_rank = 0;
  for (int k = (int)step_kind_.size() - 1; k > level; --k) {
    if (step_kind_[k] == StepKind::Unramified) ++unram_rank;
    else ++ram_rank;
  }
  if (step_kind_[level] == StepKind::Unramified)
    return unram_rank == 0 ? "z" : "z" + std::to_string(unram_rank + 1);
  return ram_rank == 0 ? "pi" : "pi" + std::to_string(ram_rank + 1);
}

std::string FieldDescriptor::print(const FieldElement& x) const {
  if (x.is_zero()) return "0";
  FieldElement rem = x;
  std::ostringstream os;
  bool first = true;
  int depth = (int)step_deg_.size();
  int guard = 0;
  while (!rem.is_zero()) {
    long v = val_exact(rem);
    RElt dgt = digit(rem, v);
    for (int j = 0; j < f_; ++j) {
      if (dgt[j] == 0) continue;
      if (!first) os << "+";
      first = false;
      os << dgt[j];
      long t = unram_monomials_[j];
      for (int k = 0; k < depth; ++k) {
        int ik = (int)(t % step_deg_[k]);
        t /= step_deg_[k];
        if (ik != 0) os << "*" << gen_name(k) << "^" << ik;
      }
      os << "*pi^" << v;
    }
    rem = sub(rem, mul(lift(dgt), v >= 0 ? pow(pi_, v) : pow(pi_inv_, -v)));
    if (++guard > e_ * Mw_ * (f_ + 1) + 16) fail(ErrKind::Internal, "print did not terminate");
  }
  return first ? "0" : os.str();
}

FieldElement FieldDescriptor::parse(const std::string& literal) const {
  std::string s;
  for (char ch : literal)
    if (!std::isspace((unsigned char)ch)) s.push_back(ch);
  if (s.empty()) fail(ErrKind::ConfigParseError, "empty literal");
  size_t pos = 0;
  auto parse_int = [&]() -> Int {
    size_t start = pos;
    if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
    size_t ds = pos;
    while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
    if (pos == ds)
      fail(ErrKind::ConfigParseError,
           "expected integer at position " + std::to_string(start) + " in '" + literal + "'");
    return Int(s.substr(start, pos - start));
  };
  auto parse_name = [&]() -> std::string {
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalpha((unsigned char)s[pos]) ||
            (pos > start && std::isdigit((unsigned char)s[pos]))))
      ++pos;
    if (pos == start)
      fail(ErrKind::ConfigParseError, "expected generator name in '" + literal + "'");
    return s.substr(start, pos - start);
  };
  FieldElement acc = zero();
  while (true) {
    Int c = parse_int();
    FieldElement term = from_int(c);
    while (pos < s.size() && s[pos] == '*') {
      ++pos;
      std::string name = parse_name();
      if (pos >= s.size() || s[pos] != '^')
        fail(ErrKind::ConfigParseError, "expected '^' after '" + name + "' in '" + literal + "'");
      ++pos;
      Int ex = parse_int();
      FieldElement base = zero();
      bool found = false;
      if (name == "pi") {
        base = pi_;
        found = true;
      } else {
        for (int k = 0; k < (int)step_deg_.size(); ++k)
          if (gen_name(k) == name) {
            base = gen(k);
            found = true;
            break;
          }
      }
      if (!found) fail(ErrKind::ConfigParseError, "unknown generator '" + name + "'");
      long exl = ex.get_si();
      term = mul(term, exl >= 0 ? pow(base, exl) : pow(inv(base), -exl));
    }
    acc = add(acc, term);
    if (pos >= s.size()) break;
    if (s[pos] == '+') {
      ++pos;
    } else if (s[pos] != '-') {
      fail(ErrKind::ConfigParseError,
           "unexpected character '" + std::string(1, s[pos]) + "' in '" + literal + "'");
    }
  }
  return acc;
}

}  // namespace localsym
