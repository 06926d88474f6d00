#include "localsym/hilbert.hpp"

#include <sstream>

namespace localsym {

namespace {

std::string field_id(const FieldPtr& F) {
  std::ostringstream os;
  os << "p" << F->p() << "d" << F->degree() << "e" << F->ram_index() << "f" << F->res_degree();
  return os.str();
}

// the functional (up to scalar) vanishing on the row space
fp::Vec hyperplane_functional(const NormSubgroup& ns, long ell) {
  fp::Mat M = ns.rows;
  auto null = fp::nullspace(M, ell);
  if (null.size() != 1)
    fail(ErrKind::Internal, "norm hyperplane does not determine a unique functional");
  return null[0];
}

bool proportional(const fp::Vec& a, const fp::Vec& b, long ell) {
  fp::Mat M{a, b};
  return fp::rank(M, ell) <= 1;
}

}  // namespace

SymbolForm build_symbol_form(const FieldPtr& F, long ell) {
  if (!F->mu_ell_in_F(ell)) fail(ErrKind::MuNotInField, "symbol form needs mu_ell in F");
  SymbolForm form;
  form.F = F;
  form.ell = ell;
  form.basis = fstar_basis(F, ell);
  int n = form.basis->dim();

  std::vector<fp::Vec> rows(n);
  for (int i = 0; i < n; ++i) {
    auto ext = kummer_extension(F, form.basis->gens()[i].rep, ell, form.basis);
    rows[i] = hyperplane_functional(norm_subgroup(ext), ell);
  }

  // pairwise scalar consistency against row 0
  for (int j = 1; j < n; ++j) {
    FieldElement prod = F->mul(form.basis->gens()[0].rep, form.basis->gens()[j].rep);
    auto ext = kummer_extension(F, prod, ell, form.basis);
    fp::Vec target = hyperplane_functional(norm_subgroup(ext), ell);
    long found = 0;
    for (long c = 1; c < ell; ++c) {
      fp::Vec comb(n);
      for (int t = 0; t < n; ++t) comb[t] = fp::norm(rows[0][t] + c * rows[j][t], ell);
      if (proportional(comb, target, ell)) {
        if (found) fail(ErrKind::InconsistentScalars, "two scalars match the product hyperplane");
        found = c;
      }
    }
    if (!found) fail(ErrKind::InconsistentScalars, "no scalar matches the product hyperplane");
    for (int t = 0; t < n; ++t) rows[j][t] = fp::norm(found * rows[j][t], ell);
  }

  form.mat = rows;
  // consistency: skew-symmetric with zero diagonal
  for (int i = 0; i < n; ++i) {
    if (form.mat[i][i] != 0) fail(ErrKind::InconsistentScalars, "nonzero diagonal entry");
    for (int j = 0; j < n; ++j)
      if (fp::norm(form.mat[i][j] + form.mat[j][i], ell) != 0)
        fail(ErrKind::InconsistentScalars, "matrix is not skew-symmetric");
  }
  if (fp::rank(form.mat, ell) != n)
    fail(ErrKind::DegenerateForm, "pairing degenerate although mu_ell is in F");

  // global scalar: B(pi, e*) = 1 at the first basis unit not orthogonal to pi
  int pi_row = n - 1;
  int estar = -1;
  for (int j = 0; j < n - 1; ++j)
    if (form.mat[pi_row][j] != 0) { estar = j; break; }
  if (estar < 0) fail(ErrKind::DegenerateForm, "uniformizer row vanishes on all units");
  long lambda = fp::inv_mod(form.mat[pi_row][estar], ell);
  for (auto& row : form.mat)
    for (auto& x : row) x = fp::norm(x * lambda, ell);

  std::ostringstream tag;
  tag << "B(pi,b" << estar << ")=1;ell=" << ell << ";" << field_id(F);
  form.tag = tag.str();
  return form;
}

SymbolValue eval_symbol_classes(const std::vector<long>& a, const std::vector<long>& b,
                                const SymbolForm& form) {
  int n = (int)form.mat.size();
  auto pad = [&](const std::vector<long>& x) {
    fp::Vec r(n, 0);
    if ((int)x.size() != n && (int)x.size() != n - 1)
      fail(ErrKind::MixedFields, "class vector size does not match the form");
    for (size_t i = 0; i < x.size(); ++i) r[i] = fp::norm(x[i], form.ell);
    return r;
  };
  fp::Vec va = pad(a), vb = pad(b);
  long acc = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) acc += va[i] * form.mat[i][j] * vb[j];
  return SymbolValue{fp::norm(acc, form.ell), form.tag};
}

SymbolValue eval_symbol(const FieldElement& u, const FieldElement& v, const SymbolForm& form) {
  auto du = form.basis->decompose(u);
  auto dv = form.basis->decompose(v);
  return eval_symbol_classes(du.c, dv.c, form);
}

SymbolValue tame_symbol(const FieldElement& u, const FieldElement& v, long ell) {
  const FieldPtr& F = u.field();
  if (ell == F->p()) fail(ErrKind::WildPrime, "tame symbol requires ell != p");
  if (!F->mu_ell_in_F(ell)) fail(ErrKind::MuNotInField, "tame symbol needs mu_ell in F");
  long a = F->val_exact(u), b = F->val_exact(v);
  // t = (-1)^(ab) u^b v^-a, a unit
  FieldElement t = F->one();
  if ((a * b) % 2 != 0) t = F->neg(t);
  if (b != 0) t = F->mul(t, F->pow(u, b));
  if (a != 0) t = F->mul(t, F->pow(F->inv(v), a));
  if (F->val_exact(t) != 0) fail(ErrKind::Internal, "tame combination is not a unit");
  RElt r = F->res_pow(F->residue(t), (F->res_card() - 1) / ell);
  long dl = F->res_dlog_mu_ell(r, ell);
  std::ostringstream tag;
  tag << "tame;ell=" << ell << ";" << field_id(F);
  return SymbolValue{dl, tag.str()};
}

}  // namespace localsym
