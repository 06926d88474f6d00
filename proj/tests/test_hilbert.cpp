#include "doctest.h"
#include "test_util.hpp"

#include "localsym/hilbert.hpp"

using namespace localsym;
using lt::q3z3;
using lt::qp;

TEST_CASE("symbol form over Q_3(zeta_3): shape and normalization") {
  auto F = q3z3();
  auto form = build_symbol_form(F, 3);
  int n = (int)form.mat.size();
  CHECK(n == 4);
  CHECK(fp::rank(form.mat, 3) == 4);
  for (int i = 0; i < n; ++i) CHECK(form.mat[i][i] == 0);
  // normalization row: first nonzero entry of the pi row is 1
  int estar = -1;
  for (int j = 0; j < n - 1; ++j)
    if (form.mat[n - 1][j] != 0) { estar = j; break; }
  REQUIRE(estar >= 0);
  CHECK(form.mat[n - 1][estar] == 1);
}

TEST_CASE("symbol identities: skew, inverse, ell-th powers") {
  auto F = q3z3();
  auto form = build_symbol_form(F, 3);
  std::mt19937_64 rng(71);
  for (int t = 0; t < 20; ++t) {
    FieldElement u = lt::random_unit(F, rng);
    FieldElement v = lt::random_unit(F, rng);
    auto ab = eval_symbol(u, v, form);
    auto ba = eval_symbol(v, u, form);
    CHECK(fp::norm(ab.v + ba.v, 3) == 0);
    CHECK(eval_symbol(u, u, form).zero());
    CHECK(eval_symbol(u, F->inv(u), form).zero());
    CHECK(eval_symbol(u, F->neg(u), form).zero());
    FieldElement w = lt::random_unit(F, rng);
    auto shifted = eval_symbol(u, F->mul(v, F->pow(w, 3L)), form);
    CHECK(shifted.v == ab.v);
  }
}

TEST_CASE("Steinberg relation") {
  auto F = q3z3();
  auto form = build_symbol_form(F, 3);
  std::mt19937_64 rng(73);
  int done = 0;
  while (done < 25) {
    FieldElement u = lt::random_unit(F, rng);
    FieldElement om = F->sub(F->one(), u);
    auto v = F->valuation(om);
    if (!v) continue;
    CHECK(eval_symbol(u, om, form).zero());
    ++done;
  }
}

TEST_CASE("vanishing law matches norm membership") {
  auto F = q3z3();
  auto form = build_symbol_form(F, 3);
  std::mt19937_64 rng(79);
  int done = 0;
  while (done < 12) {
    FieldElement u = F->shift(lt::random_unit(F, rng), (long)(rng() % 3));
    FieldElement v = F->shift(lt::random_unit(F, rng), (long)(rng() % 3));
    auto ext = kummer_extension(F, u, 3, form.basis);
    if (ext.cls == KummerClass::Trivial) continue;
    auto ns = norm_subgroup(ext);
    bool vanish = eval_symbol(u, v, form).zero();
    CHECK(vanish == ns.contains(form.basis->decompose(v)));
    ++done;
  }
}

TEST_CASE("full matrix against the direct norm-membership oracle") {
  auto F = q3z3();
  auto form = build_symbol_form(F, 3);
  int n = (int)form.mat.size();
  const auto& B = form.basis;
  // zero pattern of every basis pair
  for (int i = 0; i < n; ++i) {
    auto ns = norm_subgroup(kummer_extension(F, B->gens()[i].rep, 3, B));
    for (int j = 0; j < n; ++j) {
      UnitClassVector ej{B, std::vector<long>(n, 0)};
      ej.c[j] = 1;
      CHECK((form.mat[i][j] == 0) == ns.contains(ej));
    }
  }
  // pair-sum rows: ker(row_i + row_j) = norm hyperplane of e_i e_j
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      FieldElement prod = F->mul(B->gens()[i].rep, B->gens()[j].rep);
      auto ns = norm_subgroup(kummer_extension(F, prod, 3, B));
      for (long code = 0; code < 81; ++code) {
        std::vector<long> x(n);
        long t = code;
        for (int k = 0; k < n; ++k) { x[k] = t % 3; t /= 3; }
        long pair = 0;
        for (int k = 0; k < n; ++k) pair += (form.mat[i][k] + form.mat[j][k]) * x[k];
        UnitClassVector vx{B, x};
        bool zero_class = vx.is_zero();
        if (zero_class) continue;
        CHECK((fp::norm(pair, 3) == 0) == ns.contains(vx));
      }
    }
}

TEST_CASE("restriction to an unramified quadratic extension is proportional") {
  auto F = q3z3();
  auto K = extend_unramified_canonical(F, 2);
  auto formF = build_symbol_form(F, 3);
  auto formK = build_symbol_form(K, 3);
  std::mt19937_64 rng(83);
  long lambda = -1;
  int done = 0;
  while (done < 15) {
    FieldElement u = F->shift(lt::random_unit(F, rng), (long)(rng() % 3));
    FieldElement v = F->shift(lt::random_unit(F, rng), (long)(rng() % 3));
    long bf = eval_symbol(u, v, formF).v;
    long bk = eval_symbol(K->embed(u), K->embed(v), formK).v;
    if (bf == 0) {
      CHECK(bk == 0);
    } else {
      long r = fp::norm(bk * fp::inv_mod(bf, 3), 3);
      if (lambda < 0) lambda = r;
      CHECK(r == lambda);
    }
    ++done;
  }
  CHECK(lambda >= 1);  // [K:F] = 2 is prime to 3, so the ratio is nonzero
}

TEST_CASE("radical of the unit-unit restriction is the unramified line") {
  auto F = q3z3();
  auto form = build_symbol_form(F, 3);
  int n = (int)form.mat.size();
  fp::Mat unit_block(n - 1, fp::Vec(n - 1));
  for (int i = 0; i + 1 < n; ++i)
    for (int j = 0; j + 1 < n; ++j) unit_block[i][j] = form.mat[i][j];
  auto rad = fp::nullspace(unit_block, 3);
  REQUIRE(rad.size() == 1);
  UnitClassVector v{form.basis, std::vector<long>(n, 0)};
  for (int i = 0; i + 1 < n; ++i) v.c[i] = rad[0][i];
  auto ext = kummer_extension(F, form.basis->rep_of(v), 3, form.basis);
  CHECK(ext.cls == KummerClass::Unramified);
}

TEST_CASE("tame symbol over Q_7, ell = 3") {
  auto F = qp(7, -1, 3);
  // both units -> 0
  CHECK(tame_symbol(F->from_int(2), F->from_int(3), 3).zero());
  // (7, 7): reduces to the class of -1, a cube in F_7
  CHECK(tame_symbol(F->from_int(7), F->from_int(7), 3).zero());
  // (pi, non-cube unit) is nonzero
  CHECK(!tame_symbol(F->from_int(7), F->from_int(3), 3).zero());
  // matches the constructed form up to one global scalar on the basis grid
  auto form = build_symbol_form(F, 3);
  int n = (int)form.mat.size();
  long lambda = -1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      long tv = tame_symbol(form.basis->gens()[i].rep, form.basis->gens()[j].rep, 3).v;
      long fv = form.mat[i][j];
      if (fv == 0) {
        CHECK(tv == 0);
      } else {
        long r = fp::norm(tv * fp::inv_mod(fv, 3), 3);
        if (lambda < 0) lambda = r;
        CHECK(r == lambda);
      }
    }
  CHECK(lambda >= 1);
  // wild prime refused
  CHECK_THROWS_AS(tame_symbol(F->from_int(7), F->from_int(3), 7), Error);
}
