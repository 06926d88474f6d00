#include "doctest.h"
#include "test_util.hpp"

using namespace localsym;
using lt::q3z3;
using lt::qp;

TEST_CASE("field construction: cyclotomic, base, mixed tower") {
  auto F = q3z3();
  CHECK(F->degree() == 2);
  CHECK(F->ram_index() == 2);
  CHECK(F->res_card() == 3);

  auto Q5 = qp(5);
  CHECK(Q5->degree() == 1);
  CHECK(Q5->ram_index() == 1);
  CHECK(Q5->res_card() == 5);

  // Q_3 -> unramified (x^2 + 1) -> eisenstein (x^2 - 3)
  auto M = make_field(3, {StepSpec{StepKind::Unramified, 2, {"1", "0", "1"}},
                          StepSpec{StepKind::Eisenstein, 2, {"-3", "0", "1"}}});
  CHECK(M->degree() == 4);
  CHECK(M->ram_index() == 2);
  CHECK(M->res_card() == 9);
}

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(make_field(2, {}), Error);
  CHECK_THROWS_AS(make_field(9, {}), Error);
  // x^2 - 1 is not irreducible mod 3
  CHECK_THROWS_AS(make_field(3, {StepSpec{StepKind::Unramified, 2, {"-1", "0", "1"}}}), Error);
  // x^2 - 9 is not Eisenstein
  CHECK_THROWS_AS(make_field(3, {StepSpec{StepKind::Eisenstein, 2, {"-9", "0", "1"}}}), Error);
}

TEST_CASE("zeta_p in the cyclotomic tower") {
  auto F = q3z3();
  FieldElement z = F->zeta(3);
  CHECK(F->eq(F->pow(z, 3L), F->one()));
  CHECK(!F->eq(z, F->one()));
}

TEST_CASE("basic arithmetic and valuation") {
  auto Q3 = qp(3);
  CHECK(Q3->val_exact(Q3->from_int(9)) == 2);
  // inv(2) mod 27 = 14
  FieldElement i2 = Q3->inv(Q3->from_int(2));
  CHECK(Q3->eq(Q3->mul(i2, Q3->from_int(2)), Q3->one()));
  Int rep = i2.coords()[0] % 27;
  CHECK(rep == 14);
  // (1+3)(1-3) = -8
  FieldElement prod = Q3->mul(Q3->from_int(4), Q3->from_int(-2));
  CHECK(Q3->eq(prod, Q3->from_int(-8)));
}

TEST_CASE("valuation laws on random pairs") {
  auto F = q3z3();
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    FieldElement x = lt::random_elt(F, rng);
    FieldElement y = lt::random_elt(F, rng);
    auto vx = F->valuation(x), vy = F->valuation(y);
    if (!vx || !vy) continue;
    CHECK(F->val_exact(F->mul(x, y)) == *vx + *vy);
    auto vs = F->valuation(F->add(x, y));
    if (vs) CHECK(*vs >= std::min(*vx, *vy));
  }
}

TEST_CASE("division and negative valuations") {
  auto F = q3z3();
  FieldElement pi = F->uniformizer();
  FieldElement x = F->div(F->one(), F->pow(pi, 5L));
  CHECK(F->val_exact(x) == -5);
  CHECK(F->eq(F->mul(x, F->pow(pi, 5L)), F->one()));
}

TEST_CASE("log and exp") {
  auto Q3 = qp(3);
  CHECK(Q3->padic_log(Q3->one()).is_zero());
  // homomorphism: log((1+p)^p) = p log(1+p)
  FieldElement u = Q3->from_int(4);
  FieldElement lhs = Q3->padic_log(Q3->pow(u, 3L));
  FieldElement rhs = Q3->padic_log(u) * 3L;
  CHECK(Q3->eq(lhs, rhs));
  // round trip inside the domain: exp(log(1+9)) = 1+9
  FieldElement v = Q3->from_int(10);
  CHECK(Q3->eq(Q3->padic_exp(Q3->padic_log(v)), v));
  // outside the strict domain exp must refuse: over Q_3(zeta_3), e/(p-1) = 1
  auto F = q3z3();
  CHECK_THROWS_AS(F->padic_exp(F->uniformizer()), Error);
  CHECK_THROWS_AS(F->padic_log(F->from_int(2)), Error);
}

TEST_CASE("exp/log round trips on random elements") {
  auto F = q3z3();
  std::mt19937_64 rng(11);
  long e = F->ram_index(), p = F->p();
  for (int t = 0; t < 40; ++t) {
    // v(x) > e/(p-1) = 1
    FieldElement x = F->shift(lt::random_unit(F, rng), 2);
    FieldElement u = F->padic_exp(x);
    CHECK(F->eq(F->padic_log(u), x));
    FieldElement w = F->add(F->one(), F->shift(lt::random_unit(F, rng), 2));
    CHECK(F->eq(F->padic_exp(F->padic_log(w)), w));
    // log homomorphism
    FieldElement w2 = F->add(F->one(), F->shift(lt::random_unit(F, rng), 1));
    FieldElement w3 = F->add(F->one(), F->shift(lt::random_unit(F, rng), 1));
    CHECK(F->eq(F->padic_log(F->mul(w2, w3)),
                F->add(F->padic_log(w2), F->padic_log(w3))));
  }
  (void)e;
  (void)p;
}

TEST_CASE("is_pth_power basics") {
  auto Q3 = qp(3);
  auto r1 = Q3->is_pth_power(Q3->one(), 3);
  REQUIRE(r1.has_value());
  CHECK(Q3->eq(*r1, Q3->one()));

  FieldElement u = Q3->pow(Q3->from_int(4), 3L);
  auto r2 = Q3->is_pth_power(u, 3);
  REQUIRE(r2.has_value());
  CHECK(Q3->eq(*r2, Q3->from_int(4)));  // unique root: mu_3 not in Q_3
}

TEST_CASE("is_pth_power of 1+3 in Q_3(zeta_3) against the residue-exhaustion oracle") {
  auto F = q3z3();
  FieldElement u = F->from_int(4);
  // oracle: u is a cube iff w^3 = u mod pi^(threshold+1) is solvable,
  // threshold = ell e/(ell-1) = 3
  long thr = 3;
  bool oracle = false;
  for (int d0 = 0; d0 < 3 && !oracle; ++d0)
    for (int d1 = 0; d1 < 3 && !oracle; ++d1)
      for (int d2 = 0; d2 < 3 && !oracle; ++d2)
        for (int d3 = 0; d3 < 3 && !oracle; ++d3) {
          FieldElement w = F->from_int(d0);
          w = F->add(w, F->shift(F->from_int(d1), 1));
          w = F->add(w, F->shift(F->from_int(d2), 2));
          w = F->add(w, F->shift(F->from_int(d3), 3));
          FieldElement diff = F->sub(F->pow(w, 3L), u);
          auto v = F->valuation(diff);
          if (!v || *v > thr) oracle = true;
        }
  auto got = F->is_pth_power(u, 3);
  CHECK(oracle == got.has_value());
  CHECK(!got.has_value());
}

TEST_CASE("is_pth_power agrees with brute force over Q_3 mod 3^6") {
  // all units mod 3^6: u is a cube iff u = w^3 mod 3^6 solvable
  auto Q3 = qp(3);
  long mod = 729;
  std::vector<bool> cube(mod, false);
  for (long w = 1; w < mod; ++w) {
    if (w % 3 == 0) continue;
    cube[(w * w % mod) * w % mod] = true;
  }
  int checked = 0;
  for (long u = 1; u < mod && checked < 120; ++u) {
    if (u % 3 == 0) continue;
    ++checked;
    auto got = Q3->is_pth_power(Q3->from_int(u), 3);
    CHECK(got.has_value() == cube[u]);
  }
}

TEST_CASE("teichmuller and residue arithmetic") {
  auto M = make_field(3, {StepSpec{StepKind::Unramified, 2, {"1", "0", "1"}}});
  CHECK(M->res_card() == 9);
  RElt g = M->res_generator();
  FieldElement w = M->teichmuller(g);
  CHECK(M->eq(M->pow(w, 8L), M->one()));
  CHECK(!M->eq(M->pow(w, 4L), M->one()));
}

TEST_CASE("mu_ell detection in quadratic ramified towers") {
  // Q_3(sqrt(3)): no zeta_3.  Q_3(sqrt(-3)): contains zeta_3.
  auto A = make_field(3, {StepSpec{StepKind::Eisenstein, 2, {"-3", "0", "1"}}});
  auto B = make_field(3, {StepSpec{StepKind::Eisenstein, 2, {"3", "0", "1"}}});
  CHECK(!A->mu_ell_in_F(3));
  CHECK(B->mu_ell_in_F(3));
  FieldElement z = B->zeta(3);
  CHECK(B->eq(B->pow(z, 3L), B->one()));
  CHECK(!B->eq(z, B->one()));
  // tame side
  CHECK(qp(7)->mu_ell_in_F(3));
  CHECK(!qp(5)->mu_ell_in_F(3));
}

TEST_CASE("norm to subfield") {
  auto F = q3z3();
  // N(zeta_3) = 1 (constant term of x^2+x+1)
  FieldElement z = F->zeta(3);
  FieldElement n = norm_to_subfield(z);
  auto Q3 = n.field();
  CHECK(Q3->eq(n, Q3->one()));
  // norm of a base element is its [K:F]-th power
  FieldElement a = F->embed(Q3->from_int(5));
  CHECK(Q3->eq(norm_to_subfield(a), Q3->from_int(25)));
  // norms of units are units, and the norm is multiplicative
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    FieldElement u = lt::random_unit(F, rng);
    FieldElement v = lt::random_unit(F, rng);
    CHECK(Q3->val_exact(norm_to_subfield(u)) == 0);
    CHECK(Q3->eq(norm_to_subfield(F->mul(u, v)),
                 Q3->mul(norm_to_subfield(u), norm_to_subfield(v))));
  }
}

TEST_CASE("literal print/parse round trip") {
  auto F = q3z3();
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    FieldElement x = lt::random_elt(F, rng);
    if (t % 3 == 0) x = F->shift(x, -2);  // exercise negative valuations
    std::string s = F->print(x);
    FieldElement y = F->parse(s);
    CHECK(F->eq(x, y));
  }
  // grammar forms
  auto M = make_field(3, {StepSpec{StepKind::Unramified, 2, {"1", "0", "1"}},
                          StepSpec{StepKind::Eisenstein, 2, {"-3", "0", "1"}}});
  FieldElement x = M->parse("2+1*z^1*pi^3+2*pi^-1");
  CHECK(M->eq(x, M->parse(M->print(x))));
  CHECK_THROWS_AS(M->parse("2*q^1"), Error);
}

TEST_CASE("embedding and projection") {
  auto F = q3z3();
  auto Q3 = F->parent();
  FieldElement a = Q3->from_int(7);
  FieldElement b = F->embed(a);
  CHECK(Q3->eq(F->project_to_parent(b), a));
  CHECK_THROWS_AS(F->project_to_parent(F->zeta(3)), Error);
}
