#include "doctest.h"
#include "test_util.hpp"

#include "localsym/kummer.hpp"

using namespace localsym;
using lt::q3z3;
using lt::qp;

TEST_CASE("kummer classification basics") {
  auto F = q3z3();
  std::mt19937_64 rng(41);
  FieldElement w = lt::random_unit(F, rng);
  auto triv = kummer_extension(F, F->pow(w, 3L), 3);
  CHECK(triv.cls == KummerClass::Trivial);
  CHECK(triv.K == F);

  auto rampi = kummer_extension(F, F->uniformizer(), 3);
  CHECK(rampi.cls == KummerClass::Ramified);
  CHECK(rampi.K->degree() == 3 * F->degree());
  CHECK(rampi.K->ram_index() == 3 * F->ram_index());
  CHECK(rampi.K->eq(rampi.K->pow(rampi.root, 3L), rampi.K->embed(rampi.u)));
}

TEST_CASE("kummer refuses without mu_ell") {
  auto Q5 = qp(5, -1, 3);
  CHECK_THROWS_AS(kummer_extension(Q5, Q5->from_int(2), 3), Error);
}

TEST_CASE("unit-class extensions: unramified and wildly ramified") {
  auto F = q3z3();
  auto B = fstar_basis(F, 3);
  int unram_seen = 0, ram_seen = 0;
  for (const auto& g : B->gens()) {
    if (g.prov == GenProvenance::Uniformizer) continue;
    auto ext = kummer_extension(F, g.rep, 3, B);
    REQUIRE(ext.cls != KummerClass::Trivial);
    CHECK(ext.K->degree() == 3 * F->degree());
    CHECK(ext.K->eq(ext.K->pow(ext.root, 3L), ext.K->embed(g.rep)));
    if (ext.cls == KummerClass::Unramified) {
      ++unram_seen;
      CHECK(ext.K->res_degree() == 3 * F->res_degree());
    } else {
      ++ram_seen;
      CHECK(ext.K->ram_index() == 3 * F->ram_index());
    }
  }
  // O_F*/3 contains both ramified lines and (as a combination) the unramified one
  CHECK(ram_seen >= 1);
  (void)unram_seen;
}

TEST_CASE("some unit class over Q_3(zeta_3) is unramified, and its norms contain all units") {
  auto F = q3z3();
  auto B = fstar_basis(F, 3);
  int n = B->dim();
  // scan unit classes for the unramified line
  bool found = false;
  for (long code = 1; code < 27 && !found; ++code) {
    UnitClassVector v{B, std::vector<long>(n, 0)};
    long t = code;
    for (int i = 0; i < n - 1; ++i) { v.c[i] = t % 3; t /= 3; }
    FieldElement u = B->rep_of(v);
    auto ext = kummer_extension(F, u, 3, B);
    if (ext.cls != KummerClass::Unramified) continue;
    found = true;
    auto ns = norm_subgroup(ext);
    CHECK(ns.codim() == 1);
    for (int i = 0; i < n - 1; ++i) {
      UnitClassVector e{B, std::vector<long>(n, 0)};
      e.c[i] = 1;
      CHECK(ns.contains(e));
    }
    // the quotient is generated by the uniformizer class
    UnitClassVector piv{B, std::vector<long>(n, 0)};
    piv.c[n - 1] = 1;
    CHECK(!ns.contains(piv));
  }
  CHECK(found);
}

TEST_CASE("norm subgroup: trivial extension is everything") {
  auto F = q3z3();
  std::mt19937_64 rng(5);
  FieldElement w = lt::random_unit(F, rng);
  auto ext = kummer_extension(F, F->pow(w, 3L), 3);
  auto ns = norm_subgroup(ext);
  CHECK(ns.codim() == 0);
}

TEST_CASE("N(root) = u (odd ell sign convention)") {
  auto F = q3z3();
  auto B = fstar_basis(F, 3);
  std::mt19937_64 rng(19);
  for (int t = 0; t < 4; ++t) {
    FieldElement u = t == 0 ? F->uniformizer() : lt::random_unit(F, rng);
    auto ext = kummer_extension(F, u, 3, B);
    if (ext.cls == KummerClass::Trivial) continue;
    FieldElement n = norm_to_subfield(ext.root);
    CHECK(F->eq(n, ext.u));
  }
}

TEST_CASE("index-ell property on random nontrivial extensions") {
  auto F = q3z3();
  auto B = fstar_basis(F, 3);
  std::mt19937_64 rng(59);
  int done = 0;
  while (done < 6) {
    FieldElement u = F->shift(lt::random_unit(F, rng), (long)(rng() % 3));
    auto ext = kummer_extension(F, u, 3, B);
    if (ext.cls == KummerClass::Trivial) continue;
    auto ns = norm_subgroup(ext);
    CHECK(ns.codim() == 1);
    // u lies in its own norm subgroup
    CHECK(ns.contains(B->decompose(u)));
    ++done;
  }
}

TEST_CASE("disjointness") {
  auto F = q3z3();
  auto B = fstar_basis(F, 3);
  std::mt19937_64 rng(61);
  FieldElement u = B->gens()[0].rep;
  FieldElement v = B->gens()[1].rep;
  CHECK(disjointness(F, u, v, 3));
  CHECK(!disjointness(F, u, F->mul(u, u), 3));
  // dependent pair u, u^a w^ell
  FieldElement w = lt::random_unit(F, rng);
  FieldElement dep = F->mul(F->pow(u, 2L), F->pow(w, 3L));
  CHECK(!disjointness(F, u, dep, 3));
}
