#include "doctest.h"
#include "test_util.hpp"

#include "localsym/coords.hpp"
#include "localsym/galmod.hpp"
#include "localsym/tate.hpp"

using namespace localsym;
using lt::qp;

namespace {

ModuleDescriptor mk(long ell, int nu_order, long nu_frob, bool ss, bool wild) {
  ModuleDescriptor d;
  d.ell = ell;
  d.reduction_type = ReductionType::GoodOrdinary;
  d.nu_order = nu_order;
  d.nu_frob = nu_frob;
  d.is_semisimple = ss;
  d.is_wild = wild;
  return d;
}

}  // namespace

TEST_CASE("classify follows the trichotomy") {
  auto wild = mk(3, 1, 1, false, true);
  auto c1 = classify(wild);
  CHECK(c1.c == ClassCase::Wild);
  CHECK(c1.ramified);

  auto ss2 = mk(3, 2, 2, true, false);
  auto c2 = classify(ss2);
  CHECK(c2.c == ClassCase::Semisimple);
  CHECK(c2.splitting_degree == 2);
  CHECK(!c2.ramified);

  auto un = mk(3, 1, 1, false, false);
  auto c3 = classify(un);
  CHECK(c3.c == ClassCase::UnramifiedNonSemisimple);
  CHECK(c3.splitting_degree == 3);
  CHECK(!c3.ramified);

  // inconsistent descriptors are rejected
  CHECK_THROWS_AS(classify(mk(3, 1, 1, true, true)), Error);
  CHECK_THROWS_AS(classify(mk(3, 2, 1, true, false)), Error);
}

TEST_CASE("im_sp truth table over p = 7 descriptors") {
  auto Fmu = make_field(7, {StepSpec{StepKind::Cyclotomic, 0, {}}});
  auto Fno = qp(7);
  CHECK(Fmu->mu_ell_in_F(7));
  CHECK(!Fno->mu_ell_in_F(7));
  struct Row {
    ModuleDescriptor d;
    int with_mu, without_mu;
  };
  std::vector<Row> grid = {
      {mk(7, 1, 1, false, true), 0, 0},   // wild
      {mk(7, 1, 1, true, false), 1, 0},   // semisimple, nu = 1
      {mk(7, 2, 6, true, false), 1, 0},   // semisimple, nu quadratic
      {mk(7, 3, 2, true, false), 0, 0},   // semisimple, nu of order 3
      {mk(7, 1, 1, false, false), 1, 0},  // unramified non-semisimple
  };
  for (auto& row : grid) {
    CHECK(im_sp_dimension(row.d, Fmu) == row.with_mu);
    CHECK(im_sp_dimension(row.d, Fno) == row.without_mu);
    // the diagonal-character bound dominates
    CHECK(h2_c2_dimension(row.d, Fmu) >= im_sp_dimension(row.d, Fmu));
    CHECK(h2_c2_dimension(row.d, Fno) >= im_sp_dimension(row.d, Fno));
  }
  // bound is strict for order-3 nu even with mu_p
  CHECK(h2_c2_dimension(mk(7, 3, 2, true, false), Fmu) == 0);
  CHECK(h2_c2_dimension(mk(7, 1, 1, false, true), Fmu) == 1);  // wild, bound still 1
}

TEST_CASE("descriptor from the split 3-torsion fixture") {
  auto F = lt::q3z3();
  FieldElement a = F->add(F->one(), F->uniformizer());
  CurveModel E = make_curve(F, a, F->zero(), a, F->zero(), F->zero());
  ModuleDescriptor d = descriptor_from_curve(E, 3);
  CHECK(d.reduction_type == ReductionType::GoodOrdinary);
  CHECK(d.nu_order == 1);
  CHECK(d.is_semisimple);
  CHECK(!d.is_wild);
  CHECK(im_sp_dimension(d, F) == 1);
  CHECK(classify(d).c == ClassCase::Semisimple);
}

TEST_CASE("descriptor from the wild fixture over Q_3(zeta_3)") {
  auto F = lt::q3z3();
  FieldElement w = F->parse("1+2*pi^1+1*pi^2");
  CurveModel E = make_curve(F, w, F->zero(), w, w, F->uniformizer());
  ModuleDescriptor d = descriptor_from_curve(E, 3);
  CHECK(d.is_wild);
  CHECK(!d.is_semisimple);
  CHECK(d.nu_order == 1);
  CHECK(im_sp_dimension(d, F) == 0);
  REQUIRE(d.x_generator.has_value());
  CHECK(!d.x_generator->is_zero());
  // the distinguished class generates a ramified extension (the division field)
  FieldElement e = d.x_generator->basis->rep_of(*d.x_generator);
  auto ext = kummer_extension(F, e, 3);
  CHECK(ext.cls == KummerClass::Ramified);
}

TEST_CASE("descriptor from the wild curve over Q_3 and supersingular refusal") {
  auto F = qp(3);
  CurveModel E = make_curve(F, F->one(), F->zero(), F->zero(), F->from_int(-2), F->from_int(-2));
  ModuleDescriptor d = descriptor_from_curve(E, 3);
  CHECK(d.is_wild);
  CHECK(!d.x_generator.has_value());  // mu_3 not in Q_3

  auto F5 = qp(5);
  CurveModel Ess = make_curve(F5, F5->zero(), F5->zero(), F5->zero(), F5->zero(), F5->one());
  CHECK_THROWS_AS(descriptor_from_curve(Ess, 5), Error);
  try {
    descriptor_from_curve(Ess, 5);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrKind::SupersingularReduction);
  }
}

TEST_CASE("descriptor from a Tate curve") {
  auto F = qp(7, -1, 3);
  CurveModel E = tate_curve_from_q(F, F->from_int(343));
  ModuleDescriptor d = descriptor_from_curve(E, 3);
  CHECK(d.reduction_type == ReductionType::MultiplicativeSplit);
  CHECK(d.nu_order == 1);
  CHECK(d.is_semisimple);  // q = 7^3 is a cube
  CHECK(im_sp_dimension(d, F) == 1);
  // over Q_5 with ell = 3 the image dies
  auto F5 = qp(5, -1, 3);
  CurveModel E5 = tate_curve_from_q(F5, F5->from_int(5));
  ModuleDescriptor d5 = descriptor_from_curve(E5, 3);
  CHECK(im_sp_dimension(d5, F5) == 0);
}

TEST_CASE("classify is total on a randomized descriptor grid") {
  std::mt19937_64 rng(41);
  int seen[3] = {0, 0, 0};
  for (int t = 0; t < 60; ++t) {
    long ell = (t % 2) ? 3 : 7;
    long fr = 1 + (long)(rng() % (ell - 1));
    long ord = 1, x = fr;
    while (x != 1) { x = (x * fr) % ell; ++ord; }
    bool wild = rng() % 2;
    bool ss = wild ? false : (rng() % 2);
    auto d = mk(ell, (int)ord, fr, ss, wild);
    auto c = classify(d);
    ++seen[(int)c.c];
    if (wild) CHECK(c.c == ClassCase::Wild);
    if (!wild && ss) CHECK(c.c == ClassCase::Semisimple);
    if (!wild && !ss) CHECK(c.c == ClassCase::UnramifiedNonSemisimple);
  }
  CHECK(seen[0] > 0);
  CHECK(seen[1] > 0);
  CHECK(seen[2] > 0);
}
