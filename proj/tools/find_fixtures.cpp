// Searches small Weierstrass coefficients for the fixture curves used by the
// test and acceptance suites, and prints them as field literals.

#include <iostream>

#include "localsym/coords.hpp"
#include "localsym/tate.hpp"

using namespace localsym;

static void report(const char* name, const CurveModel& E) {
  const FieldPtr& F = E.F;
  std::cout << name << ":\n";
  std::cout << "  a1 = \"" << F->print(E.a1) << "\"\n";
  std::cout << "  a2 = \"" << F->print(E.a2) << "\"\n";
  std::cout << "  a3 = \"" << F->print(E.a3) << "\"\n";
  std::cout << "  a4 = \"" << F->print(E.a4) << "\"\n";
  std::cout << "  a6 = \"" << F->print(E.a6) << "\"\n";
}

int main() {
  // ---- full 3-torsion over Q_3(zeta_3), good ordinary --------------------
  {
    auto F = make_field(3, {StepSpec{StepKind::Cyclotomic, 0, {}}});
    FieldElement z = F->zeta(3);
    std::vector<FieldElement> cands;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 2; ++k) {
          FieldElement c = F->add(F->from_int(i), F->mul(F->from_int(j), z));
          if (k) c = F->add(c, F->uniformizer());
          cands.push_back(c);
        }
    bool done = false;
    for (const auto& a1 : cands) {
      if (done) break;
      auto v1 = F->valuation(a1);
      if (!v1 || *v1 != 0) continue;
      for (const auto& a3 : cands) {
        auto v3 = F->valuation(a3);
        if (!v3 || *v3 != 0) continue;
        try {
          CurveModel E = make_curve(F, a1, F->zero(), a3, F->zero(), F->zero());
          ReductionData rd = reduction_analysis(E);
          if (rd.type != RedType::Good || !rd.ordinary) continue;
          Int am = rd.a_q % 3;
          if (am < 0) am += 3;
          if (am != 1) continue;  // nu = 1
          if (torsion_count(E, 3) != 9) continue;
          report("prop_e_q3z3 (E[3] in F, good ordinary)", E);
          std::cout << "  a_q = " << rd.a_q << " count = " << rd.count << "\n";
          done = true;
          break;
        } catch (const Error& e) {
          continue;
        }
      }
    }
    if (!done) std::cout << "prop_e_q3z3: NOT FOUND\n";
  }

  // ---- wild fixture over Q_3(zeta_3), nu = 1 ------------------------------
  {
    auto F = make_field(3, {StepSpec{StepKind::Cyclotomic, 0, {}}});
    FieldElement z = F->zeta(3);
    std::vector<FieldElement> small;
    for (int i = -1; i <= 1; ++i)
      for (int j = -1; j <= 1; ++j)
        small.push_back(F->add(F->from_int(i), F->mul(F->from_int(j), z)));
    bool done = false;
    for (const auto& a1 : small) {
      if (done) break;
      for (const auto& a3 : small) {
        if (done) break;
        for (const auto& a4 : small) {
          if (done) break;
          for (const auto& a6 : small) {
            try {
              CurveModel E = make_curve(F, a1, F->zero(), a3, a4, a6);
              ReductionData rd = reduction_analysis(E);
              if (rd.type != RedType::Good || !rd.ordinary) continue;
              Int am = rd.a_q % 3;
              if (am < 0) am += 3;
              if (am != 1) continue;
              ModuleDescriptor d = descriptor_from_curve(E, 3);
              if (!d.is_wild) continue;
              if (!d.x_generator) continue;
              report("wild_q3z3 (wild, nu = 1)", E);
              std::cout << "  x_generator coords =";
              for (long c : d.x_generator->c) std::cout << " " << c;
              std::cout << "\n";
              done = true;
              break;
            } catch (const Error& e) {
              continue;
            }
          }
        }
      }
    }
    if (!done) std::cout << "wild_q3z3: NOT FOUND\n";
  }

  // ---- Q_3 curve with wild (ramified) cubic division field ---------------
  {
    auto F = make_field(3, {});
    bool done = false;
    for (int a4 = -2; a4 <= 2 && !done; ++a4)
      for (int a6 = -2; a6 <= 2 && !done; ++a6)
        for (int a1 = 0; a1 <= 1 && !done; ++a1) {
          try {
            CurveModel E = make_curve(F, F->from_int(a1), F->zero(), F->zero(),
                                      F->from_int(a4), F->from_int(a6));
            ReductionData rd = reduction_analysis(E);
            if (rd.type != RedType::Good || !rd.ordinary) continue;
            ModuleDescriptor d = descriptor_from_curve(E, 3);
            if (!d.is_wild) continue;
            report("wild_q3 (over Q_3)", E);
            done = true;
          } catch (const Error&) {
            continue;
          }
        }
    if (!done) std::cout << "wild_q3: NOT FOUND\n";
  }

  // ---- p = 5 curve over Q_5 with a_5 = 1 (nu = 1, gm fixture) ------------
  {
    auto F = make_field(5, {});
    bool done = false;
    for (int a4 = -4; a4 <= 4 && !done; ++a4)
      for (int a6 = -4; a6 <= 4 && !done; ++a6) {
        try {
          CurveModel E =
              make_curve(F, F->zero(), F->zero(), F->zero(), F->from_int(a4), F->from_int(a6));
          ReductionData rd = reduction_analysis(E);
          if (rd.type != RedType::Good || !rd.ordinary) continue;
          Int am = rd.a_q % 5;
          if (am < 0) am += 5;
          if (am != 1) continue;
          report("gm_q5 (a_5 = 1 mod 5)", E);
          std::cout << "  a_5 = " << rd.a_q << "\n";
          done = true;
        } catch (const Error&) {
          continue;
        }
      }
    if (!done) std::cout << "gm_q5: NOT FOUND\n";
  }

  // ---- Tate fixture over Q_7, ell = 3: q = 7^3 ---------------------------
  {
    auto F = make_field(7, {}, -1, 3);
    FieldElement q = F->from_int(343);
    CurveModel E = tate_curve_from_q(F, q);
    report("tate_q7 (q = 7^3)", E);
    TateCurve tc = tate_parameter(E);
    std::cout << "  recovered v(q) = " << F->val_exact(tc.q_param)
              << ", q matches: " << F->eq(tc.q_param, q) << "\n";
    PointOnE P = tate_point(tc, F->from_int(21));
    PointOnE Q = tate_point(tc, F->from_int(3));
    std::cout << "  P = (" << F->print(P.x) << ", " << F->print(P.y) << ")\n";
    SymbolValue v = tate_symbol(P, Q, tc, 3);
    std::cout << "  tate_symbol(phi(21), phi(3)) = " << v.v << "\n";
  }

  return 0;
}
