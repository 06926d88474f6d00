#pragma once

#include <random>

#include "localsym/padic.hpp"

namespace lt {

using namespace localsym;

inline FieldPtr q3z3(int prec = -1) {
  return make_field(3, {StepSpec{StepKind::Cyclotomic, 0, {}}}, prec);
}

inline FieldPtr q5z5(int prec = -1) {
  return make_field(5, {StepSpec{StepKind::Cyclotomic, 0, {}}}, prec);
}

inline FieldPtr qp(long p, int prec = -1, long ell = 0) { return make_field(p, {}, prec, ell); }

/// random integral element
inline FieldElement random_elt(const FieldPtr& F, std::mt19937_64& rng) {
  std::vector<Int> c(F->degree());
  std::uniform_int_distribution<long> d(0, 1 << 20);
  for (auto& x : c) x = d(rng);
  return F->from_coords(std::move(c));
}

/// random unit (nonzero residue)
inline FieldElement random_unit(const FieldPtr& F, std::mt19937_64& rng) {
  for (;;) {
    FieldElement x = random_elt(F, rng);
    auto v = F->valuation(x);
    if (v && *v == 0) return x;
  }
}

/// random principal unit 1 + pi * (integral)
inline FieldElement random_principal_unit(const FieldPtr& F, std::mt19937_64& rng) {
  return F->add(F->one(), F->shift(random_elt(F, rng), 1));
}

}  // namespace lt
