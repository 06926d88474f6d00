#pragma once

#include <stdexcept>
#include <string>

namespace localsym {

// Error families share an exit-code bucket in the CLI; kinds are stable names
// used in JSON reports.
enum class ErrKind {
  // construction / input
  EvenPrime,
  NotEisenstein,
  ReducibleResiduePolynomial,
  ConfigParseError,
  // arithmetic
  PrecisionExhausted,
  MixedFields,
  OutsideConvergenceDomain,
  NotAUnit,
  // kummer / hilbert
  MuNotInField,
  InconsistentScalars,
  DegenerateForm,
  WildPrime,
  // descriptors
  WrongReductionType,
  InconsistentDescriptor,
  SupersingularReduction,
  BadReduction,
  // elliptic
  ResidueFieldTooLarge,
  NonMinimalModel,
  NoIntegralScaling,
  SeriesOrderTooLow,
  HypothesisViolated,
  PointIsDivisible,
  ClassifierSaysZero,
  SearchBudgetExceeded,
  // tate
  NotMultiplicative,
  NonSplit,
  // bugs / broken invariants
  Internal,
};

const char* err_name(ErrKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrKind kind, const std::string& msg)
      : std::runtime_error(std::string(err_name(kind)) + ": " + msg), kind_(kind) {}
  ErrKind kind() const { return kind_; }

 private:
  ErrKind kind_;
};

[[noreturn]] inline void fail(ErrKind k, const std::string& msg) { throw Error(k, msg); }

}  // namespace localsym
