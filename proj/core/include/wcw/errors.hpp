#pragma once

#include <stdexcept>
#include <string>

namespace wcw {

// Every recoverable failure in the library is reported through Error with a
// stable code, so callers (CLI, drivers, tests) can dispatch without string
// matching.
enum class Errc {
  NonPrime,
  DivisionByZero,
  FieldMismatch,
  ShapeMismatch,
  NotBasisElement,
  OutOfRange,
  NoVanishing,
  Infeasible,
  BadLambda,
  NotOneDim,
  HypothesisViolated,
  ConditionFailed,
  NotSplit,
  TooLarge,
  NotInvariant,
  ZeroQuotient,
  UnknownScenario,
  UnsupportedRegime,
  ParseError,
  Internal,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonPrime: return "NonPrime";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NotBasisElement: return "NotBasisElement";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::NoVanishing: return "NoVanishing";
    case Errc::Infeasible: return "Infeasible";
    case Errc::BadLambda: return "BadLambda";
    case Errc::NotOneDim: return "NotOneDim";
    case Errc::HypothesisViolated: return "HypothesisViolated";
    case Errc::ConditionFailed: return "ConditionFailed";
    case Errc::NotSplit: return "NotSplit";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotInvariant: return "NotInvariant";
    case Errc::ZeroQuotient: return "ZeroQuotient";
    case Errc::UnknownScenario: return "UnknownScenario";
    case Errc::UnsupportedRegime: return "UnsupportedRegime";
    case Errc::ParseError: return "ParseError";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace wcw
