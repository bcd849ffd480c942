#ifndef PERJET_ERRORS_HPP
#define PERJET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace perjet {

enum class Errc {
  ShapeMismatch,
  NotAUnit,
  PoleAtBasepoint,
  CharTooSmall,
  NonzeroConstantTerm,
  OrderMismatch,
  SingularMatrix,
  SingularFrame,
  NotFlat,
  DimensionMismatch,
  DegenerateForm,
  NotOpposed,
  NotGraded,
  PreconditionViolated,
  Char2,
  BasepointMismatch,
  NonIntegralCoefficient,
  DenominatorVanishesModP,
  PrecisionTooLow,
  ParseError,
  DivisionByZero,
  NotClosedUnderBracket,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NotAUnit: return "NotAUnit";
    case Errc::PoleAtBasepoint: return "PoleAtBasepoint";
    case Errc::CharTooSmall: return "CharTooSmall";
    case Errc::NonzeroConstantTerm: return "NonzeroConstantTerm";
    case Errc::OrderMismatch: return "OrderMismatch";
    case Errc::SingularMatrix: return "SingularMatrix";
    case Errc::SingularFrame: return "SingularFrame";
    case Errc::NotFlat: return "NotFlat";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DegenerateForm: return "DegenerateForm";
    case Errc::NotOpposed: return "NotOpposed";
    case Errc::NotGraded: return "NotGraded";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::Char2: return "Char2";
    case Errc::BasepointMismatch: return "BasepointMismatch";
    case Errc::NonIntegralCoefficient: return "NonIntegralCoefficient";
    case Errc::DenominatorVanishesModP: return "DenominatorVanishesModP";
    case Errc::PrecisionTooLow: return "PrecisionTooLow";
    case Errc::ParseError: return "ParseError";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::NotClosedUnderBracket: return "NotClosedUnderBracket";
  }
  return "UnknownError";
}

/// Exception type used throughout; carries a machine-checkable code.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace perjet

#endif
