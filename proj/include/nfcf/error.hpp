#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nfcf {

enum class Errc {
  InvalidInput,
  NotIrreducible,
  DiscMismatch,
  DivideByZero,
  IndexDivisor,
  ZeroValuation,
  NotIntegralAtI,
  NotPrincipal,
  SearchExhausted,
  ZeroElement,
  DependentBasis,
  CertificationFailed,
  EpsilonNotLessThanOne,
  EvenPrime,
  NotAdmissible,
  FloorFailure,
  ZeroDenominator,
  MissingClassData,
  NotCoprime,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above, so
/// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::NotIrreducible: return "NotIrreducible";
    case Errc::DiscMismatch: return "DiscMismatch";
    case Errc::DivideByZero: return "DivideByZero";
    case Errc::IndexDivisor: return "IndexDivisor";
    case Errc::ZeroValuation: return "ZeroValuation";
    case Errc::NotIntegralAtI: return "NotIntegralAtI";
    case Errc::NotPrincipal: return "NotPrincipal";
    case Errc::SearchExhausted: return "SearchExhausted";
    case Errc::ZeroElement: return "ZeroElement";
    case Errc::DependentBasis: return "DependentBasis";
    case Errc::CertificationFailed: return "CertificationFailed";
    case Errc::EpsilonNotLessThanOne: return "EpsilonNotLessThanOne";
    case Errc::EvenPrime: return "EvenPrime";
    case Errc::NotAdmissible: return "NotAdmissible";
    case Errc::FloorFailure: return "FloorFailure";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::MissingClassData: return "MissingClassData";
    case Errc::NotCoprime: return "NotCoprime";
  }
  return "Unknown";
}

}  // namespace nfcf
