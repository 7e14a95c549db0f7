#include "hcm/errors.hpp"

namespace hcm {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NonIntegralBlock: return "NonIntegralBlock";
    case ErrorKind::RankAmbiguous: return "RankAmbiguous";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ZeroOperator: return "ZeroOperator";
    case ErrorKind::NotRegular: return "NotRegular";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::NotRepresentable: return "NotRepresentable";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::NotDirect: return "NotDirect";
    case ErrorKind::HeadNotInvertible: return "HeadNotInvertible";
    case ErrorKind::KernelNotNested: return "KernelNotNested";
    case ErrorKind::UndecidedInput: return "UndecidedInput";
    case ErrorKind::DegenerateSymbol: return "DegenerateSymbol";
    case ErrorKind::Undecidable: return "Undecidable";
    case ErrorKind::PathHitsBoundary: return "PathHitsBoundary";
    case ErrorKind::NotIsolated: return "NotIsolated";
    case ErrorKind::HypothesisUndecided: return "HypothesisUndecided";
    case ErrorKind::UnknownSuite: return "UnknownSuite";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
  }
  return "Unknown";
}

}  // namespace hcm
