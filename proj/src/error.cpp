#include "qecsense/error.hpp"

namespace qecsense {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::HnlsViolated: return "HnlsViolated";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::NotUnitDiagonal: return "NotUnitDiagonal";
    case ErrorKind::NTooSmall: return "NTooSmall";
    case ErrorKind::GammaOutOfRange: return "GammaOutOfRange";
    case ErrorKind::AllModesOrthogonal: return "AllModesOrthogonal";
    case ErrorKind::DegenerateCode: return "DegenerateCode";
    case ErrorKind::NotDephasingForm: return "NotDephasingForm";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::LeakageTooLarge: return "LeakageTooLarge";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::InvariantError: return "InvariantError";
  }
  return "Unknown";
}

}  // namespace qecsense
