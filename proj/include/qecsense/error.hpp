#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qecsense {

enum class ErrorKind {
  // linalg
  NotSquare,
  NotHermitian,
  Singular,
  DimensionMismatch,
  // lp
  TooLarge,
  // model
  NotCommuting,
  HnlsViolated,
  // dephasing
  NotPSD,
  NotUnitDiagonal,
  NTooSmall,
  GammaOutOfRange,
  AllModesOrthogonal,
  DegenerateCode,
  NotDephasingForm,
  // bosonic
  TruncationTooSmall,
  NotDivisible,
  Infeasible,
  // simulator
  StepTooLarge,
  LeakageTooLarge,
  // io
  SchemaError,
  InvariantError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure surfaced by the library carries one of the kinds above so the
// CLI can report the module-level error name and choose an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qecsense
