#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace equimetric {

enum class ErrorKind {
  // group construction
  NotSquare,
  IndexOutOfRange,
  NonAssociative,
  NoIdentity,
  NoInverse,
  GeneratorsDontGenerate,
  // spaces and actions
  NotAMetric,
  BadAdjacency,
  NotInjective,
  IdentityNotIdentity,
  NotHomomorphism,
  NotGraphAutomorphism,
  StabilizerNotSubgroup,
  // quotient
  NotIsometricAction,
  DisconnectedQuotient,
  // slices
  EmptyResult,
  // orbital metrics
  NotLeftInvariant,
  GeneratorsNotInverseClosed,
  NotASubgroup,
  IncompatibleGroupMetric,
  UncoveredOrbit,
  // lift
  NoOrbitalMetric,
  // scenarios and configuration
  InvalidParams,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Structured validation failure. The kind identifies the violated condition,
/// the message carries the witness in human-readable form.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace equimetric
