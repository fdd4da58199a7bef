#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rdeval {

/// Every failure the library reports, one code per distinct cause.
enum class ErrorCode {
  // curve validation
  EmptyOrSingleton,
  DuplicateRate,
  NonMonotoneQuality,
  NonPositiveRate,
  NonFiniteQuality,
  // set validation
  MissingCell,
  MixedUnits,
  DuplicateCell,
  // fitting
  DuplicateAbscissa,
  WrongKnotCount,
  TooFewKnots,
  OutOfDomain,
  // metrics / aggregation
  NoOverlap,
  RaggedPointCounts,
  GridOutsideSpan,
  EmptyInput,
  MixedMetricKinds,
  // ingest
  MalformedHeader,
  NonNumericField,
  DuplicateTriple,
  UnknownUnit,
  // cli / misc
  UnknownIdentifier,
  InvalidParameter,
  IoError,
};

std::string_view to_string(ErrorCode code);

class RdError : public std::runtime_error {
public:
  RdError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace rdeval
