#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spectrode {

enum class ErrorCode {
  NonPositiveEigenvalue,
  WeightsDoNotSumToOne,
  DuplicateAtom,
  DegenerateUniform,
  InvalidComb,
  GammaEqualsOne,
  InvalidArgument,
  PoleHit,
  ZeroV,
  NotConverged,
  NoSignChange,
  CriticalPoint,
  FpaStartFailure,
  NonFiniteH,
  StartFailure,
  ContourTouchesSupport,
  ImaginaryResidue,
  DegenerateCubic,
  DimensionTooLarge,
  FileError,
  InternalConsistency,
};

std::string_view error_code_name(ErrorCode code);

/// Library-wide exception. `where` carries an abscissa for location-bearing
/// failures (e.g. CriticalPoint mid-interval) and is NaN otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        double where = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        where_(where) {}

  ErrorCode code() const noexcept { return code_; }
  double where() const noexcept { return where_; }

 private:
  ErrorCode code_;
  double where_;
};

}  // namespace spectrode
