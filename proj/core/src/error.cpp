#include "spectrode/error.hpp"

namespace spectrode {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveEigenvalue: return "NonPositiveEigenvalue";
    case ErrorCode::WeightsDoNotSumToOne: return "WeightsDoNotSumToOne";
    case ErrorCode::DuplicateAtom: return "DuplicateAtom";
    case ErrorCode::DegenerateUniform: return "DegenerateUniform";
    case ErrorCode::InvalidComb: return "InvalidComb";
    case ErrorCode::GammaEqualsOne: return "GammaEqualsOne";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::ZeroV: return "ZeroV";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::CriticalPoint: return "CriticalPoint";
    case ErrorCode::FpaStartFailure: return "FpaStartFailure";
    case ErrorCode::NonFiniteH: return "NonFiniteH";
    case ErrorCode::StartFailure: return "StartFailure";
    case ErrorCode::ContourTouchesSupport: return "ContourTouchesSupport";
    case ErrorCode::ImaginaryResidue: return "ImaginaryResidue";
    case ErrorCode::DegenerateCubic: return "DegenerateCubic";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::FileError: return "FileError";
    case ErrorCode::InternalConsistency: return "InternalConsistency";
  }
  return "UnknownError";
}

}  // namespace spectrode
