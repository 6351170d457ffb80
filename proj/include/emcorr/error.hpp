#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace emcorr {

enum class Errc {
  NonHermitian,
  NoConvergence,
  ShapeMismatch,
  NegativeCoefficient,
  AllZero,
  AlphaOutOfRange,
  DimMismatch,
  NotPrime,
  InvalidDensity,
  ZeroVariance,
  OutOfRangeInput,
  ParseError,
  NegativeEntry,
  DimInconsistent,
  ModelMismatch,
  WrongDimension,
  BoundaryPoint,
  WrongPlane,
  InvalidArgument,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NonHermitian: return "NonHermitian";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::NegativeCoefficient: return "NegativeCoefficient";
    case Errc::AllZero: return "AllZero";
    case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::NotPrime: return "NotPrime";
    case Errc::InvalidDensity: return "InvalidDensity";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::OutOfRangeInput: return "OutOfRangeInput";
    case Errc::ParseError: return "ParseError";
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::DimInconsistent: return "DimInconsistent";
    case Errc::ModelMismatch: return "ModelMismatch";
    case Errc::WrongDimension: return "WrongDimension";
    case Errc::BoundaryPoint: return "BoundaryPoint";
    case Errc::WrongPlane: return "WrongPlane";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

  /// True for failures caused by malformed input data rather than bad parameters.
  bool is_input_error() const noexcept {
    return code_ == Errc::ParseError || code_ == Errc::NegativeEntry ||
           code_ == Errc::DimInconsistent;
  }

 private:
  Errc code_;
};

}  // namespace emcorr
