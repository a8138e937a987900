#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace loewner {

// Every failure the library reports carries one of these codes. The CLI maps
// them onto process exit codes (see cli.hpp).
enum class ErrorCode {
  // mask-ingest
  Io,
  BadManifest,
  MissingFrame,
  DimensionMismatch,
  NonmonotoneTimestamps,
  EmptyMask,
  NotConnected,
  DegenerateCloud,
  NoActivity,
  InsufficientActivity,
  NonUnitAxis,
  // loewner-core
  TipHit,
  NonCapacityTime,
  NumericalBlowup,
  CurveLeavesHalfPlane,
  ZeroStep,
  SelfTouch,
  InsufficientPoints,
  NonpositiveFactor,
  // stochastic-synth
  NegativeKappa,
  NonpositiveAlpha,
  // diagnostics
  TooShort,
  DegenerateSample,
  SegmentTooLong,
  EmptySignal,
  InsufficientBins,
  NonpositivePower,
  TooFewBins,
  TooFewPositive,
  ThresholdTooSmall,
  BadScaleRange,
  OutOfRangeDimension,
  EmptyAnalysis,
  // generic argument validation
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace loewner
