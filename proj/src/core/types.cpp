#include <cmath>

#include "loewner/error.hpp"
#include "loewner/types.hpp"

namespace loewner {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Io: return "Io";
    case ErrorCode::BadManifest: return "BadManifest";
    case ErrorCode::MissingFrame: return "MissingFrame";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonmonotoneTimestamps: return "NonmonotoneTimestamps";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::NotConnected: return "NotConnected";
    case ErrorCode::DegenerateCloud: return "DegenerateCloud";
    case ErrorCode::NoActivity: return "NoActivity";
    case ErrorCode::InsufficientActivity: return "InsufficientActivity";
    case ErrorCode::NonUnitAxis: return "NonUnitAxis";
    case ErrorCode::TipHit: return "TipHit";
    case ErrorCode::NonCapacityTime: return "NonCapacityTime";
    case ErrorCode::NumericalBlowup: return "NumericalBlowup";
    case ErrorCode::CurveLeavesHalfPlane: return "CurveLeavesHalfPlane";
    case ErrorCode::ZeroStep: return "ZeroStep";
    case ErrorCode::SelfTouch: return "SelfTouch";
    case ErrorCode::InsufficientPoints: return "InsufficientPoints";
    case ErrorCode::NonpositiveFactor: return "NonpositiveFactor";
    case ErrorCode::NegativeKappa: return "NegativeKappa";
    case ErrorCode::NonpositiveAlpha: return "NonpositiveAlpha";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
    case ErrorCode::SegmentTooLong: return "SegmentTooLong";
    case ErrorCode::EmptySignal: return "EmptySignal";
    case ErrorCode::InsufficientBins: return "InsufficientBins";
    case ErrorCode::NonpositivePower: return "NonpositivePower";
    case ErrorCode::TooFewBins: return "TooFewBins";
    case ErrorCode::TooFewPositive: return "TooFewPositive";
    case ErrorCode::ThresholdTooSmall: return "ThresholdTooSmall";
    case ErrorCode::BadScaleRange: return "BadScaleRange";
    case ErrorCode::OutOfRangeDimension: return "OutOfRangeDimension";
    case ErrorCode::EmptyAnalysis: return "EmptyAnalysis";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string to_string(TimeKind kind) {
  return kind == TimeKind::Video ? "video" : "capacity";
}

TimeKind time_kind_from_string(const std::string& s) {
  if (s == "video") return TimeKind::Video;
  if (s == "capacity") return TimeKind::Capacity;
  throw Error(ErrorCode::InvalidArgument, "unknown time kind '" + s + "'");
}

void DrivingFunction::validate() const {
  if (times.size() != values.size()) {
    throw Error(ErrorCode::InvalidArgument, "times and values differ in length");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]) || !std::isfinite(times[i])) {
      throw Error(ErrorCode::InvalidArgument, "non-finite sample at index " + std::to_string(i));
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "times not strictly increasing at index " +
                                                  std::to_string(i));
    }
  }
  if (segment_starts.empty() || segment_starts.front() != 0) {
    throw Error(ErrorCode::InvalidArgument, "segment_starts must begin with 0");
  }
  for (std::size_t i = 1; i < segment_starts.size(); ++i) {
    if (segment_starts[i] <= segment_starts[i - 1] || segment_starts[i] >= values.size()) {
      throw Error(ErrorCode::InvalidArgument, "malformed segment_starts");
    }
  }
}

std::vector<std::pair<std::size_t, std::size_t>> DrivingFunction::segments() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (values.empty()) return out;
  for (std::size_t i = 0; i < segment_starts.size(); ++i) {
    std::size_t end = i + 1 < segment_starts.size() ? segment_starts[i + 1] : values.size();
    out.emplace_back(segment_starts[i], end);
  }
  return out;
}

DrivingFunction DrivingFunction::longest_segment() const {
  DrivingFunction out;
  out.time_kind = time_kind;
  auto segs = segments();
  if (segs.empty()) return out;
  auto best = segs.front();
  for (const auto& s : segs) {
    if (s.second - s.first > best.second - best.first) best = s;
  }
  out.times.assign(times.begin() + best.first, times.begin() + best.second);
  out.values.assign(values.begin() + best.first, values.begin() + best.second);
  return out;
}

}  // namespace loewner
