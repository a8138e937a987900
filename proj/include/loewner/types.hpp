#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace loewner {

using Complex = std::complex<double>;

// Pixel-plane point: x is the column, y the row (image coordinates, y down).
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

enum class TimeKind { Video, Capacity };

std::string to_string(TimeKind kind);
TimeKind time_kind_from_string(const std::string& s);

// A sampled scalar driver (t_k, U_k).
//
// In capacity time the series is read as a piecewise-constant driver: step k
// (k >= 1) covers (times[k-1], times[k]] and holds values[k]; values[0] is the
// base point where the hull meets the real line.
//
// Video-time drivers built from masks can contain gaps (frames without
// activity). `segment_starts` lists the index at which each contiguous run
// begins; it always starts with 0.
struct DrivingFunction {
  std::vector<double> times;
  std::vector<double> values;
  TimeKind time_kind = TimeKind::Video;
  std::vector<std::size_t> segment_starts{0};

  std::size_t size() const noexcept { return values.size(); }
  bool empty() const noexcept { return values.empty(); }

  // Throws InvalidArgument when lengths differ, times are not strictly
  // increasing, values are non-finite, or segment_starts is malformed.
  void validate() const;

  // [begin, end) index ranges of the contiguous segments.
  std::vector<std::pair<std::size_t, std::size_t>> segments() const;
  // Copy of the longest contiguous segment (first one on ties).
  DrivingFunction longest_segment() const;
};

// Ordered points of a Loewner curve in the closed upper half-plane.
struct Trace {
  std::vector<Complex> points;
  double base = 0.0;
};

}  // namespace loewner
