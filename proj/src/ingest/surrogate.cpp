#include <cmath>
#include <limits>

#include "loewner/error.hpp"
#include "loewner/ingest.hpp"

namespace loewner::ingest {

std::string to_string(WindowKind kind) { return kind == WindowKind::Inner ? "inner" : "outer"; }

namespace {

// Streaming second moments, shifted by the first point to limit cancellation.
class CloudMoments {
 public:
  void add(double x, double y) {
    if (n_ == 0) {
      ox_ = x;
      oy_ = y;
    } else if (x != ox_ || y != oy_) {
      distinct_ = true;
    }
    const double dx = x - ox_;
    const double dy = y - oy_;
    ++n_;
    sx_ += dx;
    sy_ += dy;
    sxx_ += dx * dx;
    syy_ += dy * dy;
    sxy_ += dx * dy;
  }

  Point2 axis() const {
    if (!distinct_) {
      throw Error(ErrorCode::DegenerateCloud, "need at least 2 distinct points, have " +
                                                  std::string(n_ == 0 ? "none" : "one"));
    }
    const double n = static_cast<double>(n_);
    const double mx = sx_ / n;
    const double my = sy_ / n;
    const double cxx = sxx_ / n - mx * mx;
    const double cyy = syy_ / n - my * my;
    const double cxy = sxy_ / n - mx * my;

    const double half_diff = 0.5 * (cxx - cyy);
    const double spread = std::hypot(half_diff, cxy);
    if (spread <= 1e-12 * (cxx + cyy)) return {1.0, 0.0};
    const double lambda = 0.5 * (cxx + cyy) + spread;

    Point2 v1{lambda - cyy, cxy};
    Point2 v2{cxy, lambda - cxx};
    Point2 v = std::hypot(v1.x, v1.y) >= std::hypot(v2.x, v2.y) ? v1 : v2;
    const double norm = std::hypot(v.x, v.y);
    v.x /= norm;
    v.y /= norm;
    if (v.x < 0.0 || (v.x == 0.0 && v.y < 0.0)) {
      v.x = -v.x;
      v.y = -v.y;
    }
    if (v.x == 0.0) v.x = 0.0;  // normalise -0
    return v;
  }

 private:
  std::size_t n_ = 0;
  bool distinct_ = false;
  double ox_ = 0.0, oy_ = 0.0;
  double sx_ = 0.0, sy_ = 0.0, sxx_ = 0.0, syy_ = 0.0, sxy_ = 0.0;
};

bool window_active(const WindowSpec& w, const MaskFrame& frame) {
  for (int r = w.y0; r < w.y0 + w.height; ++r) {
    for (int c = w.x0; c < w.x0 + w.width; ++c) {
      if (frame.at(r, c)) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<WindowSpec> window_mesh(int frame_width, int frame_height, int nx, int ny,
                                    const MaskSequence& occupancy_history) {
  if (nx < 1 || ny < 1) throw Error(ErrorCode::InvalidArgument, "mesh needs nx, ny >= 1");
  if (frame_width < nx || frame_height < ny) {
    throw Error(ErrorCode::InvalidArgument, "mesh finer than the frame");
  }
  for (const auto& f : occupancy_history.frames) {
    if (f.width() != frame_width || f.height() != frame_height) {
      throw Error(ErrorCode::DimensionMismatch, "history frame does not match mesh dimensions");
    }
  }

  std::vector<Point2> boundary;
  if (!occupancy_history.frames.empty()) {
    const MaskFrame& last = occupancy_history.frames.back();
    if (last.occupied_count() > 0) {
      boundary = external_boundary(largest_connected_component(last)).points;
    }
  }

  const int base_w = frame_width / nx;
  const int base_h = frame_height / ny;
  std::vector<WindowSpec> out;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      WindowSpec w;
      w.x0 = i * base_w;
      w.y0 = j * base_h;
      w.width = i == nx - 1 ? frame_width - w.x0 : base_w;
      w.height = j == ny - 1 ? frame_height - w.y0 : base_h;
      w.index = j * nx + i;

      bool crossed = false;
      for (const auto& p : boundary) {
        if (w.contains(static_cast<int>(p.y), static_cast<int>(p.x))) {
          crossed = true;
          break;
        }
      }
      if (crossed) {
        w.kind = WindowKind::Outer;
        out.push_back(w);
        continue;
      }
      for (const auto& f : occupancy_history.frames) {
        if (window_active(w, f)) {
          w.kind = WindowKind::Inner;
          out.push_back(w);
          break;
        }
      }
    }
  }
  return out;
}

Point2 principal_axis(const std::vector<Point2>& active_pixels) {
  CloudMoments m;
  for (const auto& p : active_pixels) m.add(p.x, p.y);
  return m.axis();
}

std::vector<Point2> window_pixels(const WindowSpec& window, const MaskFrame& frame) {
  std::vector<Point2> out;
  for (int r = window.y0; r < window.y0 + window.height; ++r) {
    for (int c = window.x0; c < window.x0 + window.width; ++c) {
      if (frame.at(r, c)) out.push_back({static_cast<double>(c), static_cast<double>(r)});
    }
  }
  return out;
}

Point2 window_axis(const MaskSequence& seq, const WindowSpec& window) {
  CloudMoments m;
  for (const auto& frame : seq.frames) {
    for (int r = window.y0; r < window.y0 + window.height; ++r) {
      for (int c = window.x0; c < window.x0 + window.width; ++c) {
        if (frame.at(r, c)) m.add(c, r);
      }
    }
  }
  return m.axis();
}

ActiveRadius minimal_active_radius(const WindowSpec& window, const MaskFrame& frame,
                                   Point2 center) {
  if (window.x0 < 0 || window.y0 < 0 || window.x0 + window.width > frame.width() ||
      window.y0 + window.height > frame.height()) {
    throw Error(ErrorCode::InvalidArgument, "window outside frame bounds");
  }
  double best = std::numeric_limits<double>::infinity();
  Point2 arg{};
  // Row-major scan with strict < keeps the lexicographically smallest (row, col).
  for (int r = window.y0; r < window.y0 + window.height; ++r) {
    for (int c = window.x0; c < window.x0 + window.width; ++c) {
      if (!frame.at(r, c)) continue;
      const double dx = c - center.x;
      const double dy = r - center.y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best) {
        best = d2;
        arg = {static_cast<double>(c), static_cast<double>(r)};
      }
    }
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorCode::NoActivity, "window " + std::to_string(window.index) +
                                           " empty at t=" + std::to_string(frame.timestamp()));
  }
  return {std::sqrt(best), arg};
}

double project_displacement(Point2 center, Point2 m_t, Point2 axis) {
  const double norm = std::hypot(axis.x, axis.y);
  if (!(std::abs(norm - 1.0) <= 1e-12)) {
    throw Error(ErrorCode::NonUnitAxis, "axis norm " + std::to_string(norm));
  }
  return (m_t.x - center.x) * axis.x + (m_t.y - center.y) * axis.y;
}

DrivingFunction build_surrogate_driver(const MaskSequence& seq, const WindowSpec& window) {
  std::size_t active = 0;
  for (const auto& f : seq.frames) active += window_active(window, f) ? 1 : 0;
  if (active < 2) {
    throw Error(ErrorCode::InsufficientActivity,
                "window " + std::to_string(window.index) + " active in " +
                    std::to_string(active) + " frame(s)");
  }

  const Point2 axis = window_axis(seq, window);
  const Point2 center = window.center();

  DrivingFunction u;
  u.time_kind = TimeKind::Video;
  bool in_gap = false;
  for (const auto& f : seq.frames) {
    if (!window_active(window, f)) {
      in_gap = !u.empty();
      continue;
    }
    if (in_gap) {
      u.segment_starts.push_back(u.size());
      in_gap = false;
    }
    const ActiveRadius ar = minimal_active_radius(window, f, center);
    u.times.push_back(f.timestamp());
    u.values.push_back(project_displacement(center, ar.nearest, axis));
  }
  return u;
}

}  // namespace loewner::ingest
