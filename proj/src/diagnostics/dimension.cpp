#include <algorithm>
#include <cmath>
#include <cstdint>

#include "loewner/diagnostics.hpp"
#include "loewner/error.hpp"

namespace loewner::diagnostics {

std::vector<Point2> to_points(const Trace& trace) {
  std::vector<Point2> out;
  out.reserve(trace.points.size());
  for (const auto& z : trace.points) out.push_back({z.real(), z.imag()});
  return out;
}

double point_spacing(const std::vector<Point2>& points) {
  if (points.size() < 2) throw Error(ErrorCode::DegenerateCloud, "need at least 2 points");
  std::vector<double> d;
  d.reserve(points.size() - 1);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double s = std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y);
    if (s > 0.0) d.push_back(s);
  }
  if (d.empty()) throw Error(ErrorCode::DegenerateCloud, "all points coincide");
  const std::size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + mid, d.end());
  return d[mid];
}

double bounding_diameter(const std::vector<Point2>& points) {
  if (points.empty()) return 0.0;
  auto [xmin, xmax] = std::minmax_element(points.begin(), points.end(),
                                          [](const Point2& a, const Point2& b) { return a.x < b.x; });
  auto [ymin, ymax] = std::minmax_element(points.begin(), points.end(),
                                          [](const Point2& a, const Point2& b) { return a.y < b.y; });
  return std::hypot(xmax->x - xmin->x, ymax->y - ymin->y);
}

std::vector<double> default_scales(const std::vector<Point2>& points, const ScaleRule& rule) {
  if (rule.count < 3) throw Error(ErrorCode::BadScaleRange, "need at least 3 scales");
  const double lo = rule.min_spacing_factor * point_spacing(points);
  const double hi = rule.max_diameter_fraction * bounding_diameter(points);
  if (!(hi >= 10.0 * lo)) {
    throw Error(ErrorCode::BadScaleRange, "admissible scales [" + std::to_string(lo) + ", " +
                                              std::to_string(hi) + "] span less than a decade");
  }
  std::vector<double> scales(static_cast<std::size_t>(rule.count));
  const double ratio = std::log(hi / lo) / (rule.count - 1);
  for (int i = 0; i < rule.count; ++i) scales[i] = lo * std::exp(ratio * i);
  scales.back() = hi;
  return scales;
}

namespace {

std::uint64_t box_key(double x, double y, double x0, double y0, double s) {
  const auto bx = static_cast<std::uint64_t>(static_cast<std::uint32_t>(std::floor((x - x0) / s)));
  const auto by = static_cast<std::uint64_t>(static_cast<std::uint32_t>(std::floor((y - y0) / s)));
  return (bx << 32) | by;
}

std::size_t count_boxes(const std::vector<Point2>& points, double s, double x0, double y0,
                        Geometry geometry) {
  std::vector<std::uint64_t> keys;
  keys.reserve(points.size());
  if (geometry == Geometry::PointCloud || points.size() == 1) {
    for (const auto& p : points) keys.push_back(box_key(p.x, p.y, x0, y0, s));
  } else {
    // Sample each segment densely enough that no crossed box is skipped
    // except ones clipped at a corner.
    keys.push_back(box_key(points[0].x, points[0].y, x0, y0, s));
    for (std::size_t i = 1; i < points.size(); ++i) {
      const Point2 a = points[i - 1];
      const Point2 b = points[i];
      const double len = std::hypot(b.x - a.x, b.y - a.y);
      const int pieces = std::max(1, static_cast<int>(std::ceil(4.0 * len / s)));
      for (int k = 1; k <= pieces; ++k) {
        const double f = static_cast<double>(k) / pieces;
        keys.push_back(box_key(a.x + f * (b.x - a.x), a.y + f * (b.y - a.y), x0, y0, s));
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

}  // namespace

DimensionEstimate box_counting_dimension(const std::vector<Point2>& points,
                                         const std::vector<double>& scales, Geometry geometry) {
  const double spacing = point_spacing(points);  // DegenerateCloud when < 2 distinct points
  const double diameter = bounding_diameter(points);

  if (scales.size() < 3) throw Error(ErrorCode::BadScaleRange, "need at least 3 scales");
  std::vector<double> sorted = scales;
  std::sort(sorted.begin(), sorted.end());
  if (!(sorted.front() > 0.0)) throw Error(ErrorCode::BadScaleRange, "scales must be > 0");
  if (sorted.back() < 10.0 * sorted.front() * (1.0 - 1e-12)) {
    throw Error(ErrorCode::BadScaleRange, "scales span less than a decade");
  }
  if (sorted.front() < 2.0 * spacing * (1.0 - 1e-9)) {
    throw Error(ErrorCode::BadScaleRange, "smallest scale below twice the point spacing");
  }
  if (sorted.back() > 0.25 * diameter * (1.0 + 1e-9)) {
    throw Error(ErrorCode::BadScaleRange, "largest scale above a quarter of the diameter");
  }

  double x0 = points.front().x;
  double y0 = points.front().y;
  for (const auto& p : points) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
  }

  DimensionEstimate est;
  est.scales = sorted;
  std::vector<double> lx;
  std::vector<double> ly;
  for (double s : sorted) {
    const auto n = static_cast<double>(count_boxes(points, s, x0, y0, geometry));
    est.counts.push_back(n);
    lx.push_back(std::log(s));
    ly.push_back(std::log(n));
  }
  const LineFit fit = theil_sen(lx, ly);
  est.D = -fit.slope;
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  est.fit_residual = std::sqrt(ss / static_cast<double>(lx.size()));
  const bool monotone = std::is_sorted(est.counts.rbegin(), est.counts.rend());
  est.physical = monotone && est.D > 0.0 && est.D <= 2.0;
  return est;
}

double kappa_from_dimension(double D) {
  if (!(D >= 1.0 && D <= 2.0)) {
    throw Error(ErrorCode::OutOfRangeDimension,
                "D = " + std::to_string(D) + " outside [1, 2]");
  }
  return 8.0 * (D - 1.0);
}

double kappa_from_dimension(const DimensionEstimate& d) { return kappa_from_dimension(d.D); }

}  // namespace loewner::diagnostics
