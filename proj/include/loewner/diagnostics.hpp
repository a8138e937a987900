#pragma once

// Brownian-motion diagnostics for a reconstructed driver: increments, Q-Q
// against the normal law, Welch PSD with a robust log-log slope, sample
// autocorrelation, variance growth, Hill tail exponent and box-counting
// dimension with the kappa = 8 (D - 1) conversion.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loewner/types.hpp"

namespace loewner::diagnostics {

std::vector<double> increments(const DrivingFunction& u);
std::vector<double> increments(const std::vector<double>& values);

struct QQResult {
  std::vector<double> theoretical;  // standard normal quantiles
  std::vector<double> empirical;    // sorted standardized sample
  double max_deviation = 0.0;
};

// Plotting positions (i - 0.5) / n; sample standardized by mean and the
// n - 1 standard deviation.
QQResult qq_against_normal(const std::vector<double>& x);

enum class Taper { Hann, Rectangular };
std::string to_string(Taper taper);
Taper taper_from_string(const std::string& s);

struct PsdEstimate {
  std::vector<double> frequencies;  // one-sided, zero bin excluded
  std::vector<double> powers;       // density, signal^2 * seconds
  int segment_length = 0;
  double overlap_fraction = 0.0;
  Taper taper = Taper::Hann;
  int segment_count = 0;
  double dt = 1.0;
  // Parseval bookkeeping, averaged over segments: the summed two-sided raw
  // periodogram |X_k|^2 / L^2 and the mean square of the tapered, mean-removed
  // segment. They agree to rounding.
  double parseval_spectral = 0.0;
  double parseval_signal = 0.0;
  // Worst per-segment relative mismatch of the two.
  double parseval_max_rel_error = 0.0;
};

// Largest power of two <= n / 8, at least 8.
int default_segment_length(std::size_t n);

PsdEstimate welch_psd(const std::vector<double>& x, double dt, int segment_length,
                      double overlap_fraction = 0.5, Taper taper = Taper::Hann);
PsdEstimate welch_psd(const std::vector<double>& x, double dt);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Median of pairwise slopes, intercept = median(y - slope x).
LineFit theil_sen(const std::vector<double>& x, const std::vector<double>& y);
// Ordinary least squares.
LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

struct FitRange {
  double omega_min = 0.0;
  double omega_max = 0.0;
};

// Drops the `drop_low_bins` lowest bins and the top decade of frequencies.
FitRange default_fit_range(const PsdEstimate& psd, int drop_low_bins = 2,
                           double top_decades = 1.0);

struct SlopeFit {
  double beta = 0.0;  // P ~ omega^-beta
  double intercept = 0.0;
  FitRange fit_range;
  int bins_used = 0;
  std::string method = "theil-sen";
};

inline constexpr int kMinFitBins = 3;

SlopeFit loglog_slope(const PsdEstimate& psd, FitRange range);

// Biased, normalized estimator; acf[0] == 1.
std::vector<double> autocorrelation(const std::vector<double>& dx, int max_lag);

enum class VarianceMode { SingleSeriesLag, Ensemble };
std::string to_string(VarianceMode mode);

struct VarianceGrowth {
  std::vector<double> times;
  std::vector<double> variances;
  double slope = 0.0;
  VarianceMode mode = VarianceMode::SingleSeriesLag;
  TimeKind time_kind = TimeKind::Video;
  // True when the slope may be read as kappa (capacity time).
  bool estimates_kappa = false;
};

// Single series: mean square of the drift-removed lagged increments
// U(t + tau) - U(t) at n_time_bins lags up to a quarter of the series,
// corrected by 1 / (1 - tau / T) so Brownian input is unbiased.
VarianceGrowth variance_growth(const DrivingFunction& u, int n_time_bins);
// Ensemble: centred variance across drivers of U_t - U_0 in equal-width time
// bins.
VarianceGrowth variance_growth(const std::vector<DrivingFunction>& ensemble, int n_time_bins);

struct HillResult {
  double alpha_hat = 0.0;
  int n0 = 0;
  int n = 0;
};

inline constexpr int kMinHillThreshold = 10;

HillResult hill_estimator(const std::vector<double>& x, int n0);
// ceil(0.05 n), at least kMinHillThreshold.
int default_hill_threshold(std::size_t n, double fraction = 0.05);
// alpha_hat against n0 for n0 = kMinHillThreshold .. positives - 1, thinned to
// at most `max_points` entries.
std::vector<HillResult> hill_plot(const std::vector<double>& x, int max_points = 200);

enum class Geometry { Polyline, PointCloud };

struct DimensionEstimate {
  double D = 0.0;
  std::vector<double> scales;
  std::vector<double> counts;
  double fit_residual = 0.0;  // RMS of log-count residuals
  bool physical = true;       // 0 < D <= 2 and counts nonincreasing
};

struct ScaleRule {
  int count = 10;
  double min_spacing_factor = 2.0;   // smallest scale >= factor x point spacing
  double max_diameter_fraction = 0.25;
};

// Median distance between consecutive points.
double point_spacing(const std::vector<Point2>& points);
double bounding_diameter(const std::vector<Point2>& points);
// Geometric ladder between the rule's bounds; BadScaleRange when it would span
// less than a decade.
std::vector<double> default_scales(const std::vector<Point2>& points, const ScaleRule& rule = {});

DimensionEstimate box_counting_dimension(const std::vector<Point2>& points,
                                         const std::vector<double>& scales,
                                         Geometry geometry = Geometry::Polyline);

std::vector<Point2> to_points(const Trace& trace);

// kappa = 8 (D - 1); OutOfRangeDimension outside [1, 2].
double kappa_from_dimension(const DimensionEstimate& d);
double kappa_from_dimension(double D);

}  // namespace loewner::diagnostics
