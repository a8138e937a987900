#pragma once

// Per-driver diagnostic bundles and their aggregation into a report.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "loewner/diagnostics.hpp"
#include "loewner/ingest.hpp"

namespace loewner::diagnostics {

inline constexpr int kReportSchemaVersion = 1;

struct AnalysisOptions {
  int welch_segment_length = 0;  // 0 selects default_segment_length
  double welch_overlap = 0.5;
  Taper taper = Taper::Hann;
  int psd_drop_low_bins = 2;
  double psd_top_decades = 1.0;
  std::optional<int> hill_n0;  // unset: default_hill_threshold
  double hill_fraction = 0.05;
  int acf_max_lag = 20;
  int variance_bins = 8;
  // Subtract the least-squares line from the driver before analysis.
  bool detrend = false;
  ScaleRule scale_rule;
};

// Everything computed from one driving function. Each diagnostic that could
// not be computed leaves its field empty and records the reason in `errors`.
struct DriverDiagnostics {
  std::size_t n_samples = 0;
  std::size_t n_segments = 0;
  std::size_t analyzed_segment_length = 0;
  bool static_driver = false;  // every increment is exactly zero

  std::optional<PsdEstimate> psd;
  std::optional<SlopeFit> slope;
  std::optional<QQResult> qq_increments;
  std::optional<QQResult> qq_raw;
  std::vector<double> acf;
  std::optional<VarianceGrowth> variance;
  std::optional<HillResult> hill;
  std::vector<HillResult> hill_curve;
  std::map<std::string, std::string> errors;
};

// Increments and Q-Q/Hill pool all contiguous segments; PSD, ACF and variance
// growth use the longest segment.
DriverDiagnostics analyze_driver(const DrivingFunction& u, const AnalysisOptions& options);

struct ReportEntry {
  int window_id = -1;              // -1 for the global entry
  std::string window_kind;         // "inner", "outer" or "global"
  ingest::Channel channel = ingest::Channel::Pseudopods;
  TimeKind time_kind = TimeKind::Video;
  std::string status = "ok";       // "ok", "InsufficientActivity" or "error"
  std::vector<std::string> flags;
  std::string message;

  std::optional<DriverDiagnostics> diagnostics;
  std::optional<DimensionEstimate> dimension;
  std::optional<double> kappa;
  std::string dimension_error;

  std::optional<Point2> axis;
  std::vector<Point2> barycenters;

  // Sets `kappa` from `dimension` when 1 <= D <= 2, otherwise flags the entry.
  void attach_dimension(DimensionEstimate d);
};

struct Histogram {
  double lower = 0.0;
  double bin_width = 0.0;
  std::vector<int> counts;
  int underflow = 0;
  int overflow = 0;

  void add(double v);
};

Histogram dimension_histogram();
Histogram kappa_histogram();

struct DiagnosticsReport {
  int schema_version = kReportSchemaVersion;
  ingest::Channel channel = ingest::Channel::Pseudopods;
  std::optional<double> pixel_scale_mm;
  std::vector<ReportEntry> entries;  // ordered by (window_id, time_kind)
  std::vector<ReportEntry> global;
  Histogram local_D = dimension_histogram();
  Histogram global_D = dimension_histogram();
  Histogram local_kappa = kappa_histogram();
  Histogram global_kappa = kappa_histogram();
};

// EmptyAnalysis when neither a window nor a global entry has status "ok".
DiagnosticsReport assemble_report(std::vector<ReportEntry> window_entries,
                                  std::vector<ReportEntry> global_entries,
                                  ingest::Channel channel,
                                  std::optional<double> pixel_scale_mm = std::nullopt);

// `generated_at` is written verbatim.
nlohmann::json to_json(const DiagnosticsReport& report, const std::string& generated_at);

}  // namespace loewner::diagnostics
