#include "loewner/report.hpp"

#include <algorithm>
#include <cmath>

#include "loewner/error.hpp"

namespace loewner::diagnostics {

namespace {

template <typename Fn>
void attempt(DriverDiagnostics& d, const std::string& name, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    d.errors[name] = e.what();
  }
}

double median_step(const std::vector<double>& times) {
  std::vector<double> steps;
  for (std::size_t i = 1; i < times.size(); ++i) steps.push_back(times[i] - times[i - 1]);
  if (steps.empty()) return 1.0;
  const std::size_t mid = steps.size() / 2;
  std::nth_element(steps.begin(), steps.begin() + mid, steps.end());
  return steps[mid];
}

DrivingFunction detrended(const DrivingFunction& u) {
  if (u.size() < 2) return u;
  const LineFit line = least_squares(u.times, u.values);
  DrivingFunction out = u;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.values[i] -= line.intercept + line.slope * out.times[i];
  }
  return out;
}

}  // namespace

DriverDiagnostics analyze_driver(const DrivingFunction& input, const AnalysisOptions& options) {
  input.validate();
  const DrivingFunction u = options.detrend ? detrended(input) : input;

  DriverDiagnostics d;
  d.n_samples = u.size();
  const auto segments = u.segments();
  d.n_segments = segments.size();

  std::vector<double> pooled;
  for (const auto& [b, e] : segments) {
    for (std::size_t i = b + 1; i < e; ++i) pooled.push_back(u.values[i] - u.values[i - 1]);
  }
  if (pooled.empty()) {
    d.errors["increments"] = std::string(to_string(ErrorCode::TooShort)) +
                             ": no segment with 2 samples";
  }
  d.static_driver = !pooled.empty() &&
                    std::all_of(pooled.begin(), pooled.end(), [](double v) { return v == 0.0; });

  attempt(d, "qq", [&] { d.qq_increments = qq_against_normal(pooled); });
  attempt(d, "qq_raw", [&] { d.qq_raw = qq_against_normal(u.values); });

  const DrivingFunction longest = u.longest_segment();
  d.analyzed_segment_length = longest.size();

  attempt(d, "acf", [&] {
    const std::vector<double> inc = increments(longest.values);
    const int lag = std::min<int>(options.acf_max_lag, static_cast<int>(inc.size()) - 1);
    d.acf = autocorrelation(inc, lag);
  });

  attempt(d, "psd", [&] {
    const int len = options.welch_segment_length > 0 ? options.welch_segment_length
                                                     : default_segment_length(longest.size());
    d.psd = welch_psd(longest.values, median_step(longest.times), len, options.welch_overlap,
                      options.taper);
  });
  if (d.psd) {
    attempt(d, "beta", [&] {
      d.slope = loglog_slope(
          *d.psd, default_fit_range(*d.psd, options.psd_drop_low_bins, options.psd_top_decades));
    });
  }

  attempt(d, "variance_growth", [&] { d.variance = variance_growth(longest, options.variance_bins); });

  attempt(d, "hill", [&] {
    const int n0 = options.hill_n0.value_or(default_hill_threshold(pooled.size(), options.hill_fraction));
    d.hill = hill_estimator(pooled, n0);
  });
  d.hill_curve = hill_plot(pooled);
  return d;
}

void ReportEntry::attach_dimension(DimensionEstimate est) {
  const double D = est.D;
  if (!est.physical) flags.push_back("nonphysical-dimension");
  dimension = std::move(est);
  try {
    kappa = kappa_from_dimension(D);
  } catch (const Error& e) {
    kappa.reset();
    flags.push_back(std::string(to_string(e.code())));
  }
}

void Histogram::add(double v) {
  if (!std::isfinite(v)) return;
  const double pos = (v - lower) / bin_width;
  if (pos < 0.0) {
    ++underflow;
    return;
  }
  const auto bin = static_cast<std::size_t>(std::floor(pos));
  if (bin >= counts.size()) {
    // The top edge belongs to the last bin.
    if (bin == counts.size() && pos == static_cast<double>(counts.size())) {
      ++counts.back();
    } else {
      ++overflow;
    }
    return;
  }
  ++counts[bin];
}

Histogram dimension_histogram() { return {0.0, 0.1, std::vector<int>(25, 0), 0, 0}; }
Histogram kappa_histogram() { return {0.0, 0.5, std::vector<int>(16, 0), 0, 0}; }

DiagnosticsReport assemble_report(std::vector<ReportEntry> window_entries,
                                  std::vector<ReportEntry> global_entries,
                                  ingest::Channel channel, std::optional<double> pixel_scale_mm) {
  auto usable = [](const ReportEntry& e) { return e.status == "ok"; };
  const bool any_usable = std::any_of(window_entries.begin(), window_entries.end(), usable) ||
                          std::any_of(global_entries.begin(), global_entries.end(), usable);
  if (!any_usable) {
    throw Error(ErrorCode::EmptyAnalysis, "no window produced a usable driver");
  }
  DiagnosticsReport report;
  report.channel = channel;
  report.pixel_scale_mm = pixel_scale_mm;
  std::stable_sort(window_entries.begin(), window_entries.end(),
                   [](const ReportEntry& a, const ReportEntry& b) {
                     if (a.window_id != b.window_id) return a.window_id < b.window_id;
                     return a.time_kind < b.time_kind;
                   });
  report.entries = std::move(window_entries);
  report.global = std::move(global_entries);
  for (const auto& e : report.entries) {
    if (e.dimension) report.local_D.add(e.dimension->D);
    if (e.kappa) report.local_kappa.add(*e.kappa);
  }
  for (const auto& e : report.global) {
    if (e.dimension) report.global_D.add(e.dimension->D);
    if (e.kappa) report.global_kappa.add(*e.kappa);
  }
  return report;
}

namespace {

using nlohmann::json;

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json histogram_json(const Histogram& h) {
  return {{"lower", h.lower}, {"bin_width", h.bin_width}, {"counts", h.counts},
          {"underflow", h.underflow}, {"overflow", h.overflow}};
}

json entry_json(const ReportEntry& e, std::optional<double> pixel_scale_mm) {
  json j;
  j["window_id"] = e.window_id;
  j["window_kind"] = e.window_kind;
  j["channel"] = ingest::to_string(e.channel);
  j["time_kind"] = to_string(e.time_kind);
  j["status"] = e.status;
  j["flags"] = e.flags;
  j["message"] = e.message;

  j["beta"] = nullptr;
  j["qq_max_dev"] = nullptr;
  j["qq_max_dev_raw"] = nullptr;
  j["alpha_hat"] = nullptr;
  j["hill_n0"] = nullptr;
  j["acf"] = json::array();
  j["var_slope"] = nullptr;
  j["var_mode"] = nullptr;
  j["var_indicative"] = nullptr;
  j["errors"] = json::object();
  if (e.diagnostics) {
    const DriverDiagnostics& d = *e.diagnostics;
    j["n_samples"] = d.n_samples;
    j["n_segments"] = d.n_segments;
    j["analyzed_segment_length"] = d.analyzed_segment_length;
    j["static_driver"] = d.static_driver;
    if (d.slope) {
      j["beta"] = d.slope->beta;
      j["psd_intercept"] = d.slope->intercept;
      j["psd_fit_range"] = {d.slope->fit_range.omega_min, d.slope->fit_range.omega_max};
      j["psd_bins_used"] = d.slope->bins_used;
    }
    if (d.psd) {
      j["welch"] = {{"segment_length", d.psd->segment_length},
                    {"overlap", d.psd->overlap_fraction},
                    {"taper", to_string(d.psd->taper)},
                    {"segments", d.psd->segment_count},
                    {"parseval_spectral", d.psd->parseval_spectral},
                    {"parseval_signal", d.psd->parseval_signal}};
    }
    if (d.qq_increments) j["qq_max_dev"] = d.qq_increments->max_deviation;
    if (d.qq_raw) j["qq_max_dev_raw"] = d.qq_raw->max_deviation;
    if (d.hill) {
      j["alpha_hat"] = d.hill->alpha_hat;
      j["hill_n0"] = d.hill->n0;
    }
    j["acf"] = d.acf;
    if (d.variance) {
      j["var_slope"] = d.variance->slope;
      j["var_mode"] = to_string(d.variance->mode);
      j["var_indicative"] = !d.variance->estimates_kappa;
      if (pixel_scale_mm) j["var_slope_mm2"] = d.variance->slope * *pixel_scale_mm * *pixel_scale_mm;
    }
    for (const auto& [k, v] : d.errors) j["errors"][k] = v;
  }

  j["D"] = e.dimension ? json(e.dimension->D) : json(nullptr);
  j["kappa"] = opt(e.kappa);
  if (e.dimension) {
    j["boxcount_residual"] = e.dimension->fit_residual;
    j["D_physical"] = e.dimension->physical;
  }
  if (!e.dimension_error.empty()) j["dimension_error"] = e.dimension_error;
  if (e.axis) j["axis"] = {e.axis->x, e.axis->y};
  json bary = json::array();
  for (const auto& p : e.barycenters) bary.push_back({p.x, p.y});
  j["barycenters"] = bary;
  return j;
}

}  // namespace

json to_json(const DiagnosticsReport& report, const std::string& generated_at) {
  json j;
  j["schema_version"] = report.schema_version;
  j["generated_at"] = generated_at;
  j["channel"] = ingest::to_string(report.channel);
  j["pixel_scale_mm"] = opt(report.pixel_scale_mm);
  j["units"] = {{"length", "pixel"}, {"time", "second"}};
  j["entries"] = json::array();
  for (const auto& e : report.entries) j["entries"].push_back(entry_json(e, report.pixel_scale_mm));
  j["global"] = json::array();
  for (const auto& e : report.global) j["global"].push_back(entry_json(e, report.pixel_scale_mm));
  j["histograms"] = {
      {"D", {{"local", histogram_json(report.local_D)}, {"global", histogram_json(report.global_D)}}},
      {"kappa",
       {{"local", histogram_json(report.local_kappa)}, {"global", histogram_json(report.global_kappa)}}}};
  return j;
}

}  // namespace loewner::diagnostics
