#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <map>
#include <ostream>

#include "../core/parallel.hpp"
#include "loewner/cli.hpp"
#include "loewner/conformal.hpp"
#include "loewner/error.hpp"
#include "loewner/io.hpp"
#include "loewner/svg.hpp"

namespace loewner::cli {

namespace fs = std::filesystem;
using diagnostics::ReportEntry;
using ingest::MaskFrame;
using ingest::MaskSequence;
using ingest::WindowSpec;

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::Observable: return "observable";
    case Mode::Zipper: return "zipper";
    case Mode::Both: return "both";
  }
  return "both";
}

Mode mode_from_string(const std::string& s) {
  if (s == "observable") return Mode::Observable;
  if (s == "zipper") return Mode::Zipper;
  if (s == "both") return Mode::Both;
  throw Error(ErrorCode::InvalidArgument, "unknown mode '" + s + "' (observable|zipper|both)");
}

void RunConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidArgument, m); };
  if (manifest.empty()) fail("a manifest path is required");
  if (nx < 1 || ny < 1) fail("mesh dimensions must be >= 1");
  if (channel) ingest::channel_from_string(*channel);
  const auto& a = analysis;
  if (a.welch_segment_length < 0 ||
      (a.welch_segment_length > 0 && (a.welch_segment_length & (a.welch_segment_length - 1)) != 0)) {
    fail("Welch segment length must be 0 (auto) or a power of two");
  }
  if (!(a.welch_overlap >= 0.0 && a.welch_overlap < 1.0)) fail("Welch overlap must lie in [0, 1)");
  if (a.psd_drop_low_bins < 0) fail("psd low-bin drop must be >= 0");
  if (!(a.psd_top_decades >= 0.0)) fail("psd top decades must be >= 0");
  if (a.hill_n0 && *a.hill_n0 < diagnostics::kMinHillThreshold) fail("Hill n0 must be >= 10");
  if (!(a.hill_fraction > 0.0 && a.hill_fraction < 1.0)) fail("Hill fraction must lie in (0, 1)");
  if (a.acf_max_lag < 1) fail("ACF max lag must be >= 1");
  if (a.variance_bins < 2) fail("variance bins must be >= 2");
  if (a.scale_rule.count < 3) fail("box-count scale count must be >= 3");
  if (workers < 0) fail("workers must be >= 0");
}

RunConfig config_from_json(const nlohmann::json& j, const fs::path& base_dir) {
  RunConfig c;
  try {
    if (j.contains("manifest")) {
      fs::path m = j.at("manifest").get<std::string>();
      c.manifest = m.is_relative() && !base_dir.empty() ? base_dir / m : m;
    }
    if (j.contains("channel") && !j["channel"].is_null()) c.channel = j["channel"].get<std::string>();
    c.nx = j.value("nx", c.nx);
    c.ny = j.value("ny", c.ny);
    c.subsample_threshold = j.value("subsample_threshold", c.subsample_threshold);
    if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    c.seed = j.value("seed", c.seed);
    if (j.contains("mode")) c.mode = mode_from_string(j["mode"].get<std::string>());
    c.fixed_clock = j.value("fixed_clock", c.fixed_clock);
    c.workers = j.value("workers", c.workers);
    auto& a = c.analysis;
    a.welch_segment_length = j.value("welch_segment_length", a.welch_segment_length);
    a.welch_overlap = j.value("welch_overlap", a.welch_overlap);
    if (j.contains("taper")) a.taper = diagnostics::taper_from_string(j["taper"].get<std::string>());
    a.psd_drop_low_bins = j.value("psd_drop_low_bins", a.psd_drop_low_bins);
    a.psd_top_decades = j.value("psd_top_decades", a.psd_top_decades);
    if (j.contains("hill_n0") && !j["hill_n0"].is_null()) a.hill_n0 = j["hill_n0"].get<int>();
    a.hill_fraction = j.value("hill_fraction", a.hill_fraction);
    a.acf_max_lag = j.value("acf_max_lag", a.acf_max_lag);
    a.variance_bins = j.value("variance_bins", a.variance_bins);
    a.detrend = j.value("detrend", a.detrend);
    a.scale_rule.count = j.value("box_scales", a.scale_rule.count);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
  return c;
}

namespace {

// Error raised while running a named pipeline stage.
struct StageFailure {
  std::string stage;
  Error error;
};

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw StageFailure{name, e};
  }
}

bool window_static(const MaskSequence& seq, const WindowSpec& w) {
  const MaskFrame& first = seq.frames.front();
  for (std::size_t i = 1; i < seq.frames.size(); ++i) {
    for (int r = w.y0; r < w.y0 + w.height; ++r) {
      for (int c = w.x0; c < w.x0 + w.width; ++c) {
        if (seq.frames[i].at(r, c) != first.at(r, c)) return false;
      }
    }
  }
  return true;
}

// Barycentres of the growth increments restricted to the window.
std::vector<Point2> window_barycenters(const MaskSequence& seq, const WindowSpec& w) {
  std::vector<Point2> out;
  for (std::size_t k = 0; k + 1 < seq.frames.size(); ++k) {
    double sx = 0.0;
    double sy = 0.0;
    std::size_t n = 0;
    for (int r = w.y0; r < w.y0 + w.height; ++r) {
      for (int c = w.x0; c < w.x0 + w.width; ++c) {
        if (seq.frames[k + 1].at(r, c) && !seq.frames[k].at(r, c)) {
          sx += c;
          sy += r;
          ++n;
        }
      }
    }
    if (n > 0) out.push_back({sx / n, sy / n});
  }
  return out;
}

// Translate the first point to the origin, rotate the window axis onto the
// real line and reflect into the upper half-plane when most points lie below.
Trace embed_curve(const std::vector<Point2>& pts, Point2 axis, bool* reflected) {
  Trace t;
  if (pts.empty()) return t;
  const Complex rot(axis.x, -axis.y);
  int below = 0;
  for (const auto& p : pts) {
    const Complex z = Complex(p.x - pts.front().x, p.y - pts.front().y) * rot;
    if (!t.points.empty() && z == t.points.back()) continue;
    t.points.push_back(z);
    below += z.imag() < 0.0 ? 1 : (z.imag() > 0.0 ? -1 : 0);
  }
  t.points.front() = Complex(0.0, 0.0);
  *reflected = below > 0;
  if (*reflected) {
    for (auto& z : t.points) z = std::conj(z);
  }
  t.base = 0.0;
  return t;
}

std::vector<Point2> contour_in_window(const std::vector<Point2>& contour, const WindowSpec& w) {
  std::vector<Point2> out;
  for (const auto& p : contour) {
    if (w.contains(static_cast<int>(p.y), static_cast<int>(p.x))) out.push_back(p);
  }
  return out;
}

struct WindowResult {
  std::vector<ReportEntry> entries;
  std::vector<std::pair<std::string, DrivingFunction>> drivers;
};

WindowResult analyze_window(const MaskSequence& seq, const WindowSpec& w,
                            const std::string& kind_label, const std::vector<Point2>& contour,
                            const RunConfig& config, const std::string& driver_prefix) {
  WindowResult result;
  auto base_entry = [&](TimeKind tk) {
    ReportEntry e;
    e.window_id = kind_label == "global" ? -1 : w.index;
    e.window_kind = kind_label;
    e.channel = seq.channel;
    e.time_kind = tk;
    return e;
  };
  const bool want_obs = config.mode != Mode::Zipper;
  const bool want_zip = config.mode != Mode::Observable;

  std::optional<Point2> axis;
  std::string axis_error;
  try {
    axis = ingest::window_axis(seq, w);
  } catch (const Error& e) {
    axis_error = e.what();
  }

  const bool is_static = window_static(seq, w);
  auto flag_inactive = [&](ReportEntry& e, const std::string& why) {
    e.status = std::string(to_string(ErrorCode::InsufficientActivity));
    e.flags.push_back("InsufficientActivity");
    e.message = why;
  };

  if (want_obs) {
    ReportEntry e = base_entry(TimeKind::Video);
    e.axis = axis;
    if (is_static) {
      flag_inactive(e, "occupancy never changes inside the window");
    } else {
      try {
        DrivingFunction u = ingest::build_surrogate_driver(seq, w);
        e.diagnostics = diagnostics::analyze_driver(u, config.analysis);
        if (e.diagnostics->static_driver) e.flags.push_back("static-driver");
        if (u.segment_starts.size() > 1) e.flags.push_back("gaps");
        result.drivers.emplace_back(driver_prefix + "_video.csv", std::move(u));
      } catch (const Error& err) {
        if (err.code() == ErrorCode::InsufficientActivity) {
          flag_inactive(e, err.what());
        } else {
          e.status = "error";
          e.message = err.what();
        }
      }
    }
    result.entries.push_back(std::move(e));
  }

  if (want_zip) {
    ReportEntry e = base_entry(TimeKind::Capacity);
    e.axis = axis;
    e.barycenters = window_barycenters(seq, w);
    if (is_static) {
      flag_inactive(e, "occupancy never changes inside the window");
    } else if (!axis) {
      e.status = "error";
      e.message = axis_error;
    } else {
      try {
        bool reflected = false;
        const Trace curve = embed_curve(e.barycenters, *axis, &reflected);
        if (reflected) e.flags.push_back("reflected");
        DrivingFunction u = conformal::inverse_driving(curve);
        e.diagnostics = diagnostics::analyze_driver(u, config.analysis);
        result.drivers.emplace_back(driver_prefix + "_capacity.csv", std::move(u));
      } catch (const Error& err) {
        e.status = "error";
        e.message = err.what();
      }
    }
    result.entries.push_back(std::move(e));
  }

  // Box-counting is purely geometric; attach it to the first entry only.
  if (!result.entries.empty() && !contour.empty()) {
    ReportEntry& first = result.entries.front();
    try {
      const std::vector<Point2> pts =
          kind_label == "global" ? contour : contour_in_window(contour, w);
      const auto scales = diagnostics::default_scales(pts, config.analysis.scale_rule);
      first.attach_dimension(diagnostics::box_counting_dimension(pts, scales));
    } catch (const Error& err) {
      first.dimension_error = err.what();
    }
  }
  return result;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Files a run may create; cleared before a failure marker is written.
const std::vector<std::string> kArtifacts = {
    "report.json", "psd.csv", "qq.csv", "acf.csv", "boxcount.csv", "hill.csv",
    "psd.svg", "qq.svg", "hist_D.svg", "hist_kappa.svg", "drivers", "plots", "FAILED"};

void clear_artifacts(const fs::path& dir) {
  for (const auto& name : kArtifacts) {
    std::error_code ec;
    fs::remove_all(dir / name, ec);
  }
}

}  // namespace

AnalysisArtifacts analyze(const RunConfig& config) {
  stage("config", [&] { config.validate(); });
  MaskSequence seq = stage("load", [&] { return ingest::load_mask_sequence(config.manifest); });
  if (config.channel) seq.channel = ingest::channel_from_string(*config.channel);
  if (config.subsample_threshold > 0) {
    seq = ingest::subsample_nonredundant(seq, config.subsample_threshold);
  }

  MaskSequence lcc = seq;
  stage("largest-component", [&] {
    for (auto& f : lcc.frames) {
      if (f.occupied_count() > 0) f = ingest::largest_connected_component(f);
    }
  });

  const int width = lcc.frames.front().width();
  const int height = lcc.frames.front().height();
  const auto windows =
      stage("mesh", [&] { return ingest::window_mesh(width, height, config.nx, config.ny, lcc); });

  std::vector<Point2> contour;
  if (lcc.frames.back().occupied_count() > 0) {
    contour = stage("boundary", [&] { return ingest::external_boundary(lcc.frames.back()).points; });
  }

  std::vector<WindowResult> results(windows.size());
  stage("windows", [&] {
    detail::parallel_for(
        windows.size(),
        [&](std::size_t i) {
          const WindowSpec& w = windows[i];
          results[i] = analyze_window(lcc, w, ingest::to_string(w.kind), contour, config,
                                      "window_" + std::to_string(w.index));
        },
        static_cast<unsigned>(config.workers));
  });

  WindowSpec whole;
  whole.width = width;
  whole.height = height;
  whole.index = -1;
  WindowResult global = analyze_window(lcc, whole, "global", contour, config, "global");

  AnalysisArtifacts out;
  std::vector<ReportEntry> entries;
  for (auto& r : results) {
    for (auto& e : r.entries) entries.push_back(std::move(e));
    for (auto& d : r.drivers) out.drivers.push_back(std::move(d));
  }
  for (auto& d : global.drivers) out.drivers.push_back(std::move(d));
  out.report = stage("report", [&] {
    return diagnostics::assemble_report(std::move(entries), std::move(global.entries), seq.channel,
                                        seq.pixel_scale_mm);
  });
  return out;
}

int run_analyze(const RunConfig& input_config, std::ostream& out, std::ostream& err) {
  RunConfig config = input_config;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) config.output_dir = env;
  const fs::path dir = config.output_dir;

  auto fail = [&](const std::string& stage_name, const std::string& message, int code) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    clear_artifacts(dir);
    try {
      io::write_text(dir / "FAILED", "stage: " + stage_name + "\nerror: " + message + "\n");
    } catch (const Error&) {
    }
    err << "analyze failed at stage '" << stage_name << "': " << message << "\n";
    return code;
  };

  std::map<fs::path, std::string> files;
  try {
    AnalysisArtifacts art = analyze(config);
    const auto& report = art.report;
    const std::string stamp = config.fixed_clock ? "1970-01-01T00:00:00Z" : utc_now();
    nlohmann::json j = diagnostics::to_json(report, stamp);
    j["config"] = {{"mode", to_string(config.mode)},
                   {"nx", config.nx},
                   {"ny", config.ny},
                   {"subsample_threshold", config.subsample_threshold},
                   {"seed", config.seed}};
    files["report.json"] = j.dump(2) + "\n";
    files["psd.csv"] = io::psd_table(report);
    files["qq.csv"] = io::qq_table(report);
    files["acf.csv"] = io::acf_table(report);
    files["boxcount.csv"] = io::boxcount_table(report);
    files["hill.csv"] = io::hill_table(report);
    files["hist_D.svg"] =
        svg::histogram_plot(report.local_D, report.global_D, "Box-counting dimension D", "D");
    files["hist_kappa.svg"] = svg::histogram_plot(report.local_kappa, report.global_kappa,
                                                  "kappa = 8 (D - 1)", "kappa");

    auto plots_for = [&](const ReportEntry& e, const std::string& stem, bool top_level) {
      if (!e.diagnostics) return;
      const auto& d = *e.diagnostics;
      const std::string label = stem + " (" + to_string(e.time_kind) + ")";
      if (d.psd) {
        const std::string s = svg::psd_plot(*d.psd, d.slope ? &*d.slope : nullptr, "PSD " + label);
        files[fs::path("plots") / (stem + "_" + to_string(e.time_kind) + "_psd.svg")] = s;
        if (top_level) files["psd.svg"] = s;
      }
      if (d.qq_increments) {
        const std::string s = svg::qq_plot(*d.qq_increments, "Q-Q increments " + label);
        files[fs::path("plots") / (stem + "_" + to_string(e.time_kind) + "_qq.svg")] = s;
        if (top_level) files["qq.svg"] = s;
      }
    };
    bool top = true;
    for (const auto& e : report.global) {
      plots_for(e, "global", top && e.diagnostics && e.diagnostics->psd);
      if (e.diagnostics && e.diagnostics->psd) top = false;
    }
    for (const auto& e : report.entries) plots_for(e, "window_" + std::to_string(e.window_id), false);
    for (const auto& [name, driver] : art.drivers) files[fs::path("drivers") / name] = io::driving_csv(driver);
  } catch (const StageFailure& f) {
    return fail(f.stage, f.error.what(), exit_code_for(f.error.code()));
  } catch (const Error& e) {
    return fail("analyze", e.what(), exit_code_for(e.code()));
  }

  try {
    fs::create_directories(dir);
    clear_artifacts(dir);
    for (const auto& [rel, text] : files) {
      fs::create_directories((dir / rel).parent_path());
      io::write_text(dir / rel, text);
    }
  } catch (const std::exception& e) {
    return fail("write", e.what(), kExitIo);
  }
  out << "wrote " << files.size() << " artifacts to " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace loewner::cli
