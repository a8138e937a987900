#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "loewner/cli.hpp"
#include "loewner/conformal.hpp"
#include "loewner/error.hpp"
#include "loewner/io.hpp"

namespace loewner::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return kExitUsage;
    case ErrorCode::Io:
    case ErrorCode::MissingFrame:
      return kExitIo;
    case ErrorCode::BadManifest:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NonmonotoneTimestamps:
      return kExitInput;
    case ErrorCode::EmptyMask:
    case ErrorCode::NotConnected:
    case ErrorCode::DegenerateCloud:
    case ErrorCode::NoActivity:
    case ErrorCode::InsufficientActivity:
    case ErrorCode::NonUnitAxis:
      return kExitMask;
    case ErrorCode::TipHit:
    case ErrorCode::NonCapacityTime:
    case ErrorCode::NumericalBlowup:
    case ErrorCode::CurveLeavesHalfPlane:
    case ErrorCode::ZeroStep:
    case ErrorCode::SelfTouch:
    case ErrorCode::InsufficientPoints:
    case ErrorCode::NonpositiveFactor:
      return kExitLoewner;
    case ErrorCode::NegativeKappa:
    case ErrorCode::NonpositiveAlpha:
      return kExitUsage;
    case ErrorCode::TooShort:
    case ErrorCode::DegenerateSample:
    case ErrorCode::SegmentTooLong:
    case ErrorCode::EmptySignal:
    case ErrorCode::InsufficientBins:
    case ErrorCode::NonpositivePower:
    case ErrorCode::TooFewBins:
    case ErrorCode::TooFewPositive:
    case ErrorCode::ThresholdTooSmall:
    case ErrorCode::BadScaleRange:
    case ErrorCode::OutOfRangeDimension:
      return kExitDiagnostics;
    case ErrorCode::EmptyAnalysis:
      return kExitEmptyAnalysis;
  }
  return kExitInternal;
}

std::string exit_code_help() {
  return "Exit codes:\n"
         "  0   success\n"
         "  2   usage or parameter validation error\n"
         "  3   I/O: unreadable manifest or frame (MissingFrame, Io)\n"
         "  4   input: BadManifest, DimensionMismatch, NonmonotoneTimestamps\n"
         "  5   mask: EmptyMask, NotConnected, DegenerateCloud, NoActivity\n"
         "  6   Loewner solver: TipHit, NumericalBlowup, SelfTouch, ZeroStep, ...\n"
         "  7   diagnostics estimator failure\n"
         "  8   EmptyAnalysis: no window produced a usable driver\n"
         "  9   selfcheck failure\n"
         "  10  internal error\n"
         "Set " + std::string(kOutputDirEnv) + " to override the analyze output directory.\n";
}

namespace {

nlohmann::json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "config " + path.string() + ": " + e.what());
  }
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"Loewner-flow analysis of growing fronts from binary mask sequences"};
  app.footer(exit_code_help());
  app.require_subcommand(1);

  // analyze
  auto* analyze_cmd = app.add_subcommand("analyze", "Run the mask -> driver -> diagnostics pipeline");
  std::string config_path;
  std::string manifest;
  std::string channel;
  std::string mode = "both";
  std::string output_dir;
  std::string taper;
  RunConfig defaults;
  int nx = defaults.nx;
  int ny = defaults.ny;
  std::size_t subsample = 0;
  int welch_len = 0;
  double welch_overlap = 0.5;
  int hill_n0 = 0;
  double hill_fraction = 0.05;
  int acf_lag = 20;
  int var_bins = 8;
  int box_scales = 10;
  int drop_low = 2;
  double top_decades = 1.0;
  std::uint64_t seed = 0;
  int workers = 0;
  bool fixed_clock = false;
  bool detrend = false;
  analyze_cmd->add_option("--config", config_path, "RunConfig as a JSON document");
  analyze_cmd->add_option("--manifest", manifest, "Mask sequence manifest (JSON)");
  analyze_cmd->add_option("--channel", channel, "pseudopods|network|brightening|dimming");
  analyze_cmd->add_option("--mode", mode, "observable|zipper|both");
  analyze_cmd->add_option("--nx", nx, "Mesh columns");
  analyze_cmd->add_option("--ny", ny, "Mesh rows");
  analyze_cmd->add_option("--subsample", subsample, "Drop frames changing fewer pixels than this");
  analyze_cmd->add_option("--welch-length", welch_len, "Welch segment length (power of two, 0 = auto)");
  analyze_cmd->add_option("--welch-overlap", welch_overlap, "Welch overlap fraction in [0, 1)");
  analyze_cmd->add_option("--taper", taper, "hann|rectangular");
  analyze_cmd->add_option("--psd-drop-low", drop_low, "Lowest PSD bins excluded from the fit");
  analyze_cmd->add_option("--psd-top-decades", top_decades, "Decades trimmed from the top of the PSD fit");
  analyze_cmd->add_option("--hill-n0", hill_n0, "Hill threshold (0 = fraction rule)");
  analyze_cmd->add_option("--hill-fraction", hill_fraction, "Hill threshold as a fraction of n");
  analyze_cmd->add_option("--acf-lag", acf_lag, "Maximum ACF lag");
  analyze_cmd->add_option("--variance-bins", var_bins, "Time bins for variance growth");
  analyze_cmd->add_option("--box-scales", box_scales, "Number of box-counting scales");
  analyze_cmd->add_option("--output", output_dir, "Output directory");
  analyze_cmd->add_option("--seed", seed, "Seed recorded in the report");
  analyze_cmd->add_option("--workers", workers, "Worker threads (0 = hardware)");
  analyze_cmd->add_flag("--fixed-clock", fixed_clock, "Write a fixed generated_at timestamp");
  analyze_cmd->add_flag("--detrend", detrend, "Remove a linear trend from drivers first");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate seeded synthetic data");
  synth_cmd->require_subcommand(1);
  SynthRequest req;
  std::string synth_out;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--seed", req.seed, "RNG seed");
    c->add_option("--output,-o", synth_out, "Output file")->required();
  };
  auto* brownian = synth_cmd->add_subcommand("brownian", "Capacity-time driver sqrt(kappa) B_t");
  brownian->add_option("--kappa", req.kappa, "kappa >= 0")->required();
  brownian->add_option("--time", req.time, "Total capacity time");
  brownian->add_option("--steps", req.steps, "Number of steps");
  add_common(brownian);
  auto* sle = synth_cmd->add_subcommand("sle", "SLE trace from a Brownian driver");
  sle->add_option("--kappa", req.kappa, "kappa >= 0")->required();
  sle->add_option("--time", req.time, "Total capacity time");
  sle->add_option("--steps", req.steps, "Number of steps");
  add_common(sle);
  auto* pareto = synth_cmd->add_subcommand("pareto", "Pareto samples with tail index alpha");
  pareto->add_option("--alpha", req.alpha, "alpha > 0")->required();
  pareto->add_option("--n", req.n, "Sample count");
  add_common(pareto);
  auto* gaussian = synth_cmd->add_subcommand("gaussian", "Gaussian samples");
  gaussian->add_option("--sigma", req.sigma, "Standard deviation");
  gaussian->add_option("--n", req.n, "Sample count");
  add_common(gaussian);
  auto* disk = synth_cmd->add_subcommand("disk", "Growing-disk mask sequence (directory)");
  disk->add_option("--output,-o", synth_out, "Output directory")->required();

  // selfcheck
  auto* selfcheck_cmd = app.add_subcommand("selfcheck", "Fast analytic checks");
  double perturb = 0.0;
  selfcheck_cmd->add_option("--perturb-map", perturb, "Test hook: add to every slit step dt")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (analyze_cmd->parsed()) {
      RunConfig config;
      if (!config_path.empty()) {
        config = config_from_json(read_json_file(config_path), fs::path(config_path).parent_path());
      }
      // Explicit flags override the config document.
      auto given = [&](const char* name) { return analyze_cmd->count(name) > 0; };
      if (given("--manifest")) config.manifest = manifest;
      if (given("--channel")) config.channel = channel;
      if (given("--mode")) config.mode = mode_from_string(mode);
      if (given("--nx")) config.nx = nx;
      if (given("--ny")) config.ny = ny;
      if (given("--subsample")) config.subsample_threshold = subsample;
      if (given("--welch-length")) config.analysis.welch_segment_length = welch_len;
      if (given("--welch-overlap")) config.analysis.welch_overlap = welch_overlap;
      if (given("--taper")) config.analysis.taper = diagnostics::taper_from_string(taper);
      if (given("--psd-drop-low")) config.analysis.psd_drop_low_bins = drop_low;
      if (given("--psd-top-decades")) config.analysis.psd_top_decades = top_decades;
      if (given("--hill-n0")) {
        if (hill_n0 > 0) {
          config.analysis.hill_n0 = hill_n0;
        } else {
          config.analysis.hill_n0.reset();
        }
      }
      if (given("--hill-fraction")) config.analysis.hill_fraction = hill_fraction;
      if (given("--acf-lag")) config.analysis.acf_max_lag = acf_lag;
      if (given("--variance-bins")) config.analysis.variance_bins = var_bins;
      if (given("--box-scales")) config.analysis.scale_rule.count = box_scales;
      if (given("--output")) config.output_dir = output_dir;
      if (given("--seed")) config.seed = seed;
      if (given("--workers")) config.workers = workers;
      if (fixed_clock) config.fixed_clock = true;
      if (detrend) config.analysis.detrend = true;
      try {
        config.validate();
      } catch (const Error& e) {
        std::cerr << "analyze: " << e.what() << "\n\n" << analyze_cmd->help();
        return kExitUsage;
      }
      return run_analyze(config, std::cout, std::cerr);
    }
    if (synth_cmd->parsed()) {
      for (auto* sub : {brownian, sle, pareto, gaussian, disk}) {
        if (sub->parsed()) req.kind = sub->get_name();
      }
      req.output = synth_out;
      const int rc = run_synth(req, std::cout, std::cerr);
      if (rc == kExitUsage) std::cerr << "\n" << synth_cmd->get_subcommand(req.kind)->help();
      return rc;
    }
    if (selfcheck_cmd->parsed()) {
      conformal::testing::set_map_perturbation(perturb);
      return run_selfcheck(std::cout);
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace loewner::cli
