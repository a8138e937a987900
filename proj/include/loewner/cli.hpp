#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "loewner/error.hpp"
#include "loewner/report.hpp"

namespace loewner::cli {

// Process exit codes. One per failure family; documented in `--help`.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,          // bad flags or parameter validation
  kExitIo = 3,             // unreadable manifest / frame, MissingFrame
  kExitInput = 4,          // DimensionMismatch, NonmonotoneTimestamps, BadManifest
  kExitMask = 5,           // EmptyMask, NotConnected, DegenerateCloud, activity errors
  kExitLoewner = 6,        // conformal solver failures
  kExitDiagnostics = 7,    // estimator failures that abort a run
  kExitEmptyAnalysis = 8,  // nothing analyzable
  kExitSelfcheck = 9,      // selfcheck criterion failed
  kExitInternal = 10,
};

int exit_code_for(ErrorCode code) noexcept;
std::string exit_code_help();

enum class Mode { Observable, Zipper, Both };
std::string to_string(Mode mode);
Mode mode_from_string(const std::string& s);

struct RunConfig {
  std::filesystem::path manifest;
  std::optional<std::string> channel;  // overrides the manifest's tag
  int nx = 3;
  int ny = 3;
  std::size_t subsample_threshold = 0;
  diagnostics::AnalysisOptions analysis;
  std::filesystem::path output_dir = "loewner_out";
  std::uint64_t seed = 0;
  Mode mode = Mode::Both;
  bool fixed_clock = false;
  int workers = 0;  // 0: hardware concurrency

  // Range checks; throws Error(InvalidArgument).
  void validate() const;
};

// Environment variable overriding the output directory.
inline constexpr const char* kOutputDirEnv = "LOEWNER_OUTPUT_DIR";

RunConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

// Builds the report without touching the filesystem beyond reading inputs.
struct AnalysisArtifacts {
  diagnostics::DiagnosticsReport report;
  std::vector<std::pair<std::string, DrivingFunction>> drivers;  // file name, driver
};
AnalysisArtifacts analyze(const RunConfig& config);

// Full batch run: writes report.json, CSV tables, SVG plots and drivers/ into
// the output directory. On failure the directory holds only FAILED.
int run_analyze(const RunConfig& config, std::ostream& out, std::ostream& err);

struct SynthRequest {
  std::string kind;  // brownian | sle | pareto | gaussian | disk
  double kappa = 0.0;
  double time = 1.0;
  int steps = 1000;
  double alpha = 1.5;
  double sigma = 1.0;
  int n = 1000;
  std::uint64_t seed = 0;
  std::filesystem::path output;
};
int run_synth(const SynthRequest& request, std::ostream& out, std::ostream& err);

// Writes a growing-disk mask sequence (PGM frames + manifest.json) into `dir`.
std::filesystem::path write_disk_dataset(const std::filesystem::path& dir, int size = 120,
                                         int frames = 40, double r0 = 30.0, double growth = 0.5);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};
std::vector<CheckResult> selfcheck_results();
int run_selfcheck(std::ostream& out);

int main_entry(int argc, char** argv);

}  // namespace loewner::cli
