#include <cmath>
#include <cstdio>
#include <ostream>

#include "loewner/cli.hpp"
#include "loewner/conformal.hpp"
#include "loewner/error.hpp"
#include "loewner/ingest.hpp"
#include "loewner/io.hpp"
#include "loewner/synth.hpp"

namespace loewner::cli {

namespace fs = std::filesystem;

fs::path write_disk_dataset(const fs::path& dir, int size, int frames, double r0, double growth) {
  if (size < 8 || frames < 2 || !(r0 > 0.0) || !(growth >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "disk dataset needs size >= 8, frames >= 2, r0 > 0");
  }
  fs::create_directories(dir);
  const double c = (size - 1) / 2.0;
  nlohmann::json manifest;
  manifest["channel"] = "pseudopods";
  manifest["frames"] = nlohmann::json::array();
  for (int k = 0; k < frames; ++k) {
    const double r = r0 + growth * k;
    ingest::MaskFrame f(size, size, 120.0 * k);
    for (int row = 0; row < size; ++row) {
      for (int col = 0; col < size; ++col) {
        if (std::hypot(col - c, row - c) <= r) f.set(row, col);
      }
    }
    char name[32];
    std::snprintf(name, sizeof name, "frame_%03d.pgm", k);
    ingest::write_pgm(f, dir / name);
    manifest["frames"].push_back({{"path", name}, {"t_seconds", 120.0 * k}});
  }
  const fs::path path = dir / "manifest.json";
  io::write_text(path, manifest.dump(2) + "\n");
  return path;
}

int run_synth(const SynthRequest& req, std::ostream& out, std::ostream& err) {
  try {
    if (req.output.empty()) throw Error(ErrorCode::InvalidArgument, "--output is required");
    synth::RandomSource src(req.seed);
    std::string text;
    if (req.kind == "brownian") {
      text = io::driving_csv(synth::brownian_driving(req.kappa, req.time, req.steps, src));
    } else if (req.kind == "sle") {
      text = io::trace_csv(synth::sle_trace(req.kappa, req.time, req.steps, src));
    } else if (req.kind == "pareto") {
      text = io::samples_csv(synth::pareto_samples(req.alpha, req.n, src));
    } else if (req.kind == "gaussian") {
      text = io::samples_csv(synth::gaussian_samples(req.sigma, req.n, src));
    } else if (req.kind == "disk") {
      const fs::path m = write_disk_dataset(req.output);
      out << "wrote " << m.string() << "\n";
      return kExitOk;
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown synth kind '" + req.kind + "'");
    }
    if (req.output.has_parent_path()) fs::create_directories(req.output.parent_path());
    io::write_text(req.output, text);
    out << "wrote " << req.output.string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "synth " << req.kind << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace loewner::cli
