#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "loewner/error.hpp"
#include "loewner/ingest.hpp"

namespace loewner::ingest {

namespace fs = std::filesystem;

std::string to_string(Channel channel) {
  switch (channel) {
    case Channel::Pseudopods: return "pseudopods";
    case Channel::Network: return "network";
    case Channel::Brightening: return "brightening";
    case Channel::Dimming: return "dimming";
  }
  return "pseudopods";
}

Channel channel_from_string(const std::string& s) {
  if (s == "pseudopods") return Channel::Pseudopods;
  if (s == "network") return Channel::Network;
  if (s == "brightening") return Channel::Brightening;
  if (s == "dimming") return Channel::Dimming;
  throw Error(ErrorCode::InvalidArgument,
              "unknown channel '" + s + "' (pseudopods|network|brightening|dimming)");
}

MaskFrame::MaskFrame(int width, int height, double timestamp)
    : MaskFrame(width, height,
                std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) *
                                          static_cast<std::size_t>(std::max(height, 0))),
                timestamp) {}

MaskFrame::MaskFrame(int width, int height, std::vector<std::uint8_t> bits, double timestamp)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width < 0 || height < 0 ||
      bits_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::DimensionMismatch, "bit count does not match " +
                                                  std::to_string(width) + "x" +
                                                  std::to_string(height));
  }
  for (auto& b : bits_) b = b ? 1 : 0;
  set_timestamp(timestamp);
}

void MaskFrame::set_timestamp(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "timestamp must be finite and >= 0");
  }
  timestamp_ = t;
}

std::size_t MaskFrame::occupied_count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

void MaskSequence::validate() const {
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (!frames[i].same_shape(frames[0])) {
      throw Error(ErrorCode::DimensionMismatch,
                  "frame " + std::to_string(i) + " is " + std::to_string(frames[i].width()) +
                      "x" + std::to_string(frames[i].height()) + ", expected " +
                      std::to_string(frames[0].width()) + "x" +
                      std::to_string(frames[0].height()));
    }
    if (!(frames[i].timestamp() > frames[i - 1].timestamp())) {
      throw Error(ErrorCode::NonmonotoneTimestamps,
                  "timestamp " + std::to_string(frames[i].timestamp()) + " at frame " +
                      std::to_string(i) + " does not increase");
    }
  }
}

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int parse_positive(const std::string& tok, const fs::path& path) {
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used == tok.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::Io, "malformed PGM header in " + path.string());
}

MaskFrame read_pgm(std::istream& in, const fs::path& path, const std::string& magic) {
  const int width = parse_positive(pgm_token(in), path);
  const int height = parse_positive(pgm_token(in), path);
  const int maxval = parse_positive(pgm_token(in), path);
  if (maxval > 65535) throw Error(ErrorCode::Io, "PGM maxval out of range in " + path.string());
  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<std::uint8_t> bits(count);
  if (magic == "P5") {
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    std::vector<char> raw(count * bytes_per);
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
      throw Error(ErrorCode::Io, "truncated PGM raster in " + path.string());
    }
    for (std::size_t i = 0; i < count; ++i) {
      bits[i] = bytes_per == 1 ? raw[i] != 0 : (raw[2 * i] != 0 || raw[2 * i + 1] != 0);
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      long v = 0;
      if (!(in >> v)) throw Error(ErrorCode::Io, "truncated PGM raster in " + path.string());
      bits[i] = v != 0;
    }
  }
  return MaskFrame(width, height, std::move(bits), 0.0);
}

MaskFrame read_csv_grid(std::istream& in, const fs::path& path) {
  std::vector<std::uint8_t> bits;
  int width = -1;
  int height = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    int row_width = 0;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      auto b = cell.find_first_not_of(" \t");
      auto e = cell.find_last_not_of(" \t");
      if (b == std::string::npos) throw Error(ErrorCode::Io, "empty CSV cell in " + path.string());
      cell = cell.substr(b, e - b + 1);
      if (cell != "0" && cell != "1") {
        throw Error(ErrorCode::Io, "CSV grid cell '" + cell + "' is not 0/1 in " + path.string());
      }
      bits.push_back(cell == "1");
      ++row_width;
    }
    if (width >= 0 && row_width != width) {
      throw Error(ErrorCode::DimensionMismatch, "ragged CSV grid in " + path.string());
    }
    width = row_width;
    ++height;
  }
  if (height == 0) throw Error(ErrorCode::Io, "empty CSV grid in " + path.string());
  return MaskFrame(width, height, std::move(bits), 0.0);
}

}  // namespace

MaskFrame read_frame(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFrame, "cannot open frame " + path.string());
  char m[2] = {0, 0};
  in.read(m, 2);
  const std::string magic(m, 2);
  if (magic == "P5" || magic == "P2") return read_pgm(in, path, magic);
  in.clear();
  in.seekg(0);
  return read_csv_grid(in, path);
}

void write_pgm(const MaskFrame& frame, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << "P5\n" << frame.width() << ' ' << frame.height() << "\n255\n";
  for (auto b : frame.bits()) out.put(b ? static_cast<char>(255) : '\0');
  if (!out) throw Error(ErrorCode::Io, "short write to " + path.string());
}

MaskSequence load_mask_sequence(const fs::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw Error(ErrorCode::MissingFrame, "cannot open manifest " + manifest_path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadManifest, manifest_path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("frames") || !doc["frames"].is_array()) {
    throw Error(ErrorCode::BadManifest, "manifest needs a \"frames\" array");
  }

  MaskSequence seq;
  seq.channel = channel_from_string(doc.value("channel", std::string("pseudopods")));
  if (doc.contains("pixel_scale_mm") && !doc["pixel_scale_mm"].is_null()) {
    double scale = doc["pixel_scale_mm"].get<double>();
    if (!(scale > 0.0)) throw Error(ErrorCode::BadManifest, "pixel_scale_mm must be > 0");
    seq.pixel_scale_mm = scale;
  }

  const fs::path base = manifest_path.parent_path();
  for (const auto& entry : doc["frames"]) {
    if (!entry.is_object() || !entry.contains("path") || !entry.contains("t_seconds") ||
        !entry["t_seconds"].is_number()) {
      throw Error(ErrorCode::BadManifest, "each frame needs \"path\" and numeric \"t_seconds\"");
    }
    const fs::path rel = entry["path"].get<std::string>();
    const fs::path full = rel.is_absolute() ? rel : base / rel;
    if (!fs::exists(full)) throw Error(ErrorCode::MissingFrame, "frame not found: " + full.string());
    MaskFrame frame = read_frame(full);
    const double t = entry["t_seconds"].get<double>();
    if (!std::isfinite(t) || t < 0.0) {
      throw Error(ErrorCode::BadManifest, "t_seconds must be finite and >= 0");
    }
    frame.set_timestamp(t);
    seq.frames.push_back(std::move(frame));
  }
  if (seq.frames.empty()) throw Error(ErrorCode::BadManifest, "manifest lists no frames");

  std::stable_sort(seq.frames.begin(), seq.frames.end(),
                   [](const MaskFrame& a, const MaskFrame& b) { return a.timestamp() < b.timestamp(); });
  seq.validate();
  if (seq.frames.size() > kMaxRecommendedFrames) {
    std::clog << "warning: " << seq.frames.size() << " frames exceeds the recommended "
              << kMaxRecommendedFrames << "\n";
  }
  return seq;
}

}  // namespace loewner::ingest
