#pragma once

// Mask ingestion: loading time-resolved binary masks, extracting the largest
// component and its outer boundary, growth increments, the analysis mesh and
// the per-window surrogate driving observable.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "loewner/types.hpp"

namespace loewner::ingest {

enum class Channel { Pseudopods, Network, Brightening, Dimming };

std::string to_string(Channel channel);
Channel channel_from_string(const std::string& s);

// Row-major binary occupancy grid.
class MaskFrame {
 public:
  MaskFrame() = default;
  MaskFrame(int width, int height, double timestamp = 0.0);
  MaskFrame(int width, int height, std::vector<std::uint8_t> bits, double timestamp);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double timestamp() const noexcept { return timestamp_; }
  void set_timestamp(double t);

  bool at(int row, int col) const noexcept {
    return bits_[static_cast<std::size_t>(row) * width_ + col] != 0;
  }
  void set(int row, int col, bool occupied = true) noexcept {
    bits_[static_cast<std::size_t>(row) * width_ + col] = occupied ? 1 : 0;
  }
  bool in_bounds(int row, int col) const noexcept {
    return row >= 0 && col >= 0 && row < height_ && col < width_;
  }

  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
  std::size_t occupied_count() const noexcept;
  bool same_shape(const MaskFrame& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
  double timestamp_ = 0.0;
};

struct MaskSequence {
  std::vector<MaskFrame> frames;
  Channel channel = Channel::Pseudopods;
  std::optional<double> pixel_scale_mm;

  // Checks equal dimensions and strictly increasing timestamps.
  void validate() const;
};

// Recommended frame count range; exceeding it is only warned about.
inline constexpr std::size_t kMaxRecommendedFrames = 720;

enum class WindowKind { Inner, Outer };
std::string to_string(WindowKind kind);

struct WindowSpec {
  int x0 = 0;  // column of the top-left pixel
  int y0 = 0;  // row of the top-left pixel
  int width = 0;
  int height = 0;
  WindowKind kind = WindowKind::Inner;
  int index = 0;

  bool contains(int row, int col) const noexcept {
    return col >= x0 && col < x0 + width && row >= y0 && row < y0 + height;
  }
  // Geometric centre in pixel-centre coordinates.
  Point2 center() const noexcept {
    return {x0 + (width - 1) / 2.0, y0 + (height - 1) / 2.0};
  }
};

struct GrowthIncrement {
  MaskFrame delta_mask;
  std::optional<Point2> barycenter;
  double t_begin = 0.0;
  double t_end = 0.0;
};

struct Contour {
  std::vector<Point2> points;
  bool closed = true;
};

// Loads a JSON manifest; frames are PGM (P2/P5) or CSV 0/1 grids resolved
// relative to the manifest directory.
MaskSequence load_mask_sequence(const std::filesystem::path& manifest_path);

MaskFrame read_frame(const std::filesystem::path& path);
void write_pgm(const MaskFrame& frame, const std::filesystem::path& path);

MaskSequence subsample_nonredundant(const MaskSequence& seq, std::size_t min_changed_pixels);

MaskFrame largest_connected_component(const MaskFrame& frame);

// Number of 8-connected components.
std::size_t count_components(const MaskFrame& frame);

// Moore-neighbour trace of the outer boundary. Starts at the first occupied
// pixel in row-major order; the signed shoelace area of the result in (x, y)
// pixel coordinates is positive.
Contour external_boundary(const MaskFrame& component);

GrowthIncrement growth_increment(const MaskFrame& s_k, const MaskFrame& s_k1);

std::vector<WindowSpec> window_mesh(int frame_width, int frame_height, int nx, int ny,
                                    const MaskSequence& occupancy_history);

// Dominant direction of a point cloud; x >= 0 (or y >= 0 when x == 0);
// isotropic clouds return (1, 0).
Point2 principal_axis(const std::vector<Point2>& active_pixels);

struct ActiveRadius {
  double radius = 0.0;
  Point2 nearest;
};

ActiveRadius minimal_active_radius(const WindowSpec& window, const MaskFrame& frame,
                                   Point2 center);

double project_displacement(Point2 center, Point2 m_t, Point2 axis);

// Occupied pixels of `frame` inside `window`, as (x, y).
std::vector<Point2> window_pixels(const WindowSpec& window, const MaskFrame& frame);

// Principal axis of all pixels occupied inside `window`, pooled over frames.
Point2 window_axis(const MaskSequence& seq, const WindowSpec& window);

// Video-time driver for one window; frames without activity become segment
// breaks.
DrivingFunction build_surrogate_driver(const MaskSequence& seq, const WindowSpec& window);

}  // namespace loewner::ingest
