#include <array>
#include <deque>

#include "loewner/error.hpp"
#include "loewner/ingest.hpp"

namespace loewner::ingest {

namespace {

// 8-neighbourhood, clockwise on screen starting at west.
constexpr std::array<int, 8> kDRow = {0, -1, -1, -1, 0, 1, 1, 1};
constexpr std::array<int, 8> kDCol = {-1, -1, 0, 1, 1, 1, 0, -1};

int direction_of(int drow, int dcol) {
  for (int d = 0; d < 8; ++d) {
    if (kDRow[d] == drow && kDCol[d] == dcol) return d;
  }
  return -1;
}

struct Labels {
  std::vector<int> label;  // -1 background
  std::vector<std::size_t> sizes;
};

// Components are numbered in the order their first (row-major) pixel appears.
Labels label_components(const MaskFrame& frame) {
  const int w = frame.width();
  const int h = frame.height();
  Labels out;
  out.label.assign(static_cast<std::size_t>(w) * h, -1);
  std::deque<std::pair<int, int>> queue;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * w + c;
      if (!frame.at(r, c) || out.label[idx] >= 0) continue;
      const int id = static_cast<int>(out.sizes.size());
      std::size_t size = 0;
      out.label[idx] = id;
      queue.emplace_back(r, c);
      while (!queue.empty()) {
        auto [pr, pc] = queue.front();
        queue.pop_front();
        ++size;
        for (int d = 0; d < 8; ++d) {
          const int nr = pr + kDRow[d];
          const int nc = pc + kDCol[d];
          if (!frame.in_bounds(nr, nc) || !frame.at(nr, nc)) continue;
          const std::size_t nidx = static_cast<std::size_t>(nr) * w + nc;
          if (out.label[nidx] >= 0) continue;
          out.label[nidx] = id;
          queue.emplace_back(nr, nc);
        }
      }
      out.sizes.push_back(size);
    }
  }
  return out;
}

std::size_t symmetric_difference(const MaskFrame& a, const MaskFrame& b) {
  std::size_t n = 0;
  const auto& ab = a.bits();
  const auto& bb = b.bits();
  for (std::size_t i = 0; i < ab.size(); ++i) n += ab[i] != bb[i];
  return n;
}

}  // namespace

std::size_t count_components(const MaskFrame& frame) {
  return label_components(frame).sizes.size();
}

MaskFrame largest_connected_component(const MaskFrame& frame) {
  const Labels labels = label_components(frame);
  if (labels.sizes.empty()) throw Error(ErrorCode::EmptyMask, "no occupied pixel");
  // Strict comparison keeps the earliest-starting component on ties.
  int best = 0;
  for (std::size_t i = 1; i < labels.sizes.size(); ++i) {
    if (labels.sizes[i] > labels.sizes[best]) best = static_cast<int>(i);
  }
  MaskFrame out(frame.width(), frame.height(), frame.timestamp());
  for (int r = 0; r < frame.height(); ++r) {
    for (int c = 0; c < frame.width(); ++c) {
      if (labels.label[static_cast<std::size_t>(r) * frame.width() + c] == best) out.set(r, c);
    }
  }
  return out;
}

Contour external_boundary(const MaskFrame& component) {
  const std::size_t n_components = count_components(component);
  if (n_components == 0) throw Error(ErrorCode::EmptyMask, "no occupied pixel");
  if (n_components > 1) {
    throw Error(ErrorCode::NotConnected, std::to_string(n_components) + " components");
  }

  int sr = -1;
  int sc = -1;
  for (int r = 0; r < component.height() && sr < 0; ++r) {
    for (int c = 0; c < component.width(); ++c) {
      if (component.at(r, c)) {
        sr = r;
        sc = c;
        break;
      }
    }
  }

  Contour contour;
  contour.closed = true;
  auto occupied = [&](int r, int c) { return component.in_bounds(r, c) && component.at(r, c); };

  int cr = sr;
  int cc = sc;
  int backtrack = 0;  // entered from the west
  int first_move = -1;
  const std::size_t limit =
      4 * static_cast<std::size_t>(component.width()) * component.height() + 8;

  while (contour.points.size() <= limit) {
    int move = -1;
    for (int k = 1; k <= 8; ++k) {
      const int d = (backtrack + k) % 8;
      if (occupied(cr + kDRow[d], cc + kDCol[d])) {
        move = d;
        break;
      }
    }
    if (move < 0) {  // isolated pixel
      contour.points.push_back({static_cast<double>(cc), static_cast<double>(cr)});
      return contour;
    }
    if (cr == sr && cc == sc) {
      if (first_move < 0) {
        first_move = move;
      } else if (move == first_move) {
        return contour;
      }
    }
    contour.points.push_back({static_cast<double>(cc), static_cast<double>(cr)});

    const int prev = (move + 7) % 8;
    const int pr = cr + kDRow[prev];
    const int pc = cc + kDCol[prev];
    cr += kDRow[move];
    cc += kDCol[move];
    backtrack = direction_of(pr - cr, pc - cc);
  }
  throw Error(ErrorCode::InvalidArgument, "boundary trace did not close");
}

GrowthIncrement growth_increment(const MaskFrame& s_k, const MaskFrame& s_k1) {
  if (!s_k.same_shape(s_k1)) {
    throw Error(ErrorCode::DimensionMismatch, "growth increment between differently sized frames");
  }
  if (s_k1.timestamp() < s_k.timestamp()) {
    throw Error(ErrorCode::NonmonotoneTimestamps, "growth increment frames out of order");
  }
  GrowthIncrement inc;
  inc.delta_mask = MaskFrame(s_k.width(), s_k.height(), s_k1.timestamp());
  inc.t_begin = s_k.timestamp();
  inc.t_end = s_k1.timestamp();
  double sx = 0.0;
  double sy = 0.0;
  std::size_t n = 0;
  for (int r = 0; r < s_k.height(); ++r) {
    for (int c = 0; c < s_k.width(); ++c) {
      if (s_k1.at(r, c) && !s_k.at(r, c)) {
        inc.delta_mask.set(r, c);
        sx += c;
        sy += r;
        ++n;
      }
    }
  }
  if (n > 0) inc.barycenter = Point2{sx / n, sy / n};
  return inc;
}

MaskSequence subsample_nonredundant(const MaskSequence& seq, std::size_t min_changed_pixels) {
  MaskSequence out;
  out.channel = seq.channel;
  out.pixel_scale_mm = seq.pixel_scale_mm;
  for (const auto& frame : seq.frames) {
    if (out.frames.empty() ||
        symmetric_difference(out.frames.back(), frame) >= min_changed_pixels) {
      out.frames.push_back(frame);
    }
  }
  return out;
}

}  // namespace loewner::ingest
