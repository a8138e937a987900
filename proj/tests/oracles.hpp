#pragma once

// Independent reference implementations used as test oracles. These favour
// obviousness over speed and share no code with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <utility>
#include <vector>

#include "loewner/types.hpp"

namespace oracle {

// Inverse of Phi(x) = erfc(-x / sqrt 2) / 2 by bisection.
inline double normal_quantile(double p) {
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Periodogram {
  std::vector<double> freqs;
  std::vector<double> powers;
  int segments = 0;
};

// Welch estimate with an O(L^2) DFT per segment: mean removed per segment,
// periodic Hann taper, one-sided density without doubling the Nyquist bin.
inline Periodogram welch_direct(const std::vector<double>& x, double dt, int L, double overlap,
                                bool hann) {
  Periodogram out;
  const int step = std::max(1, static_cast<int>(std::lround(L * (1.0 - overlap))));
  std::vector<double> w(L, 1.0);
  if (hann) {
    for (int j = 0; j < L; ++j) w[j] = std::pow(std::sin(M_PI * j / L), 2);
  }
  double wss = 0.0;
  for (double v : w) wss += v * v;
  out.powers.assign(L / 2, 0.0);
  for (int k = 1; k <= L / 2; ++k) out.freqs.push_back(k / (L * dt));
  for (std::size_t s = 0; s + L <= x.size(); s += step) {
    double mean = 0.0;
    for (int j = 0; j < L; ++j) mean += x[s + j];
    mean /= L;
    for (int k = 1; k <= L / 2; ++k) {
      std::complex<double> acc = 0.0;
      for (int j = 0; j < L; ++j) {
        acc += (x[s + j] - mean) * w[j] * std::polar(1.0, -2.0 * M_PI * k * j / L);
      }
      const double p = std::norm(acc) * dt / wss;
      out.powers[k - 1] += (k == L / 2) ? p : 2.0 * p;
    }
    ++out.segments;
  }
  for (auto& p : out.powers) p /= out.segments;
  return out;
}

struct Line {
  double slope;
  double intercept;
};

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline Line theil_sen(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> slopes;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (i < j && x[i] != x[j]) slopes.push_back((y[j] - y[i]) / (x[j] - x[i]));
    }
  }
  const double m = median(slopes);
  std::vector<double> r;
  for (std::size_t i = 0; i < x.size(); ++i) r.push_back(y[i] - m * x[i]);
  return {m, median(r)};
}

inline std::vector<double> acf(const std::vector<double>& x, int max_lag) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= x.size();
  std::vector<double> out;
  for (int l = 0; l <= max_lag; ++l) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      den += (x[i] - mean) * (x[i] - mean);
      if (i + l < x.size()) num += (x[i] - mean) * (x[i + l] - mean);
    }
    out.push_back(num / den);
  }
  return out;
}

inline double hill(const std::vector<double>& x, int n0) {
  std::vector<double> a;
  for (double v : x) {
    if (v != 0.0) a.push_back(std::abs(v));
  }
  std::sort(a.rbegin(), a.rend());
  double s = 0.0;
  for (int k = 0; k < n0; ++k) s += std::log(a[k]) - std::log(a[n0]);
  return (n0 + 1) / s;
}

// Boxes of side s anchored at the bounding-box corner. For polylines the
// segments are walked in steps of s / 1000.
inline double box_count(const std::vector<loewner::Point2>& pts, double s, bool polyline) {
  double x0 = pts[0].x;
  double y0 = pts[0].y;
  for (const auto& p : pts) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
  }
  std::set<std::pair<long, long>> boxes;
  auto add = [&](double x, double y) {
    boxes.insert({static_cast<long>(std::floor((x - x0) / s)), static_cast<long>(std::floor((y - y0) / s))});
  };
  add(pts[0].x, pts[0].y);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!polyline) {
      add(pts[i].x, pts[i].y);
      continue;
    }
    const double len = std::hypot(pts[i].x - pts[i - 1].x, pts[i].y - pts[i - 1].y);
    const int n = std::max(1, static_cast<int>(std::ceil(1000.0 * len / s)));
    for (int k = 1; k <= n; ++k) {
      const double f = static_cast<double>(k) / n;
      add(pts[i - 1].x + f * (pts[i].x - pts[i - 1].x), pts[i - 1].y + f * (pts[i].y - pts[i - 1].y));
    }
  }
  return static_cast<double>(boxes.size());
}

// Koch curve on [0, 1] after `depth` refinements.
inline std::vector<loewner::Point2> koch_curve(int depth) {
  using C = std::complex<double>;
  std::vector<C> pts{C(0, 0), C(1, 0)};
  const C rot = std::polar(1.0, M_PI / 3.0);
  for (int d = 0; d < depth; ++d) {
    std::vector<C> next{pts[0]};
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const C a = pts[i - 1];
      const C step = (pts[i] - a) / 3.0;
      next.push_back(a + step);
      next.push_back(a + step + step * rot);
      next.push_back(a + 2.0 * step);
      next.push_back(pts[i]);
    }
    pts = std::move(next);
  }
  std::vector<loewner::Point2> out;
  for (const auto& z : pts) out.push_back({z.real(), z.imag()});
  return out;
}

}  // namespace oracle
