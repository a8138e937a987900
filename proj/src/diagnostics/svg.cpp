#include "loewner/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace loewner::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

// Axis-aligned plotting frame mapping data coordinates to pixels.
class Canvas {
 public:
  Canvas(double xmin, double xmax, double ymin, double ymax) {
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    x0_ = xmin;
    x1_ = xmax;
    y0_ = ymin;
    y1_ = ymax;
  }

  double px(double x) const { return kLeft + (x - x0_) / (x1_ - x0_) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0_) / (y1_ - y0_) * (kHeight - kTop - kBottom); }

  void frame(const std::string& title, const std::string& xlabel, const std::string& ylabel) {
    body_ += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" +
             num(kWidth - kLeft - kRight) + "\" height=\"" + num(kHeight - kTop - kBottom) +
             "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= 4; ++i) {
      const double xv = x0_ + (x1_ - x0_) * i / 4.0;
      const double yv = y0_ + (y1_ - y0_) * i / 4.0;
      body_ += text(px(xv), kHeight - kBottom + 18, num(xv), "middle");
      body_ += text(kLeft - 6, py(yv) + 4, num(yv), "end");
    }
    body_ += text(kWidth / 2, 24, escape(title), "middle", 15);
    body_ += text(kWidth / 2, kHeight - 12, escape(xlabel), "middle");
    body_ += "<text x=\"16\" y=\"" + num(kHeight / 2) +
             "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
             num(kHeight / 2) + ")\">" + escape(ylabel) + "</text>\n";
  }

  void points(const std::vector<double>& xs, const std::vector<double>& ys, const std::string& color) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      body_ += "<circle cx=\"" + num(px(xs[i])) + "\" cy=\"" + num(py(ys[i])) +
               "\" r=\"2\" fill=\"" + color + "\"/>\n";
    }
  }

  void line(double xa, double ya, double xb, double yb, const std::string& color, bool dashed = false) {
    body_ += "<line x1=\"" + num(px(xa)) + "\" y1=\"" + num(py(ya)) + "\" x2=\"" + num(px(xb)) +
             "\" y2=\"" + num(py(yb)) + "\" stroke=\"" + color + "\" stroke-width=\"1.5\"" +
             (dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
  }

  void bar(double xa, double xb, double h, const std::string& color) {
    body_ += "<rect x=\"" + num(px(xa)) + "\" y=\"" + num(py(h)) + "\" width=\"" +
             num(std::max(0.0, px(xb) - px(xa) - 1)) + "\" height=\"" + num(py(y0_) - py(h)) +
             "\" fill=\"" + color + "\" fill-opacity=\"0.6\"/>\n";
  }

  void legend(int slot, const std::string& label, const std::string& color) {
    const double y = kTop + 16 + 16 * slot;
    body_ += "<rect x=\"" + num(kWidth - kRight - 150) + "\" y=\"" + num(y - 9) +
             "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
    body_ += text(kWidth - kRight - 135, y, escape(label), "start");
  }

  std::string finish() const {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
           num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
  }

 private:
  static std::string text(double x, double y, const std::string& s, const char* anchor, int size = 12) {
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" +
           std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + s + "</text>\n";
  }

  double x0_, x1_, y0_, y1_;
  std::string body_;
};

std::pair<double, double> bounds(const std::vector<double>& v) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : v) {
    if (!std::isfinite(x)) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (!std::isfinite(lo)) return {0.0, 1.0};
  return {lo, hi};
}

}  // namespace

std::string psd_plot(const diagnostics::PsdEstimate& psd, const diagnostics::SlopeFit* fit,
                     const std::string& title) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t k = 0; k < psd.frequencies.size(); ++k) {
    if (psd.powers[k] > 0.0) {
      lx.push_back(std::log10(psd.frequencies[k]));
      ly.push_back(std::log10(psd.powers[k]));
    }
  }
  auto [xmin, xmax] = bounds(lx);
  auto [ymin, ymax] = bounds(ly);
  Canvas c(xmin, xmax, ymin, ymax);
  c.frame(title, "log10 frequency [1/s]", "log10 power");
  c.points(lx, ly, "#1f77b4");
  c.legend(0, "Welch PSD", "#1f77b4");
  if (fit) {
    // ln P = -beta ln f + C, drawn in base-10 coordinates.
    const double a = std::log10(fit->fit_range.omega_min);
    const double b = std::log10(fit->fit_range.omega_max);
    const double c0 = fit->intercept / std::log(10.0);
    c.line(a, c0 - fit->beta * a, b, c0 - fit->beta * b, "#d62728");
    c.legend(1, "fit beta=" + num(fit->beta), "#d62728");
  }
  return c.finish();
}

std::string qq_plot(const diagnostics::QQResult& qq, const std::string& title) {
  auto [tmin, tmax] = bounds(qq.theoretical);
  auto [emin, emax] = bounds(qq.empirical);
  const double lo = std::min(tmin, emin);
  const double hi = std::max(tmax, emax);
  Canvas c(lo, hi, lo, hi);
  c.frame(title, "normal quantile", "standardized sample quantile");
  c.line(lo, lo, hi, hi, "#888", true);
  c.points(qq.theoretical, qq.empirical, "#1f77b4");
  c.legend(0, "max dev " + num(qq.max_deviation), "#1f77b4");
  return c.finish();
}

std::string histogram_plot(const diagnostics::Histogram& local, const diagnostics::Histogram& global,
                           const std::string& title, const std::string& x_label) {
  const double lo = local.lower;
  const double hi = local.lower + local.bin_width * static_cast<double>(local.counts.size());
  int top = 1;
  for (int v : local.counts) top = std::max(top, v);
  for (int v : global.counts) top = std::max(top, v);
  Canvas c(lo, hi, 0.0, top);
  c.frame(title, x_label, "count");
  for (std::size_t i = 0; i < local.counts.size(); ++i) {
    const double a = lo + local.bin_width * static_cast<double>(i);
    if (local.counts[i] > 0) c.bar(a, a + local.bin_width, local.counts[i], "#1f77b4");
  }
  for (std::size_t i = 0; i < global.counts.size(); ++i) {
    const double a = global.lower + global.bin_width * static_cast<double>(i);
    if (global.counts[i] > 0) c.bar(a, a + global.bin_width, global.counts[i], "#ff7f0e");
  }
  c.legend(0, "local", "#1f77b4");
  c.legend(1, "global", "#ff7f0e");
  return c.finish();
}

}  // namespace loewner::svg
